/*
   Copyright 2026 The ModSim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "modsim/bytes.hpp"

namespace modsim {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(ByteView data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 + data.size() * 2);
    out += "0x";
    for (auto b : data) {
        out += kDigits[b >> 4];
        out += kDigits[b & 0x0f];
    }
    return out;
}

std::optional<Bytes> from_hex(std::string_view text) {
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        text.remove_prefix(2);
    }
    if (text.size() % 2 != 0) return std::nullopt;
    Bytes out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2) {
        const int hi = hex_digit(text[i]);
        const int lo = hex_digit(text[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string to_hex(const Address& address) { return to_hex(ByteView{address.bytes}); }

std::optional<Address> address_from_hex(std::string_view text) {
    auto raw = from_hex(text);
    if (!raw || raw->size() != 20) return std::nullopt;
    Address a;
    std::copy(raw->begin(), raw->end(), a.bytes.begin());
    return a;
}

Bytes to_bytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

std::string to_string(ByteView data) { return std::string(data.begin(), data.end()); }

std::string to_decimal(const Wei& value) { return value.str(); }

std::optional<Wei> wei_from_decimal(std::string_view text) {
    if (text.empty() || text.size() > 78) return std::nullopt;
    boost::multiprecision::uint512_t acc = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
        acc = acc * 10 + (c - '0');
    }
    if (acc > boost::multiprecision::uint512_t(std::numeric_limits<Wei>::max())) return std::nullopt;
    return static_cast<Wei>(acc);
}

}  // namespace modsim
