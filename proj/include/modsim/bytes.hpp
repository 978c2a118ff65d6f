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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace modsim {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Hash256 = std::array<std::uint8_t, 32>;

// Wei amounts overflow 64 bits (gasLimit * maxFeePerGas alone can exceed it).
using Wei = boost::multiprecision::uint256_t;
using Gas = std::uint64_t;

struct Address {
    std::array<std::uint8_t, 20> bytes{};

    friend bool operator==(const Address&, const Address&) = default;
    friend auto operator<=>(const Address&, const Address&) = default;
};

// Lowercase hex with 0x prefix.
std::string to_hex(ByteView data);

// Accepts an optional 0x/0X prefix; returns nullopt on odd length or a non-hex digit.
std::optional<Bytes> from_hex(std::string_view text);

std::string to_hex(const Address& address);
std::optional<Address> address_from_hex(std::string_view text);

Bytes to_bytes(std::string_view text);
std::string to_string(ByteView data);

std::string to_decimal(const Wei& value);
// Plain base-10 digits only, no sign or whitespace; nullopt on overflow past 2^256-1.
std::optional<Wei> wei_from_decimal(std::string_view text);

}  // namespace modsim
