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

#include "modsim/txmodel.hpp"

#include <algorithm>
#include <limits>

#include "modsim/utf8.hpp"

namespace modsim::txmodel {

bool is_semantic(ByteView input) {
    const auto text = utf8::decode(input);
    if (!text || text->size() < kMinSemanticChars) return false;

    const auto controls = std::count_if(text->begin(), text->end(), utf8::is_control);
    const auto printable = static_cast<double>(text->size() - static_cast<std::size_t>(controls));
    if (printable < kMinPrintableRatio * static_cast<double>(text->size())) return false;

    return std::any_of(text->begin(), text->end(), utf8::is_alphabetic);
}

Bytes encode_idm(std::string_view message) {
    Bytes out = to_bytes(message);
    if (!utf8::is_valid(out)) throw std::invalid_argument("message is not valid UTF-8");
    return out;
}

std::optional<DecodedMessage> decode_idm(ByteView input) {
    if (!is_semantic(input)) return std::nullopt;
    return DecodedMessage{to_string(input), input.size()};
}

DecodedMessage make_message(std::string_view text) { return DecodedMessage{std::string(text), text.size()}; }

void validate(const TxFieldsMeta& meta) {
    if (meta.maxPriorityFeePerGas > meta.maxFeePerGas) {
        throw std::invalid_argument("maxPriorityFeePerGas exceeds maxFeePerGas");
    }
    if (meta.gasLimit < kMinTransferGas) {
        throw std::invalid_argument("gasLimit below 21000");
    }
}

Transaction build_transaction(TxFieldsMeta meta, Bytes input) {
    validate(meta);
    return Transaction{std::move(meta), std::move(input)};
}

namespace {

const nlohmann::json& require(const nlohmann::json& obj, const char* field) {
    auto it = obj.find(field);
    if (it == obj.end()) throw TxParseError(field, "missing");
    if (!it->is_string()) throw TxParseError(field, "expected a string");
    return *it;
}

Bytes parse_bytes(const nlohmann::json& obj, const char* field) {
    const auto& text = require(obj, field).get_ref<const std::string&>();
    if (text.size() < 2 || text[0] != '0' || text[1] != 'x') throw TxParseError(field, "expected 0x-prefixed hex");
    auto bytes = from_hex(text);
    if (!bytes) throw TxParseError(field, "malformed hex '" + text + "'");
    return *std::move(bytes);
}

Address parse_address(const nlohmann::json& obj, const char* field) {
    auto bytes = parse_bytes(obj, field);
    if (bytes.size() != 20) throw TxParseError(field, "address must be 20 bytes");
    Address a;
    std::copy(bytes.begin(), bytes.end(), a.bytes.begin());
    return a;
}

Wei parse_wei(const nlohmann::json& obj, const char* field) {
    const auto& text = require(obj, field).get_ref<const std::string&>();
    auto value = wei_from_decimal(text);
    if (!value) throw TxParseError(field, "expected a decimal integer, got '" + text + "'");
    return *value;
}

std::uint64_t parse_u64(const nlohmann::json& obj, const char* field) {
    const Wei value = parse_wei(obj, field);
    if (value > std::numeric_limits<std::uint64_t>::max()) throw TxParseError(field, "exceeds 64 bits");
    return static_cast<std::uint64_t>(value);
}

}  // namespace

nlohmann::json tx_to_json_value(const Transaction& tx) {
    return nlohmann::json{
        {"from", to_hex(tx.meta.from)},
        {"to", to_hex(tx.meta.to)},
        {"value", to_decimal(tx.meta.value)},
        {"nonce", std::to_string(tx.meta.nonce)},
        {"gasLimit", std::to_string(tx.meta.gasLimit)},
        {"maxFeePerGas", to_decimal(tx.meta.maxFeePerGas)},
        {"maxPriorityFeePerGas", to_decimal(tx.meta.maxPriorityFeePerGas)},
        {"input", to_hex(tx.input)},
        {"senderSig", to_hex(tx.meta.senderSig)},
    };
}

Transaction tx_from_json_value(const nlohmann::json& value) {
    if (!value.is_object()) throw TxParseError("<root>", "expected a JSON object");
    Transaction tx;
    tx.meta.from = parse_address(value, "from");
    tx.meta.to = parse_address(value, "to");
    tx.meta.value = parse_wei(value, "value");
    tx.meta.nonce = parse_u64(value, "nonce");
    tx.meta.gasLimit = parse_u64(value, "gasLimit");
    tx.meta.maxFeePerGas = parse_wei(value, "maxFeePerGas");
    tx.meta.maxPriorityFeePerGas = parse_wei(value, "maxPriorityFeePerGas");
    tx.input = parse_bytes(value, "input");
    tx.meta.senderSig = parse_bytes(value, "senderSig");
    return tx;
}

std::string tx_to_json(const Transaction& tx) { return tx_to_json_value(tx).dump(); }

Transaction tx_from_json(std::string_view text) {
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw TxParseError("<root>", e.what());
    }
    return tx_from_json_value(value);
}

}  // namespace modsim::txmodel
