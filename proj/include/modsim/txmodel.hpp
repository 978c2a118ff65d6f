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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "modsim/bytes.hpp"

namespace modsim::txmodel {

inline constexpr Gas kMinTransferGas = 21000;

/// Everything in a transaction except its semantic payload.
struct TxFieldsMeta {
    Address from;
    Address to;
    Wei value = 0;
    std::uint64_t nonce = 0;
    Gas gasLimit = kMinTransferGas;
    Wei maxFeePerGas = 0;
    Wei maxPriorityFeePerGas = 0;
    Bytes senderSig;  // carried, never verified

    friend bool operator==(const TxFieldsMeta&, const TxFieldsMeta&) = default;
};

struct Transaction {
    TxFieldsMeta meta;
    Bytes input;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct DecodedMessage {
    std::string text;
    std::size_t byteLength = 0;

    friend bool operator==(const DecodedMessage&, const DecodedMessage&) = default;
};

/// Raised by tx_from_json; field() names the offending JSON key.
class TxParseError : public std::runtime_error {
public:
    TxParseError(std::string field, const std::string& what)
        : std::runtime_error("field '" + field + "': " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

inline constexpr std::size_t kMinSemanticChars = 4;
inline constexpr double kMinPrintableRatio = 0.9;

/// True when the bytes look like a human message: valid UTF-8, at least four code
/// points, at least 90% non-control characters, and at least one letter in any script.
/// ABI-encoded calls fail on the selector bytes or zero padding.
bool is_semantic(ByteView input);

/// UTF-8 bytes of the message. Throws std::invalid_argument if message is not valid UTF-8.
Bytes encode_idm(std::string_view message);

std::optional<DecodedMessage> decode_idm(ByteView input);

DecodedMessage make_message(std::string_view text);

/// Throws std::invalid_argument when the fee or gas-limit invariants do not hold.
void validate(const TxFieldsMeta& meta);

Transaction build_transaction(TxFieldsMeta meta, Bytes input);

nlohmann::json tx_to_json_value(const Transaction& tx);
Transaction tx_from_json_value(const nlohmann::json& value);

std::string tx_to_json(const Transaction& tx);
Transaction tx_from_json(std::string_view text);

}  // namespace modsim::txmodel
