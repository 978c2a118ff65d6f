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
#include <optional>

#include "modsim/bytes.hpp"

// Recoverable ECDSA over secp256k1 on top of OpenSSL's generic EC arithmetic.
namespace modsim::secp256k1 {

using CompressedPoint = std::array<std::uint8_t, 33>;

struct RecoverableSignature {
    Hash256 r{};
    Hash256 s{};
    std::uint8_t recid = 0;
};

bool is_valid_secret(const Hash256& secret);
CompressedPoint public_key(const Hash256& secret);
bool is_valid_public_key(const CompressedPoint& point);

/// RFC 6979 (HMAC-SHA256) nonce, low-s normalized.
RecoverableSignature sign(const Hash256& secret, const Hash256& digest);

/// Rejects r or s outside [1, n-1], high s, and recid > 3.
std::optional<CompressedPoint> recover(const Hash256& digest, const RecoverableSignature& sig);

bool is_low_s(const Hash256& s);
/// n - s; turns a canonical signature into its malleated twin.
Hash256 negate_scalar(const Hash256& s);

}  // namespace modsim::secp256k1
