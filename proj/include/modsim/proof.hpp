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
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <utility>

#include "modsim/bytes.hpp"
#include "modsim/classifier.hpp"
#include "modsim/txmodel.hpp"

namespace modsim::proof {

using PublicKey = std::array<std::uint8_t, 33>;  // SEC1 compressed

struct ClassifierKeyPair {
    Hash256 secretKey{};
    PublicKey publicKey{};
};

inline constexpr std::size_t kProofSize = 65;

/// r (32) || s (32) || recovery id (1). Only canonical (low-s) encodings are constructible via parse().
struct ModerationProof {
    std::array<std::uint8_t, kProofSize> sigBytes{};

    static std::optional<ModerationProof> parse(ByteView bytes);

    friend bool operator==(const ModerationProof&, const ModerationProof&) = default;
};

class AttestationRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A seed that is not a valid scalar is re-hashed with Keccak-256 until it is.
/// Without a seed the secret comes from the OpenSSL CSPRNG.
ClassifierKeyPair keygen(std::optional<Hash256> seed = std::nullopt);

Hash256 message_hash(const txmodel::DecodedMessage& message);

/// Classifies first and only signs non-toxic content. Throws AttestationRefused on a toxic
/// verdict; classifier::ClassifierUnavailable propagates.
ModerationProof issue_proof(const ClassifierKeyPair& keys, const txmodel::DecodedMessage& message,
                            const classifier::ClassifierConfig& config);

Bytes embed_proof(ByteView messageBytes, const ModerationProof& proof);

/// Treats the last 65 bytes as a candidate proof over Keccak-256 of the rest.
/// nullopt means no valid embedded proof for pk.
std::optional<std::pair<Bytes, ModerationProof>> split_proof(ByteView input, const PublicKey& pk);

/// Semantic detection for proof-carrying payloads: when the last 65 bytes parse as a proof, tries the
/// payload without them first, then the whole payload.
std::optional<txmodel::DecodedMessage> locate_message(ByteView input);

bool verify_proof(const PublicKey& pk, const txmodel::DecodedMessage& message, const ModerationProof& proof);
bool verify_digest(const PublicKey& pk, const Hash256& digest, const ModerationProof& proof);

std::optional<PublicKey> public_key_from_hex(std::string_view text);

/// Writes the secret as hex with owner-only permissions.
void save_secret_key(const std::filesystem::path& path, const ClassifierKeyPair& keys);
ClassifierKeyPair load_secret_key(const std::filesystem::path& path);

}  // namespace modsim::proof
