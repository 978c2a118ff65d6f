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

#include "modsim/proof.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <openssl/rand.h>

#include "modsim/keccak.hpp"
#include "secp256k1.hpp"

namespace modsim::proof {

namespace {

secp256k1::RecoverableSignature unpack(const ModerationProof& proof) {
    secp256k1::RecoverableSignature sig;
    std::copy_n(proof.sigBytes.begin(), 32, sig.r.begin());
    std::copy_n(proof.sigBytes.begin() + 32, 32, sig.s.begin());
    sig.recid = proof.sigBytes[64];
    return sig;
}

ModerationProof pack(const secp256k1::RecoverableSignature& sig) {
    ModerationProof proof;
    std::copy(sig.r.begin(), sig.r.end(), proof.sigBytes.begin());
    std::copy(sig.s.begin(), sig.s.end(), proof.sigBytes.begin() + 32);
    proof.sigBytes[64] = sig.recid;
    return proof;
}

}  // namespace

std::optional<ModerationProof> ModerationProof::parse(ByteView bytes) {
    if (bytes.size() != kProofSize || bytes[64] > 3) return std::nullopt;
    ModerationProof proof;
    std::copy(bytes.begin(), bytes.end(), proof.sigBytes.begin());
    if (!secp256k1::is_low_s(unpack(proof).s)) return std::nullopt;
    return proof;
}

ClassifierKeyPair keygen(std::optional<Hash256> seed) {
    Hash256 secret{};
    if (seed) {
        secret = *seed;
        while (!secp256k1::is_valid_secret(secret)) secret = keccak256(secret);
    } else {
        do {
            if (RAND_bytes(secret.data(), static_cast<int>(secret.size())) != 1) {
                throw std::runtime_error("OpenSSL RAND_bytes failed");
            }
        } while (!secp256k1::is_valid_secret(secret));
    }
    return ClassifierKeyPair{secret, secp256k1::public_key(secret)};
}

Hash256 message_hash(const txmodel::DecodedMessage& message) { return keccak256(to_bytes(message.text)); }

ModerationProof issue_proof(const ClassifierKeyPair& keys, const txmodel::DecodedMessage& message,
                            const classifier::ClassifierConfig& config) {
    const auto verdict = classifier::classify(message, config);
    if (verdict.label == classifier::Label::toxic) {
        throw AttestationRefused("classifier labelled the message toxic; no proof issued");
    }
    return pack(secp256k1::sign(keys.secretKey, message_hash(message)));
}

Bytes embed_proof(ByteView messageBytes, const ModerationProof& proof) {
    Bytes out;
    out.reserve(messageBytes.size() + kProofSize);
    out.insert(out.end(), messageBytes.begin(), messageBytes.end());
    out.insert(out.end(), proof.sigBytes.begin(), proof.sigBytes.end());
    return out;
}

std::optional<std::pair<Bytes, ModerationProof>> split_proof(ByteView input, const PublicKey& pk) {
    if (input.size() < kProofSize + 1) return std::nullopt;
    const auto prefix = input.first(input.size() - kProofSize);
    auto proof = ModerationProof::parse(input.last(kProofSize));
    if (!proof || !verify_digest(pk, keccak256(prefix), *proof)) return std::nullopt;
    return std::make_pair(Bytes(prefix.begin(), prefix.end()), *proof);
}

std::optional<txmodel::DecodedMessage> locate_message(ByteView input) {
    if (input.size() > kProofSize && ModerationProof::parse(input.last(kProofSize))) {
        if (auto msg = txmodel::decode_idm(input.first(input.size() - kProofSize))) return msg;
    }
    return txmodel::decode_idm(input);
}

bool verify_digest(const PublicKey& pk, const Hash256& digest, const ModerationProof& proof) {
    const auto recovered = secp256k1::recover(digest, unpack(proof));
    return recovered && *recovered == pk;
}

bool verify_proof(const PublicKey& pk, const txmodel::DecodedMessage& message, const ModerationProof& proof) {
    return verify_digest(pk, message_hash(message), proof);
}

std::optional<PublicKey> public_key_from_hex(std::string_view text) {
    auto bytes = from_hex(text);
    if (!bytes || bytes->size() != 33) return std::nullopt;
    PublicKey pk;
    std::copy(bytes->begin(), bytes->end(), pk.begin());
    if (!secp256k1::is_valid_public_key(pk)) return std::nullopt;
    return pk;
}

void save_secret_key(const std::filesystem::path& path, const ClassifierKeyPair& keys) {
    namespace fs = std::filesystem;
    {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write key file " + path.string());
    }
    fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
    std::ofstream out(path, std::ios::trunc);
    out << to_hex(keys.secretKey) << '\n';
    if (!out) throw std::runtime_error("cannot write key file " + path.string());
}

ClassifierKeyPair load_secret_key(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open key file " + path.string());
    std::string text;
    in >> text;
    auto bytes = from_hex(text);
    if (!bytes || bytes->size() != 32) throw std::runtime_error("key file does not hold a 32-byte hex secret");
    Hash256 secret;
    std::copy(bytes->begin(), bytes->end(), secret.begin());
    if (!secp256k1::is_valid_secret(secret)) throw std::runtime_error("key file secret is not a valid scalar");
    return ClassifierKeyPair{secret, secp256k1::public_key(secret)};
}

}  // namespace modsim::proof
