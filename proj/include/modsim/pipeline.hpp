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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "modsim/bytes.hpp"
#include "modsim/classifier.hpp"
#include "modsim/fees.hpp"
#include "modsim/mode.hpp"
#include "modsim/proof.hpp"
#include "modsim/txmodel.hpp"

namespace modsim::pipeline {

inline constexpr Gas kDefaultBlockGasLimit = 30'000'000;

enum class Outcome { include, exclude };

enum class Reason {
    noSemanticContent,
    nonToxicVerdict,
    toxicVerdict,
    validProof,
    missingProof,
    invalidProof,
    insufficientFee,
    insufficientGasLimit,
    classifierError,
    execInvalid,
    blockGasExhausted,
};

std::string_view to_string(Outcome outcome);
std::string_view to_string(Reason reason);

struct Decision {
    Outcome outcome = Outcome::exclude;
    Reason reason = Reason::execInvalid;
    double elapsedMicros = 0.0;

    bool included() const noexcept { return outcome == Outcome::include; }
};

struct DecisionRecord {
    std::size_t txIndex = 0;  // position in the submitted mempool
    Decision decision;
};

struct Block {
    std::uint64_t number = 0;
    std::vector<txmodel::Transaction> txs;
    std::vector<DecisionRecord> decisions;
    Gas totalGasUsed = 0;
    Wei builderRewardWei = 0;
};

/// Accounts absent from the maps start at nonce 0 with defaultBalance.
struct ChainState {
    std::map<Address, std::uint64_t> perAccountNonce;
    std::map<Address, Wei> perAccountBalance;
    Wei defaultBalance = 0;

    std::uint64_t nonce(const Address& a) const;
    Wei balance(const Address& a) const;
};

enum class Timing {
    wallClock,  // measured; simulated classifier latency is added instead of slept
    modeled,    // from the latency models below; bit-reproducible
};

struct TimingOptions {
    Timing timing = Timing::wallClock;
    classifier::LatencyModel baseline{5.12, 0.0};
    classifier::LatencyModel userModVerify{69.2, 0.0045};
};

struct PipelineConfig {
    Mode mode = Mode::none;
    classifier::ClassifierConfig classifier;
    proof::PublicKey classifierPk{};
    fees::FeeSchedule fees;
    Gas blockGasLimit = kDefaultBlockGasLimit;
    TimingOptions timing;
};

bool exec_valid(const txmodel::Transaction& tx, const ChainState& state);

/// EIP-1559 tip actually paid: min(maxPriorityFeePerGas, maxFeePerGas - baseFee), floored at 0.
Wei effective_priority_fee(const txmodel::TxFieldsMeta& meta, const Wei& baseFee);

Decision builder_mod_filter(const txmodel::Transaction& tx, const classifier::ClassifierConfig& classifierConfig,
                            const fees::FeeSchedule& feeSchedule, const TimingOptions& timing = {});

/// Semantic validity for proof-carrying inputs: no semantic content, a valid proof with enough
/// gas headroom, or exclusion.
Decision user_mod_filter(const txmodel::Transaction& tx, const proof::PublicKey& classifierPk,
                         const fees::FeeSchedule& feeSchedule, const TimingOptions& timing = {});

/// exec_valid followed by the configured mode's filter; elapsedMicros covers both.
Decision validate_candidate(const txmodel::Transaction& tx, const ChainState& state, const PipelineConfig& config);

/// Gas charged for an included transaction: gas_used_mod of the message for validProof, else baseGas.
Gas gas_charged(const txmodel::Transaction& tx, const Decision& decision, const fees::FeeSchedule& feeSchedule);

/// Single pass in priority-fee-descending order (stable for ties). Updates state for included txs.
Block build_block(const std::vector<txmodel::Transaction>& mempool, ChainState& state, const PipelineConfig& config,
                  std::uint64_t blockNumber = 1);

/// A syntactically ordinary transaction carrying a toxic message as its input data.
txmodel::Transaction adversary_submit(std::string_view message, const txmodel::TxFieldsMeta& meta);

nlohmann::json block_to_json(const Block& block);
std::vector<txmodel::Transaction> mempool_from_json(const nlohmann::json& value);
nlohmann::json mempool_to_json(const std::vector<txmodel::Transaction>& mempool);

/// {"defaultBalance": "<wei>", "accounts": {"0x..": {"balance": "<wei>", "nonce": "<n>"}}}
ChainState chain_state_from_json(const nlohmann::json& value);

}  // namespace modsim::pipeline
