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

#include "modsim/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace modsim::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
    return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

Decision include(Reason reason, double elapsed) { return Decision{Outcome::include, reason, elapsed}; }
Decision exclude(Reason reason, double elapsed) { return Decision{Outcome::exclude, reason, elapsed}; }

}  // namespace

std::string_view to_string(Outcome outcome) { return outcome == Outcome::include ? "include" : "exclude"; }

std::string_view to_string(Reason reason) {
    switch (reason) {
        case Reason::noSemanticContent: return "noSemanticContent";
        case Reason::nonToxicVerdict: return "nonToxicVerdict";
        case Reason::toxicVerdict: return "toxicVerdict";
        case Reason::validProof: return "validProof";
        case Reason::missingProof: return "missingProof";
        case Reason::invalidProof: return "invalidProof";
        case Reason::insufficientFee: return "insufficientFee";
        case Reason::insufficientGasLimit: return "insufficientGasLimit";
        case Reason::classifierError: return "classifierError";
        case Reason::execInvalid: return "execInvalid";
        case Reason::blockGasExhausted: return "blockGasExhausted";
    }
    return "unknown";
}

std::uint64_t ChainState::nonce(const Address& a) const {
    auto it = perAccountNonce.find(a);
    return it == perAccountNonce.end() ? 0 : it->second;
}

Wei ChainState::balance(const Address& a) const {
    auto it = perAccountBalance.find(a);
    return it == perAccountBalance.end() ? defaultBalance : it->second;
}

bool exec_valid(const txmodel::Transaction& tx, const ChainState& state) {
    if (tx.meta.gasLimit < txmodel::kMinTransferGas) return false;
    if (tx.meta.nonce != state.nonce(tx.meta.from)) return false;
    return state.balance(tx.meta.from) >= tx.meta.value + Wei(tx.meta.gasLimit) * tx.meta.maxFeePerGas;
}

Wei effective_priority_fee(const txmodel::TxFieldsMeta& meta, const Wei& baseFee) {
    if (meta.maxFeePerGas <= baseFee) return 0;
    return std::min(meta.maxPriorityFeePerGas, Wei(meta.maxFeePerGas - baseFee));
}

Decision builder_mod_filter(const txmodel::Transaction& tx, const classifier::ClassifierConfig& classifierConfig,
                            const fees::FeeSchedule& feeSchedule, const TimingOptions& timing) {
    const bool modeled = timing.timing == Timing::modeled;
    const auto start = Clock::now();

    const auto msg = txmodel::decode_idm(tx.input);
    if (!msg) return include(Reason::noSemanticContent, modeled ? 0.0 : micros_since(start));

    if (!fees::fee_sufficient(tx, Mode::builderMod, feeSchedule, fees::pricing_for(classifierConfig.backend),
                              classifierConfig.bytesPerToken)) {
        return exclude(Reason::insufficientFee, modeled ? 0.0 : micros_since(start));
    }

    const auto clf_start = Clock::now();
    classifier::Verdict verdict;
    try {
        verdict = classifier::classify(*msg, classifierConfig);
    } catch (const classifier::ClassifierUnavailable&) {
        return exclude(Reason::classifierError, modeled ? 0.0 : micros_since(start));
    }
    const double clf_wall = micros_since(clf_start);

    double elapsed;
    if (modeled) {
        elapsed = classifierConfig.backend == classifier::Backend::simulated
                      ? verdict.latencyMicros
                      : classifierConfig.latency.predict(msg->byteLength);
    } else {
        // swap the measured classifier call for the verdict's latency, which is the modeled
        // service time for the simulated backend and the same wall time otherwise
        elapsed = micros_since(start) - clf_wall + verdict.latencyMicros;
    }

    return verdict.label == classifier::Label::toxic ? exclude(Reason::toxicVerdict, elapsed)
                                                     : include(Reason::nonToxicVerdict, elapsed);
}

Decision user_mod_filter(const txmodel::Transaction& tx, const proof::PublicKey& classifierPk,
                         const fees::FeeSchedule& feeSchedule, const TimingOptions& timing) {
    const bool modeled = timing.timing == Timing::modeled;
    const auto start = Clock::now();

    const auto msg = proof::locate_message(tx.input);
    if (!msg) return include(Reason::noSemanticContent, modeled ? 0.0 : micros_since(start));

    const auto split = proof::split_proof(tx.input, classifierPk);
    Decision d;
    if (split) {
        d = tx.meta.gasLimit >= fees::gas_used_mod(split->first.size(), feeSchedule)
                ? include(Reason::validProof, 0.0)
                : exclude(Reason::insufficientGasLimit, 0.0);
    } else if (txmodel::is_semantic(tx.input)) {
        d = exclude(Reason::missingProof, 0.0);  // the whole payload is a bare message
    } else {
        d = exclude(Reason::invalidProof, 0.0);
    }
    d.elapsedMicros = modeled ? timing.userModVerify.predict(msg->byteLength) : micros_since(start);
    return d;
}

Decision validate_candidate(const txmodel::Transaction& tx, const ChainState& state, const PipelineConfig& config) {
    const bool modeled = config.timing.timing == Timing::modeled;
    const auto start = Clock::now();
    const bool valid = exec_valid(tx, state);
    const double exec_micros = modeled ? config.timing.baseline.predict(tx.input.size()) : micros_since(start);
    if (!valid) return exclude(Reason::execInvalid, exec_micros);

    Decision d;
    switch (config.mode) {
        case Mode::none: return include(Reason::noSemanticContent, exec_micros);
        case Mode::builderMod: d = builder_mod_filter(tx, config.classifier, config.fees, config.timing); break;
        case Mode::userMod: d = user_mod_filter(tx, config.classifierPk, config.fees, config.timing); break;
    }

    if (modeled && config.mode == Mode::userMod && d.elapsedMicros > 0.0) {
        return d;  // the verification model is end-to-end, baseline included
    }
    d.elapsedMicros += exec_micros;
    return d;
}

Gas gas_charged(const txmodel::Transaction& tx, const Decision& decision, const fees::FeeSchedule& feeSchedule) {
    if (decision.reason == Reason::validProof) {
        return fees::gas_used_mod(tx.input.size() - proof::kProofSize, feeSchedule);
    }
    return feeSchedule.baseGas;
}

Block build_block(const std::vector<txmodel::Transaction>& mempool, ChainState& state, const PipelineConfig& config,
                  std::uint64_t blockNumber) {
    std::vector<std::size_t> order(mempool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return mempool[a].meta.maxPriorityFeePerGas > mempool[b].meta.maxPriorityFeePerGas;
    });

    Block block;
    block.number = blockNumber;
    block.decisions.reserve(mempool.size());

    for (const auto index : order) {
        const auto& tx = mempool[index];
        Decision d = validate_candidate(tx, state, config);
        if (d.included()) {
            const Gas gas = gas_charged(tx, d, config.fees);
            if (block.totalGasUsed + gas > config.blockGasLimit) {
                d.outcome = Outcome::exclude;
                d.reason = Reason::blockGasExhausted;
            } else {
                const Wei tip = effective_priority_fee(tx.meta, config.fees.baseFee);
                const Wei price = std::min(tx.meta.maxFeePerGas, Wei(config.fees.baseFee + tip));
                state.perAccountBalance[tx.meta.from] = state.balance(tx.meta.from) - tx.meta.value - Wei(gas) * price;
                state.perAccountBalance[tx.meta.to] = state.balance(tx.meta.to) + tx.meta.value;
                state.perAccountNonce[tx.meta.from] = tx.meta.nonce + 1;
                block.totalGasUsed += gas;
                block.builderRewardWei += Wei(gas) * tip;
                block.txs.push_back(tx);
            }
        }
        block.decisions.push_back(DecisionRecord{index, d});
    }
    return block;
}

txmodel::Transaction adversary_submit(std::string_view message, const txmodel::TxFieldsMeta& meta) {
    return txmodel::build_transaction(meta, txmodel::encode_idm(message));
}

nlohmann::json block_to_json(const Block& block) {
    nlohmann::json decisions = nlohmann::json::array();
    for (const auto& rec : block.decisions) {
        decisions.push_back({
            {"txIndex", rec.txIndex},
            {"outcome", to_string(rec.decision.outcome)},
            {"reason", to_string(rec.decision.reason)},
            {"elapsedMicros", rec.decision.elapsedMicros},
        });
    }
    return nlohmann::json{
        {"number", block.number},
        {"totalGasUsed", block.totalGasUsed},
        {"builderRewardWei", to_decimal(block.builderRewardWei)},
        {"txs", mempool_to_json(block.txs)},
        {"decisions", std::move(decisions)},
    };
}

std::vector<txmodel::Transaction> mempool_from_json(const nlohmann::json& value) {
    if (!value.is_array()) throw txmodel::TxParseError("<root>", "mempool must be a JSON array");
    std::vector<txmodel::Transaction> out;
    out.reserve(value.size());
    for (const auto& item : value) out.push_back(txmodel::tx_from_json_value(item));
    return out;
}

nlohmann::json mempool_to_json(const std::vector<txmodel::Transaction>& mempool) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& tx : mempool) out.push_back(txmodel::tx_to_json_value(tx));
    return out;
}

ChainState chain_state_from_json(const nlohmann::json& value) {
    ChainState state;
    if (!value.is_object()) throw std::invalid_argument("chain state must be a JSON object");
    if (auto it = value.find("defaultBalance"); it != value.end()) {
        auto wei = wei_from_decimal(it->get<std::string>());
        if (!wei) throw std::invalid_argument("defaultBalance is not a decimal integer");
        state.defaultBalance = *wei;
    }
    if (auto it = value.find("accounts"); it != value.end()) {
        for (const auto& [key, account] : it->items()) {
            auto addr = address_from_hex(key);
            if (!addr) throw std::invalid_argument("bad account address '" + key + "'");
            if (auto b = account.find("balance"); b != account.end()) {
                auto wei = wei_from_decimal(b->get<std::string>());
                if (!wei) throw std::invalid_argument("bad balance for " + key);
                state.perAccountBalance[*addr] = *wei;
            }
            if (auto n = account.find("nonce"); n != account.end()) {
                state.perAccountNonce[*addr] = std::stoull(n->get<std::string>());
            }
        }
    }
    return state;
}

}  // namespace modsim::pipeline
