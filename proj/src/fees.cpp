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

#include "modsim/fees.hpp"

#include <cmath>
#include <stdexcept>

#include "modsim/proof.hpp"

namespace modsim::fees {

namespace {

constexpr std::uint64_t kGwei = 1'000'000'000ULL;

Wei wei_from_real(long double value) {
    if (!(value >= 0.0L)) throw std::invalid_argument("negative fee");
    return Wei(std::floor(value + 0.5L));
}

}  // namespace

void validate(const FeeSchedule& s) {
    if (s.baseGas != kBaseGas) throw std::invalid_argument("baseGas must be 21000");
    if (!(s.ethUsdRate > 0.0)) throw std::invalid_argument("ethUsdRate must be > 0");
    if (!(s.cUsdPerToken >= 0.0)) throw std::invalid_argument("cUsdPerToken must be >= 0");
}

FeeSchedule paper_calibrated_profile() {
    FeeSchedule s;
    s.f0 = Wei(1'000'000'000'000ULL);  // 1000 gwei
    s.f1 = Wei(kGwei);
    s.cUsdPerToken = llm_pricing("openai/gpt-4.1")->usd_per_token();
    s.alpha = 262828;
    s.beta = 4102;
    s.baseFee = Wei(10 * kGwei);
    s.priorityFee = Wei(2 * kGwei);
    return s;
}

FeeSchedule zero_profile() {
    FeeSchedule s;
    s.baseFee = Wei(10 * kGwei);
    s.priorityFee = Wei(2 * kGwei);
    return s;
}

FeeSchedule profile(std::string_view name) {
    if (name == "paper-calibrated") return paper_calibrated_profile();
    if (name == "zero") return zero_profile();
    throw std::invalid_argument("unknown fee profile '" + std::string(name) + "'");
}

const std::vector<ModelPricing>& llm_pricing_table() {
    static const std::vector<ModelPricing> table = {
        {"openai/gpt-4.1", 0.616, 341, 0.00069},
        {"openai/gpt-4o", 0.921, 341, 0.000863},
        {"qwen/qwen3-coder", 1.214, 354, 0.000715},
        {"google/gemini-2.5-pro", 6.649, 333, 0.00445},
        {"google/gemma-3-27b-it", 0.901, 338, 0.0000347},
        {"anthropic/claude-sonnet-4", 13.319, 420, 0.00132},
        {"deepseek/deepseek-r1-0528", 7.463, 347, 0.000207},
    };
    return table;
}

std::optional<ModelPricing> llm_pricing(std::string_view model) {
    for (const auto& row : llm_pricing_table()) {
        if (row.model == model) return row;
    }
    return std::nullopt;
}

ModExecPricing pricing_for(classifier::Backend backend) {
    return backend == classifier::Backend::lexicon ? ModExecPricing::local : ModExecPricing::external;
}

std::uint64_t round_half_up(double value) {
    if (!(value >= 0.0)) throw std::invalid_argument("cannot round a negative gas quantity");
    return static_cast<std::uint64_t>(std::floor(value + 0.5));
}

Wei mod_exec_fee_local(std::size_t msgBytes, const FeeSchedule& s) { return s.f0 + s.f1 * msgBytes; }

Wei mod_exec_fee_external(const txmodel::DecodedMessage& msg, const FeeSchedule& s,
                          classifier::Rational bytesPerToken) {
    const auto tokens = classifier::num_tokens(msg, bytesPerToken);
    const long double wei_per_token = static_cast<long double>(s.cUsdPerToken) / s.ethUsdRate * 1e18L;
    return wei_from_real(wei_per_token * static_cast<long double>(tokens));
}

Wei mod_exec_fee(const txmodel::DecodedMessage& msg, const FeeSchedule& s, ModExecPricing pricing,
                 classifier::Rational bytesPerToken) {
    return pricing == ModExecPricing::local ? mod_exec_fee_local(msg.byteLength, s)
                                            : mod_exec_fee_external(msg, s, bytesPerToken);
}

double wei_to_usd(const Wei& wei, const FeeSchedule& s) {
    return static_cast<double>(wei.convert_to<long double>() / 1e18L * s.ethUsdRate);
}

Gas gas_used_mod(std::size_t msgBytes, const FeeSchedule& s) {
    return s.baseGas + s.alpha + s.beta * static_cast<Gas>(msgBytes);
}

Wei total_fee(std::size_t msgBytes, const FeeSchedule& s) {
    return Wei(gas_used_mod(msgBytes, s)) * (s.baseFee + s.priorityFee);
}

Wei builder_reward(std::size_t msgBytes, const FeeSchedule& s) {
    return Wei(gas_used_mod(msgBytes, s)) * s.priorityFee;
}

Gas recommended_gas_limit(std::size_t msgBytes, const FeeSchedule& s) { return gas_used_mod(msgBytes, s) + s.epsilon; }

GasCalibration calibrate_gas_model(const classifier::LatencyModel& fit, double baselineMicros, Gas baseGas) {
    if (!(baselineMicros > 0.0)) throw std::invalid_argument("baseline validation time must be > 0");
    if (fit.interceptMicros < baselineMicros) throw std::invalid_argument("fit intercept is below the baseline");
    if (fit.slopeMicrosPerByte < 0.0) throw std::invalid_argument("fit slope is negative");
    const double gas_per_micro = static_cast<double>(baseGas) / baselineMicros;
    return GasCalibration{round_half_up((fit.interceptMicros - baselineMicros) * gas_per_micro),
                          round_half_up(fit.slopeMicrosPerByte * gas_per_micro)};
}

bool fee_sufficient(const txmodel::Transaction& tx, Mode mode, const FeeSchedule& s, ModExecPricing pricing,
                    classifier::Rational bytesPerToken) {
    const auto msg = mode == Mode::userMod ? proof::locate_message(tx.input) : txmodel::decode_idm(tx.input);
    if (!msg) throw std::logic_error("fee_sufficient requires a transaction with semantic content");
    switch (mode) {
        case Mode::none: return true;
        case Mode::builderMod:
            return Wei(tx.meta.gasLimit) * tx.meta.maxPriorityFeePerGas >= mod_exec_fee(*msg, s, pricing, bytesPerToken);
        case Mode::userMod: return tx.meta.gasLimit >= gas_used_mod(msg->byteLength, s);
    }
    return false;
}

}  // namespace modsim::fees
