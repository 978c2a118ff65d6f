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
#include <string>
#include <string_view>
#include <vector>

#include "modsim/bytes.hpp"
#include "modsim/classifier.hpp"
#include "modsim/mode.hpp"
#include "modsim/txmodel.hpp"

namespace modsim::fees {

inline constexpr Gas kBaseGas = 21000;

struct FeeSchedule {
    Wei f0 = 0;                 // fixed local moderation cost, wei
    Wei f1 = 0;                 // local moderation cost per message byte, wei
    double cUsdPerToken = 0.0;  // external classifier price
    double ethUsdRate = 2500.0;
    Gas alpha = 0;    // signature verification gas
    Gas beta = 0;     // per-byte hashing gas
    Gas epsilon = 0;  // out-of-gas headroom
    Gas baseGas = kBaseGas;
    Wei baseFee = 0;      // wei per gas
    Wei priorityFee = 0;  // wei per gas

    friend bool operator==(const FeeSchedule&, const FeeSchedule&) = default;
};

/// Throws std::invalid_argument unless baseGas is 21000, ethUsdRate > 0 and cUsdPerToken >= 0.
void validate(const FeeSchedule& s);

/// Calibrated UserMod gas model (alpha 262828, beta 4102); gpt-4.1 token price;
/// baseFee 10 gwei, priorityFee 2 gwei.
FeeSchedule paper_calibrated_profile();
/// Plain Ethereum: no moderation gas or fees.
FeeSchedule zero_profile();
/// "paper-calibrated" or "zero". Throws std::invalid_argument otherwise.
FeeSchedule profile(std::string_view name);

/// Per-query measurements for a 1,000-byte message on hosted LLMs.
struct ModelPricing {
    std::string_view model;
    double meanSeconds;
    std::uint64_t tokens;
    double costUsd;

    double usd_per_token() const { return costUsd / static_cast<double>(tokens); }
};

const std::vector<ModelPricing>& llm_pricing_table();
std::optional<ModelPricing> llm_pricing(std::string_view model);

enum class ModExecPricing { local, external };

/// Lexicon runs on the builder (local); simulated and http stand for hosted models (external).
ModExecPricing pricing_for(classifier::Backend backend);

/// Rounds half away from zero to the nearest integer; values are non-negative here.
std::uint64_t round_half_up(double value);

Wei mod_exec_fee_local(std::size_t msgBytes, const FeeSchedule& s);
Wei mod_exec_fee_external(const txmodel::DecodedMessage& msg, const FeeSchedule& s,
                          classifier::Rational bytesPerToken = {});
Wei mod_exec_fee(const txmodel::DecodedMessage& msg, const FeeSchedule& s, ModExecPricing pricing,
                 classifier::Rational bytesPerToken = {});

double wei_to_usd(const Wei& wei, const FeeSchedule& s);

Gas gas_used_mod(std::size_t msgBytes, const FeeSchedule& s);
Wei total_fee(std::size_t msgBytes, const FeeSchedule& s);
Wei builder_reward(std::size_t msgBytes, const FeeSchedule& s);
Gas recommended_gas_limit(std::size_t msgBytes, const FeeSchedule& s);

struct GasCalibration {
    Gas alpha = 0;
    Gas beta = 0;

    friend bool operator==(const GasCalibration&, const GasCalibration&) = default;
};

/// Converts a verification-time fit into gas by pricing one baseline validation at baseGas:
/// alpha = (intercept - baseline) * baseGas / baseline, beta = slope * baseGas / baseline.
/// Throws std::invalid_argument when baseline <= 0 or intercept < baseline.
GasCalibration calibrate_gas_model(const classifier::LatencyModel& fit, double baselineMicros, Gas baseGas = kBaseGas);

/// BuilderMod: gasLimit * maxPriorityFeePerGas >= modExecFee. UserMod: gasLimit >= gas_used_mod.
/// Mode::none is always sufficient. Throws std::logic_error when the input has no semantic content.
bool fee_sufficient(const txmodel::Transaction& tx, Mode mode, const FeeSchedule& s,
                    ModExecPricing pricing = ModExecPricing::local, classifier::Rational bytesPerToken = {});

}  // namespace modsim::fees
