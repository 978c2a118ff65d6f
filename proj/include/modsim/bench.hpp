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

#include <filesystem>
#include <utility>
#include <vector>

#include "modsim/classifier.hpp"
#include "modsim/mode.hpp"
#include "modsim/pipeline.hpp"
#include "modsim/proof.hpp"

namespace modsim::bench {

/// Mean transactions per block, all and IDM-carrying, over blocks 0 to 19,314,987.
struct BlockComposition {
    double txPerBlock = 117.78;
    double idmPerBlock = 0.27;
};

void validate(const BlockComposition& comp);

struct BenchSample {
    Mode mode = Mode::none;
    std::size_t msgBytes = 0;
    std::size_t trials = 0;
    double meanMicros = 0.0;
    double stdMicros = 0.0;
    double expectedBlockMicros = 0.0;

    friend bool operator==(const BenchSample&, const BenchSample&) = default;
};

struct BenchConfig {
    pipeline::PipelineConfig pipeline;  // mode is overridden per measurement
    proof::ClassifierKeyPair keys;      // signs the synthetic userMod payloads
    BlockComposition composition;
    std::size_t warmup = 10;
};

/// Builder-side defaults: gpt-4.1 simulated classifier, paper-calibrated fees, deterministic key.
BenchConfig default_bench_config();

inline const std::vector<std::size_t> kDefaultSweep = {10, 100, 1000, 10000, 100000};

/// Benign ASCII text of exactly `bytes` bytes (at least 4).
std::string synthetic_message(std::size_t bytes);

/// Wall-clocks validate_candidate on a synthetic non-toxic IDM, after `warmup` discarded runs.
/// Throws std::invalid_argument for trials == 0 and std::logic_error if another measurement
/// is already running in this process.
BenchSample measure_per_tx(Mode mode, std::size_t msgBytes, std::size_t trials, const BenchConfig& config);

std::vector<BenchSample> sweep(Mode mode, const std::vector<std::size_t>& lengths, std::size_t trials,
                               const BenchConfig& config);

/// (txPerBlock - idmPerBlock) * t_base + idmPerBlock * t_mode; Mode::none uses t_base throughout.
double expected_per_block(Mode mode, const BlockComposition& comp, double baseMicros, double modeMicros);
double expected_per_block(Mode mode, std::size_t msgBytes, const BlockComposition& comp,
                          const classifier::LatencyModel& base, const classifier::LatencyModel& moderated);

/// Ordinary least squares. Throws std::invalid_argument with fewer than two distinct x values.
classifier::LatencyModel fit_linear(const std::vector<std::pair<double, double>>& samples);

void emit_csv(const std::vector<BenchSample>& samples, const std::filesystem::path& path);
/// gnuplot-friendly: '#'-prefixed header, whitespace-separated columns.
void emit_dat(const std::vector<BenchSample>& samples, const std::filesystem::path& path);

}  // namespace modsim::bench
