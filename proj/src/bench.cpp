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

#include "modsim/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "modsim/fees.hpp"
#include "modsim/txmodel.hpp"

namespace modsim::bench {

namespace {

std::atomic<bool> g_running{false};

class RunGuard {
public:
    RunGuard() {
        if (g_running.exchange(true)) throw std::logic_error("benchmark harness is single-threaded; already running");
    }
    ~RunGuard() { g_running.store(false); }
    RunGuard(const RunGuard&) = delete;
    RunGuard& operator=(const RunGuard&) = delete;
};

txmodel::TxFieldsMeta bench_meta(Gas gasLimit) {
    txmodel::TxFieldsMeta meta;
    meta.from.bytes.fill(0x11);
    meta.to.bytes.fill(0x22);
    meta.value = 1;
    meta.gasLimit = gasLimit;
    meta.maxFeePerGas = Wei(100'000'000'000ULL);
    meta.maxPriorityFeePerGas = Wei(2'000'000'000ULL);
    return meta;
}

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

Stats run(const txmodel::Transaction& tx, const pipeline::PipelineConfig& config, std::size_t warmup,
          std::size_t trials) {
    pipeline::ChainState state;
    state.defaultBalance = Wei(1) << 128;
    for (std::size_t i = 0; i < warmup; ++i) (void)pipeline::validate_candidate(tx, state, config);

    std::vector<double> xs;
    xs.reserve(trials);
    for (std::size_t i = 0; i < trials; ++i) {
        const auto d = pipeline::validate_candidate(tx, state, config);
        xs.push_back(d.elapsedMicros);
    }
    Stats s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

std::string format_row(const BenchSample& s, char sep) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s%c%zu%c%zu%c%.3f%c%.3f%c%.3f", std::string(to_string(s.mode)).c_str(), sep,
                  s.msgBytes, sep, s.trials, sep, s.meanMicros, sep, s.stdMicros, sep, s.expectedBlockMicros);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

void validate(const BlockComposition& comp) {
    if (!(comp.txPerBlock > 0.0) || !(comp.idmPerBlock > 0.0)) throw std::invalid_argument("block composition must be positive");
    if (comp.idmPerBlock > comp.txPerBlock) throw std::invalid_argument("idmPerBlock exceeds txPerBlock");
}

BenchConfig default_bench_config() {
    BenchConfig config;
    config.pipeline.classifier = classifier::paper_gpt41_profile();
    config.pipeline.fees = fees::paper_calibrated_profile();
    Hash256 seed;
    seed.fill(0x01);
    config.keys = proof::keygen(seed);
    config.pipeline.classifierPk = config.keys.publicKey;
    return config;
}

std::string synthetic_message(std::size_t bytes) {
    if (bytes < txmodel::kMinSemanticChars) throw std::invalid_argument("synthetic message needs at least 4 bytes");
    static constexpr std::string_view kSentence = "gm frens, wishing everyone a calm and kind day on chain. ";
    std::string out;
    out.reserve(bytes);
    while (out.size() < bytes) out += kSentence;
    out.resize(bytes);
    return out;
}

BenchSample measure_per_tx(Mode mode, std::size_t msgBytes, std::size_t trials, const BenchConfig& config) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    RunGuard guard;

    const auto text = synthetic_message(msgBytes);
    const auto message = txmodel::make_message(text);
    const auto& fee_schedule = config.pipeline.fees;

    Bytes input = txmodel::encode_idm(text);
    Gas gas_limit = std::max<Gas>(fees::recommended_gas_limit(msgBytes, fee_schedule), 100'000);
    if (mode == Mode::userMod) {
        input = proof::embed_proof(input, proof::issue_proof(config.keys, message, config.pipeline.classifier));
    }
    const auto tx = txmodel::build_transaction(bench_meta(gas_limit), input);

    pipeline::PipelineConfig pc = config.pipeline;
    pc.timing.timing = pipeline::Timing::wallClock;

    pc.mode = Mode::none;
    const Stats base = run(tx, pc, config.warmup, trials);

    BenchSample sample;
    sample.mode = mode;
    sample.msgBytes = msgBytes;
    sample.trials = trials;
    if (mode == Mode::none) {
        sample.meanMicros = base.mean;
        sample.stdMicros = base.stddev;
    } else {
        pc.mode = mode;
        const Stats moderated = run(tx, pc, config.warmup, trials);
        sample.meanMicros = moderated.mean;
        sample.stdMicros = moderated.stddev;
    }
    sample.expectedBlockMicros = expected_per_block(mode, config.composition, base.mean, sample.meanMicros);
    return sample;
}

std::vector<BenchSample> sweep(Mode mode, const std::vector<std::size_t>& lengths, std::size_t trials,
                               const BenchConfig& config) {
    std::vector<BenchSample> out;
    out.reserve(lengths.size());
    for (auto len : lengths) out.push_back(measure_per_tx(mode, len, trials, config));
    return out;
}

double expected_per_block(Mode mode, const BlockComposition& comp, double baseMicros, double modeMicros) {
    const double moderated = mode == Mode::none ? baseMicros : modeMicros;
    return (comp.txPerBlock - comp.idmPerBlock) * baseMicros + comp.idmPerBlock * moderated;
}

double expected_per_block(Mode mode, std::size_t msgBytes, const BlockComposition& comp,
                          const classifier::LatencyModel& base, const classifier::LatencyModel& moderated) {
    return expected_per_block(mode, comp, base.predict(msgBytes), moderated.predict(msgBytes));
}

classifier::LatencyModel fit_linear(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 2) throw std::invalid_argument("linear fit needs at least two points");
    const double n = static_cast<double>(samples.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : samples) mx += x, my += y;
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : samples) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("degenerate fit: all x values are identical");
    const double slope = sxy / sxx;
    return classifier::LatencyModel{my - slope * mx, slope};
}

void emit_csv(const std::vector<BenchSample>& samples, const std::filesystem::path& path) {
    std::string content = "mode,msg_bytes,trials,mean_us,std_us,expected_block_us\n";
    for (const auto& s : samples) content += format_row(s, ',') + "\n";
    write_file(path, content);
}

void emit_dat(const std::vector<BenchSample>& samples, const std::filesystem::path& path) {
    std::string content = "# mode msg_bytes trials mean_us std_us expected_block_us\n";
    for (const auto& s : samples) content += format_row(s, ' ') + "\n";
    write_file(path, content);
}

}  // namespace modsim::bench
