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

#include "modsim/classifier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "modsim/keccak.hpp"
#include "modsim/utf8.hpp"

namespace modsim::classifier {

std::string_view to_string(Label label) { return label == Label::toxic ? "toxic" : "nonToxic"; }

std::string_view to_string(Backend backend) {
    switch (backend) {
        case Backend::lexicon: return "lexicon";
        case Backend::simulated: return "simulated";
        case Backend::http: return "http";
    }
    return "unknown";
}

Backend backend_from_string(std::string_view name) {
    if (name == "lexicon") return Backend::lexicon;
    if (name == "simulated") return Backend::simulated;
    if (name == "http") return Backend::http;
    throw std::invalid_argument("unknown classifier backend '" + std::string(name) + "'");
}

LatencyModel LatencyModel::through(double x1, double y1, double x2, double y2) {
    if (x1 == x2) throw std::invalid_argument("anchor points share an x value");
    const double slope = (y2 - y1) / (x2 - x1);
    return LatencyModel{y1 - slope * x1, slope};
}

void validate(const LatencyModel& model) {
    if (!(model.interceptMicros > 0.0)) throw std::invalid_argument("latency intercept must be > 0");
    if (!(model.slopeMicrosPerByte >= 0.0)) throw std::invalid_argument("latency slope must be >= 0");
}

Rational Rational::parse(std::string_view text) {
    Rational r{0, 1};
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : text) {
        if (c == '.' && !seen_dot) {
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
        seen_digit = true;
        if (r.num > (std::numeric_limits<std::uint64_t>::max() - 9) / 10 ||
            (seen_dot && r.den > std::numeric_limits<std::uint64_t>::max() / 10)) {
            throw std::invalid_argument("decimal too long: '" + std::string(text) + "'");
        }
        r.num = r.num * 10 + static_cast<std::uint64_t>(c - '0');
        if (seen_dot) r.den *= 10;
    }
    if (!seen_digit) throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
    const auto g = std::gcd(r.num, r.den);
    if (g > 1) r.num /= g, r.den /= g;
    return r;
}

Lexicon::Lexicon(std::vector<std::string> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("lexicon is empty");
    folded_.reserve(terms_.size());
    for (const auto& t : terms_) {
        auto cps = utf8::decode(to_bytes(t));
        if (!cps) throw std::invalid_argument("lexicon term is not valid UTF-8");
        folded_.push_back(utf8::fold_case(*cps));
    }
}

Lexicon Lexicon::parse(std::string_view content) {
    std::vector<std::string> terms;
    std::istringstream in{std::string(content)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        terms.push_back(line.substr(first, last - first + 1));
    }
    return Lexicon(std::move(terms));
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open lexicon file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::shared_ptr<const Lexicon> Lexicon::builtin() {
    static const auto instance = std::make_shared<const Lexicon>(std::vector<std::string>{
        "zorgblat", "krennix", "vexmorr", "glurbnak", "snarvix",
        "threxul", "qwompt", "drazzik", "plonkvir", "murgath"});
    return instance;
}

bool Lexicon::matches(std::string_view text) const {
    auto cps = utf8::decode(to_bytes(text));
    if (!cps) return false;
    const auto folded = utf8::fold_case(*cps);
    return std::any_of(folded_.begin(), folded_.end(),
                       [&](const std::u32string& term) { return folded.find(term) != std::u32string::npos; });
}

const Lexicon& ClassifierConfig::active_lexicon() const { return lexicon ? *lexicon : *Lexicon::builtin(); }

void validate(const ClassifierConfig& config) {
    if (!(config.toxicRate >= 0.0 && config.toxicRate <= 1.0)) throw std::invalid_argument("toxicRate must be in [0,1]");
    if (!(config.jitterFraction >= 0.0 && config.jitterFraction <= kMaxJitterFraction)) {
        throw std::invalid_argument("jitterFraction must be in [0,0.05]");
    }
    if (config.bytesPerToken.num == 0 || config.bytesPerToken.den == 0) {
        throw std::invalid_argument("bytesPerToken must be positive");
    }
    if (config.backend == Backend::simulated) validate(config.latency);
}

ClassifierConfig paper_gpt41_profile() {
    ClassifierConfig config;
    config.backend = Backend::simulated;
    config.latency = LatencyModel::through(100.0, 1'098'690.91, 100'000.0, 1'772'946.65);
    config.modelName = "openai/gpt-4.1";
    return config;
}

Label lexicon_classify(const txmodel::DecodedMessage& message, const Lexicon& lexicon) {
    return lexicon.matches(message.text) ? Label::toxic : Label::nonToxic;
}

std::uint64_t num_tokens(const txmodel::DecodedMessage& message, Rational bytesPerToken) {
    if (bytesPerToken.num == 0 || bytesPerToken.den == 0) throw std::invalid_argument("bytesPerToken must be positive");
    // ceil(len * den / num) without floating point
    using boost::multiprecision::uint128_t;
    const uint128_t scaled = uint128_t(message.byteLength) * bytesPerToken.den;
    return static_cast<std::uint64_t>((scaled + bytesPerToken.num - 1) / bytesPerToken.num);
}

namespace {

// Per-call generator keyed on (seed, message hash) so concurrent callers see identical draws.
std::mt19937_64 call_rng(const txmodel::DecodedMessage& message, std::uint64_t seed) {
    const auto digest = keccak256(to_bytes(message.text));
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(digest[0] | digest[1] << 8 | digest[2] << 16 | digest[3] << 24),
                      static_cast<std::uint32_t>(digest[4] | digest[5] << 8 | digest[6] << 16 | digest[7] << 24)};
    return std::mt19937_64(seq);
}

Verdict simulated_classify(const txmodel::DecodedMessage& message, const ClassifierConfig& config) {
    auto rng = call_rng(message, config.rngSeed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Verdict v;
    v.label = unit(rng) < config.toxicRate ? Label::toxic : Label::nonToxic;
    const double jitter = config.jitterFraction * (2.0 * unit(rng) - 1.0);
    v.latencyMicros = config.latency.predict(message.byteLength) * (1.0 + jitter);
    v.tokenCount = num_tokens(message, config.bytesPerToken);
    return v;
}

Verdict lexicon_verdict(const txmodel::DecodedMessage& message, const ClassifierConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    v.label = lexicon_classify(message, config.active_lexicon());
    v.latencyMicros = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    v.tokenCount = num_tokens(message, config.bytesPerToken);
    return v;
}

}  // namespace

Verdict classify(const txmodel::DecodedMessage& message, const ClassifierConfig& config) {
    if (message.text.empty()) throw std::invalid_argument("cannot classify an empty message");
    switch (config.backend) {
        case Backend::lexicon: return lexicon_verdict(message, config);
        case Backend::simulated: return simulated_classify(message, config);
        case Backend::http: return http_classify(message, config);
    }
    throw std::logic_error("unreachable backend");
}

}  // namespace modsim::classifier
