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

#include "modsim/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace modsim::config {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": expected a number, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    auto wei = wei_from_decimal(value);
    if (!wei || *wei > std::numeric_limits<std::uint64_t>::max()) {
        throw std::invalid_argument(key + ": expected a non-negative integer, got '" + value + "'");
    }
    return static_cast<std::uint64_t>(*wei);
}

Wei parse_wei(const std::string& key, const std::string& value) {
    auto wei = wei_from_decimal(value);
    if (!wei) throw std::invalid_argument(key + ": expected a non-negative integer, got '" + value + "'");
    return *wei;
}

void apply_one(CliConfig& cfg, const std::string& key, const std::string& value) {
    auto& c = cfg.classifier;
    auto& f = cfg.fees;
    if (key == "classifier.profile") {
        if (value != "paper-gpt41") throw std::invalid_argument(key + ": unknown classifier profile '" + value + "'");
        c = classifier::paper_gpt41_profile();
    } else if (key == "classifier.backend") {
        c.backend = classifier::backend_from_string(value);
    } else if (key == "classifier.lexicon") {
        c.lexiconPath = value;
    } else if (key == "classifier.latency.intercept_us") {
        c.latency.interceptMicros = parse_double(key, value);
    } else if (key == "classifier.latency.slope_us_per_byte") {
        c.latency.slopeMicrosPerByte = parse_double(key, value);
    } else if (key == "classifier.jitter") {
        c.jitterFraction = parse_double(key, value);
    } else if (key == "classifier.toxic_rate") {
        c.toxicRate = parse_double(key, value);
    } else if (key == "classifier.seed") {
        c.rngSeed = parse_u64(key, value);
    } else if (key == "classifier.endpoint") {
        c.endpointUrl = value;
    } else if (key == "classifier.model") {
        c.modelName = value;
    } else if (key == "classifier.api_key_env") {
        c.apiKeyEnvVar = value;
    } else if (key == "classifier.timeout_ms") {
        c.timeout = std::chrono::milliseconds(parse_u64(key, value));
    } else if (key == "classifier.bytes_per_token") {
        c.bytesPerToken = classifier::Rational::parse(value);
    } else if (key == "fees.profile") {
        f = fees::profile(value);
    } else if (key == "fees.f0") {
        f.f0 = parse_wei(key, value);
    } else if (key == "fees.f1") {
        f.f1 = parse_wei(key, value);
    } else if (key == "fees.c_usd_per_token") {
        f.cUsdPerToken = parse_double(key, value);
    } else if (key == "fees.model") {
        auto row = fees::llm_pricing(value);
        if (!row) throw std::invalid_argument(key + ": no pricing for model '" + value + "'");
        f.cUsdPerToken = row->usd_per_token();
    } else if (key == "fees.eth_usd") {
        f.ethUsdRate = parse_double(key, value);
    } else if (key == "fees.alpha") {
        f.alpha = parse_u64(key, value);
    } else if (key == "fees.beta") {
        f.beta = parse_u64(key, value);
    } else if (key == "fees.epsilon") {
        f.epsilon = parse_u64(key, value);
    } else if (key == "fees.base_fee") {
        f.baseFee = parse_wei(key, value);
    } else if (key == "fees.priority_fee") {
        f.priorityFee = parse_wei(key, value);
    } else if (key == "block.tx_per_block") {
        cfg.composition.txPerBlock = parse_double(key, value);
    } else if (key == "block.idm_per_block") {
        cfg.composition.idmPerBlock = parse_double(key, value);
    } else if (key == "keys.secret") {
        cfg.secretKeyPath = value;
    } else if (key == "keys.public") {
        auto pk = proof::public_key_from_hex(value);
        if (!pk) throw std::invalid_argument(key + ": not a 33-byte compressed secp256k1 point");
        cfg.classifierPk = *pk;
    } else if (key == "timing.mode") {
        if (value == "modeled") {
            cfg.timing.timing = pipeline::Timing::modeled;
        } else if (value == "wall") {
            cfg.timing.timing = pipeline::Timing::wallClock;
        } else {
            throw std::invalid_argument(key + ": expected 'modeled' or 'wall'");
        }
    } else if (key == "timing.baseline_us") {
        cfg.timing.baseline.interceptMicros = parse_double(key, value);
    } else if (key == "timing.usermod_intercept_us") {
        cfg.timing.userModVerify.interceptMicros = parse_double(key, value);
    } else if (key == "timing.usermod_slope_us_per_byte") {
        cfg.timing.userModVerify.slopeMicrosPerByte = parse_double(key, value);
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

}  // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "classifier.profile", "classifier.backend", "classifier.lexicon", "classifier.latency.intercept_us",
        "classifier.latency.slope_us_per_byte", "classifier.jitter", "classifier.toxic_rate", "classifier.seed",
        "classifier.endpoint", "classifier.model", "classifier.api_key_env", "classifier.timeout_ms",
        "classifier.bytes_per_token", "fees.profile", "fees.f0", "fees.f1", "fees.c_usd_per_token", "fees.model",
        "fees.eth_usd", "fees.alpha", "fees.beta", "fees.epsilon", "fees.base_fee", "fees.priority_fee",
        "block.tx_per_block", "block.idm_per_block", "keys.secret", "keys.public", "timing.mode",
        "timing.baseline_us", "timing.usermod_intercept_us", "timing.usermod_slope_us_per_byte",
    };
    return keys;
}

KeyValues parse_key_values(std::string_view content) {
    KeyValues out;
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key=value");
        }
        auto key = trim(std::string_view(stripped).substr(0, eq));
        if (key.empty()) throw std::invalid_argument("line " + std::to_string(lineno) + ": empty key");
        out[std::move(key)] = trim(std::string_view(stripped).substr(eq + 1));
    }
    return out;
}

KeyValues load_key_values(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

KeyValues from_environment() {
    KeyValues out;
    for (const auto& key : known_keys()) {
        std::string name = "MODSIM_";
        for (char ch : key) name += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (const char* v = std::getenv(name.c_str()); v != nullptr) out[key] = v;
    }
    return out;
}

void apply_layer(CliConfig& cfg, const KeyValues& layer) {
    for (const char* profile_key : {"classifier.profile", "fees.profile"}) {
        if (auto it = layer.find(profile_key); it != layer.end()) apply_one(cfg, it->first, it->second);
    }
    for (const auto& [key, value] : layer) {
        if (key == "classifier.profile" || key == "fees.profile") continue;
        apply_one(cfg, key, value);
    }
}

void finalize(CliConfig& cfg) {
    namespace fs = std::filesystem;
    if (!cfg.classifier.lexiconPath.empty()) {
        if (!fs::exists(cfg.classifier.lexiconPath)) {
            throw std::invalid_argument("lexicon file does not exist: " + cfg.classifier.lexiconPath.string());
        }
        cfg.classifier.lexicon = std::make_shared<const classifier::Lexicon>(
            classifier::Lexicon::load(cfg.classifier.lexiconPath));
    }
    if (!cfg.secretKeyPath.empty() && !fs::exists(cfg.secretKeyPath)) {
        throw std::invalid_argument("secret key file does not exist: " + cfg.secretKeyPath.string());
    }
    classifier::validate(cfg.classifier);
    fees::validate(cfg.fees);
    bench::validate(cfg.composition);
}

CliConfig load(const std::optional<std::filesystem::path>& file, const KeyValues& flags) {
    CliConfig cfg;
    if (file) apply_layer(cfg, load_key_values(*file));
    apply_layer(cfg, from_environment());
    apply_layer(cfg, flags);
    finalize(cfg);
    return cfg;
}

fees::FeeSchedule load_fee_profile(const std::filesystem::path& path) {
    const auto kv = load_key_values(path);
    CliConfig cfg;
    KeyValues fee_keys;
    for (const auto& [k, v] : kv) {
        if (k.rfind("fees.", 0) != 0) throw std::invalid_argument("fee profile file holds non-fee key '" + k + "'");
        fee_keys[k] = v;
    }
    apply_layer(cfg, fee_keys);
    fees::validate(cfg.fees);
    return cfg.fees;
}

}  // namespace modsim::config
