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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "modsim/txmodel.hpp"

namespace modsim::classifier {

enum class Label { toxic, nonToxic };

std::string_view to_string(Label label);

struct Verdict {
    Label label = Label::nonToxic;
    double latencyMicros = 0.0;
    std::uint64_t tokenCount = 0;
};

/// Affine validation-time model: intercept + slope * bytes, in microseconds.
struct LatencyModel {
    double interceptMicros = 1.0;
    double slopeMicrosPerByte = 0.0;

    double predict(std::size_t bytes) const {
        return interceptMicros + slopeMicrosPerByte * static_cast<double>(bytes);
    }

    /// The line through two (bytes, micros) anchor points.
    static LatencyModel through(double x1, double y1, double x2, double y2);

    friend bool operator==(const LatencyModel&, const LatencyModel&) = default;
};

/// Throws std::invalid_argument unless intercept > 0 and slope >= 0.
void validate(const LatencyModel& model);

/// Exact positive rational; used for bytes-per-token so that e.g. 293 / 2.93 is exactly 100.
struct Rational {
    std::uint64_t num = 293;
    std::uint64_t den = 100;

    /// Parses a non-negative decimal such as "2.93" or "3". Throws std::invalid_argument.
    static Rational parse(std::string_view text);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Case-folded terms matched as substrings of the case-folded message.
class Lexicon {
public:
    explicit Lexicon(std::vector<std::string> terms);

    /// One term per line, UTF-8; '#' starts a comment; blank lines ignored.
    static Lexicon load(const std::filesystem::path& path);
    static Lexicon parse(std::string_view content);

    /// Synthetic placeholder terms; see data/default_lexicon.txt.
    static std::shared_ptr<const Lexicon> builtin();

    bool matches(std::string_view text) const;
    const std::vector<std::string>& terms() const noexcept { return terms_; }

private:
    std::vector<std::string> terms_;
    std::vector<std::u32string> folded_;
};

enum class Backend { lexicon, simulated, http };

std::string_view to_string(Backend backend);
Backend backend_from_string(std::string_view name);

struct ClassifierConfig {
    Backend backend = Backend::lexicon;

    std::filesystem::path lexiconPath;
    std::shared_ptr<const Lexicon> lexicon;  // null means Lexicon::builtin()

    LatencyModel latency;
    double jitterFraction = 0.0;  // symmetric, at most 0.05
    double toxicRate = 0.0;
    std::uint64_t rngSeed = 0;

    std::string endpointUrl;
    std::string modelName;
    std::string apiKeyEnvVar = "MODSIM_API_KEY";
    std::chrono::milliseconds timeout{30000};

    Rational bytesPerToken;

    const Lexicon& active_lexicon() const;
};

inline constexpr double kMaxJitterFraction = 0.05;

void validate(const ClassifierConfig& config);

/// Simulated external classifier calibrated on the two quoted gpt-4.1 latencies
/// (100 B -> 1,098,690.91 us; 100,000 B -> 1,772,946.65 us). Jitter-free, toxicRate 0.
ClassifierConfig paper_gpt41_profile();

/// Raised when a backend cannot produce a label. Never mapped to a default verdict.
class ClassifierUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Label lexicon_classify(const txmodel::DecodedMessage& message, const Lexicon& lexicon);

/// ceil(byteLength / bytesPerToken).
std::uint64_t num_tokens(const txmodel::DecodedMessage& message, Rational bytesPerToken = {});

/// The one-word instruction sent as the system message by the http backend.
std::string_view binary_prompt();

Verdict http_classify(const txmodel::DecodedMessage& message, const ClassifierConfig& config);

/// Dispatches on config.backend. Throws std::invalid_argument on an empty message and
/// ClassifierUnavailable from the http backend.
Verdict classify(const txmodel::DecodedMessage& message, const ClassifierConfig& config);

}  // namespace modsim::classifier
