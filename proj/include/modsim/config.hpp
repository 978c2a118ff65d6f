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
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "modsim/bench.hpp"
#include "modsim/classifier.hpp"
#include "modsim/fees.hpp"
#include "modsim/pipeline.hpp"
#include "modsim/proof.hpp"

namespace modsim::config {

using KeyValues = std::map<std::string, std::string>;

/// key=value per line, UTF-8; '#' comments and blank lines skipped; whitespace around
/// keys and values trimmed. Throws std::invalid_argument naming the line on a line without '='.
KeyValues parse_key_values(std::string_view content);
KeyValues load_key_values(const std::filesystem::path& path);

/// MODSIM_<KEY> for every known key, upper-cased with '.' mapped to '_'
/// (classifier.backend -> MODSIM_CLASSIFIER_BACKEND).
KeyValues from_environment();

struct CliConfig {
    classifier::ClassifierConfig classifier;
    fees::FeeSchedule fees = fees::paper_calibrated_profile();
    bench::BlockComposition composition;
    pipeline::TimingOptions timing{pipeline::Timing::modeled};
    std::filesystem::path secretKeyPath;
    std::optional<proof::PublicKey> classifierPk;
};

/// Applies one layer on top of cfg. Profile keys (classifier.profile, fees.profile) are applied
/// before the individual fields of the same layer. Unknown keys and bad values throw
/// std::invalid_argument.
void apply_layer(CliConfig& cfg, const KeyValues& layer);

/// Checks that every referenced file exists, loads the lexicon file, and validates all sections.
void finalize(CliConfig& cfg);

/// Defaults, then the file (if given), then the environment, then flag overrides.
CliConfig load(const std::optional<std::filesystem::path>& file, const KeyValues& flags);

const std::vector<std::string>& known_keys();

/// Fee schedule from fees.* keys layered over fees.profile (default "paper-calibrated").
fees::FeeSchedule load_fee_profile(const std::filesystem::path& path);

}  // namespace modsim::config
