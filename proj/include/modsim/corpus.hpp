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
#include <string>
#include <vector>

#include "modsim/classifier.hpp"

namespace modsim::corpus {

struct CorpusEntry {
    std::string text;
    classifier::Label expectedLabel = classifier::Label::nonToxic;

    friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

/// Finite stand-in for the space of harmful messages, plus benign controls.
struct Corpus {
    std::vector<CorpusEntry> entries;
    std::string sourceTag;

    friend bool operator==(const Corpus&, const Corpus&) = default;
};

const std::vector<std::string>& default_benign_templates();

/// Seeded mix of toxic entries (a benign template plus a threat frame around a lexicon term)
/// and non-toxic entries (a template alone). Throws std::invalid_argument for an empty
/// lexicon, no templates, count == 0, or a template that already matches the lexicon.
Corpus generate_corpus(const std::vector<std::string>& lexiconTerms, const std::vector<std::string>& benignTemplates,
                       std::size_t count, std::uint64_t seed);

/// JSON lines: {"text", "label", "sourceTag"} per entry.
void write_jsonl(const Corpus& corpus, const std::filesystem::path& path);
Corpus read_jsonl(const std::filesystem::path& path);

}  // namespace modsim::corpus
