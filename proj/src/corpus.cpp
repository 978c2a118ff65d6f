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

#include "modsim/corpus.hpp"

#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace modsim::corpus {

namespace {

// "{}" is replaced by a lexicon term.
const std::vector<std::string>& threat_frames() {
    static const std::vector<std::string> frames = {
        "you are a worthless {}",
        "every {} like you should be driven out",
        "I know where you live, {}",
        "go back where you came from, {}",
        "{} {} {}",
        "nobody wants a {} around here",
    };
    return frames;
}

std::string fill(const std::string& frame, const std::string& term) {
    std::string out;
    for (std::size_t i = 0; i < frame.size(); ++i) {
        if (frame.compare(i, 2, "{}") == 0) {
            out += term;
            ++i;
        } else {
            out += frame[i];
        }
    }
    return out;
}

}  // namespace

const std::vector<std::string>& default_benign_templates() {
    static const std::vector<std::string> templates = {
        "gm frens",
        "happy birthday to my favourite person",
        "thanks for the help with the deployment",
        "payment for invoice 1042, cheers",
        "congratulations on the wedding!",
        "rent for March, see you soon",
        "this one is for the road trip fund",
        "wishing you a great day",
        "let us meet at the cafe on friday",
        "to the moon and back, with love",
        "refund for the concert tickets",
        "proud of you, keep building",
    };
    return templates;
}

Corpus generate_corpus(const std::vector<std::string>& lexiconTerms, const std::vector<std::string>& benignTemplates,
                       std::size_t count, std::uint64_t seed) {
    if (lexiconTerms.empty()) throw std::invalid_argument("lexicon is empty");
    if (benignTemplates.empty()) throw std::invalid_argument("no benign templates");
    if (count == 0) throw std::invalid_argument("corpus count must be >= 1");

    const classifier::Lexicon lexicon(lexiconTerms);
    for (const auto& t : benignTemplates) {
        if (lexicon.matches(t)) throw std::invalid_argument("benign template matches the lexicon: '" + t + "'");
    }

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution toxic_coin(0.5);
    std::uniform_int_distribution<std::size_t> pick_template(0, benignTemplates.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_term(0, lexiconTerms.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_frame(0, threat_frames().size() - 1);
    std::uniform_int_distribution<int> pick_tag(0, 9999);

    Corpus corpus;
    corpus.sourceTag = "generated:seed=" + std::to_string(seed);
    corpus.entries.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& base = benignTemplates[pick_template(rng)];
        if (toxic_coin(rng)) {
            const auto& frame = threat_frames()[pick_frame(rng)];
            corpus.entries.push_back({base + ". " + fill(frame, lexiconTerms[pick_term(rng)]), classifier::Label::toxic});
        } else {
            corpus.entries.push_back({base + " #" + std::to_string(pick_tag(rng)), classifier::Label::nonToxic});
        }
    }
    return corpus;
}

void write_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& e : corpus.entries) {
        const nlohmann::json line = {
            {"text", e.text},
            {"label", classifier::to_string(e.expectedLabel)},
            {"sourceTag", corpus.sourceTag},
        };
        out << line.dump() << '\n';
    }
}

Corpus read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    Corpus corpus;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            const auto label = j.at("label").get<std::string>();
            if (label != "toxic" && label != "nonToxic") throw std::invalid_argument("unknown label '" + label + "'");
            corpus.entries.push_back(
                {j.at("text").get<std::string>(), label == "toxic" ? classifier::Label::toxic : classifier::Label::nonToxic});
            corpus.sourceTag = j.value("sourceTag", corpus.sourceTag);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (corpus.entries.empty()) throw std::runtime_error(path.string() + ": corpus is empty");
    return corpus;
}

}  // namespace modsim::corpus
