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

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "modsim/config.hpp"

namespace modsim::config {

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p, std::ios::binary | std::ios::trunc) << content;
    return p;
}

struct EnvVar {
    std::string name;
    EnvVar(std::string n, const char* value) : name(std::move(n)) { ::setenv(name.c_str(), value, 1); }
    ~EnvVar() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("key=value parsing", "[config]") {
    const auto kv = parse_key_values("# comment\n\n  fees.alpha = 12 \r\nclassifier.backend=simulated\nkeys.secret = a=b\n");
    CHECK(kv.size() == 3);
    CHECK(kv.at("fees.alpha") == "12");
    CHECK(kv.at("classifier.backend") == "simulated");
    CHECK(kv.at("keys.secret") == "a=b");
    CHECK_THROWS_WITH(parse_key_values("a=1\nnot a pair\n"), Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS(parse_key_values("=3"));
    CHECK_THROWS(load_key_values("/nonexistent/modsim.conf"));
}

TEST_CASE("defaults", "[config]") {
    const auto cfg = load(std::nullopt, {});
    CHECK(cfg.classifier.backend == classifier::Backend::lexicon);
    CHECK(cfg.fees == fees::paper_calibrated_profile());
    CHECK(cfg.timing.timing == pipeline::Timing::modeled);
    CHECK_FALSE(cfg.classifierPk);
}

TEST_CASE("layer precedence: flags over environment over file", "[config]") {
    const auto file = write_temp("modsim_layers.conf", "fees.alpha=1\nfees.beta=2\nfees.epsilon=3\n");
    {
        EnvVar env("MODSIM_FEES_BETA", "20");
        EnvVar env2("MODSIM_FEES_EPSILON", "30");
        const auto cfg = load(file, {{"fees.epsilon", "300"}});
        CHECK(cfg.fees.alpha == 1);
        CHECK(cfg.fees.beta == 20);
        CHECK(cfg.fees.epsilon == 300);
    }
    const auto cfg = load(file, {});
    CHECK(cfg.fees.beta == 2);
    std::filesystem::remove(file);
}

TEST_CASE("profiles apply before fields of the same layer", "[config]") {
    CliConfig cfg;
    apply_layer(cfg, {{"fees.alpha", "5"}, {"fees.profile", "zero"}});
    CHECK(cfg.fees.alpha == 5);
    CHECK(cfg.fees.beta == 0);

    apply_layer(cfg, {{"classifier.seed", "9"}, {"classifier.profile", "paper-gpt41"}});
    CHECK(cfg.classifier.backend == classifier::Backend::simulated);
    CHECK(cfg.classifier.rngSeed == 9);

    apply_layer(cfg, {{"fees.model", "google/gemma-3-27b-it"}});
    CHECK(cfg.fees.cUsdPerToken == Catch::Approx(0.0000347 / 338));
}

TEST_CASE("bad keys and values are rejected", "[config]") {
    CliConfig cfg;
    CHECK_THROWS_WITH(apply_layer(cfg, {{"fees.gamma", "1"}}), Catch::Matchers::ContainsSubstring("fees.gamma"));
    CHECK_THROWS(apply_layer(cfg, {{"fees.alpha", "-1"}}));
    CHECK_THROWS(apply_layer(cfg, {{"fees.eth_usd", "lots"}}));
    CHECK_THROWS(apply_layer(cfg, {{"classifier.backend", "oracle"}}));
    CHECK_THROWS(apply_layer(cfg, {{"classifier.profile", "gpt-5"}}));
    CHECK_THROWS(apply_layer(cfg, {{"fees.model", "unknown/model"}}));
    CHECK_THROWS(apply_layer(cfg, {{"keys.public", "0x02"}}));
    CHECK_THROWS(apply_layer(cfg, {{"timing.mode", "sometimes"}}));
    CHECK_THROWS(load(std::nullopt, {{"classifier.jitter", "0.5"}}));
    CHECK_THROWS(load(std::nullopt, {{"block.idm_per_block", "500"}}));
    CHECK_THROWS(load(std::nullopt, {{"classifier.lexicon", "/nonexistent/lexicon.txt"}}));
    CHECK_THROWS(load(std::nullopt, {{"keys.secret", "/nonexistent/key"}}));
    CHECK_THROWS(load(std::filesystem::path("/nonexistent/modsim.conf"), {}));
}

TEST_CASE("every known key is settable from the environment", "[config]") {
    CHECK(std::find(known_keys().begin(), known_keys().end(), "classifier.backend") != known_keys().end());
    EnvVar env("MODSIM_CLASSIFIER_BACKEND", "simulated");
    EnvVar env2("MODSIM_TIMING_MODE", "wall");
    const auto kv = from_environment();
    CHECK(kv.at("classifier.backend") == "simulated");
    const auto cfg = load(std::nullopt, {});
    CHECK(cfg.classifier.backend == classifier::Backend::simulated);
    CHECK(cfg.timing.timing == pipeline::Timing::wallClock);
}

TEST_CASE("lexicon files load during finalize", "[config]") {
    const auto lex = write_temp("modsim_lexicon.txt", "# test\nbanana\n");
    const auto cfg = load(std::nullopt, {{"classifier.lexicon", lex.string()}});
    REQUIRE(cfg.classifier.lexicon);
    CHECK(cfg.classifier.active_lexicon().matches("BANANA bread"));
    std::filesystem::remove(lex);
}

TEST_CASE("fee profile files", "[config]") {
    const auto path = write_temp("modsim_fees.conf", "fees.profile=zero\nfees.alpha=100\n");
    const auto s = load_fee_profile(path);
    CHECK(s.alpha == 100);
    CHECK(s.f0 == 0);
    const auto bad = write_temp("modsim_fees_bad.conf", "classifier.backend=lexicon\n");
    CHECK_THROWS(load_fee_profile(bad));
    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}

}  // namespace modsim::config
