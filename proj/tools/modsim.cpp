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

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "modsim/bench.hpp"
#include "modsim/classifier.hpp"
#include "modsim/config.hpp"
#include "modsim/corpus.hpp"
#include "modsim/fees.hpp"
#include "modsim/pipeline.hpp"
#include "modsim/proof.hpp"
#include "modsim/txmodel.hpp"

namespace {

using namespace modsim;

// Stable exit-code contract.
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kModerationNegative = 2;

struct Common {
    std::string configFile;
    std::vector<std::string> overrides;  // --set key=value
};

config::CliConfig load_config(const Common& common, config::KeyValues flags) {
    for (const auto& kv : common.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        flags[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    std::optional<std::filesystem::path> file;
    if (!common.configFile.empty()) file = common.configFile;
    return config::load(file, flags);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

proof::PublicKey resolve_public_key(const config::CliConfig& cfg) {
    if (cfg.classifierPk) return *cfg.classifierPk;
    if (!cfg.secretKeyPath.empty()) return proof::load_secret_key(cfg.secretKeyPath).publicKey;
    throw std::invalid_argument("userMod needs keys.public (or keys.secret) in the config or flags");
}

std::string fmt_wei(const Wei& wei) { return to_decimal(wei); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Content-moderation simulator for Ethereum input-data messages"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("-c,--config", common.configFile, "key=value config file")->check(CLI::ExistingFile);
    app.add_option("--set", common.overrides, "override a config key (key=value), repeatable");

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "classify one message; exit 0 nonToxic, 2 toxic, 1 error");
    std::string msg, msg_file, backend, lexicon;
    auto* msg_opt = classify_cmd->add_option("--msg", msg, "message text");
    classify_cmd->add_option("--file", msg_file, "read the message from a file")->excludes(msg_opt);
    classify_cmd->add_option("--backend", backend, "lexicon | simulated | http");
    classify_cmd->add_option("--lexicon", lexicon, "lexicon file");

    // prove
    auto* prove_cmd = app.add_subcommand("prove", "issue a moderation proof and print message||proof as hex");
    std::string prove_msg, key_path;
    prove_cmd->add_option("--msg", prove_msg, "message text")->required();
    prove_cmd->add_option("--key", key_path, "classifier secret key file")->required();
    prove_cmd->add_option("--backend", backend, "lexicon | simulated | http");
    prove_cmd->add_option("--lexicon", lexicon, "lexicon file");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "check semantic validity of an input payload; exit 0 valid, 2 invalid");
    std::string input_hex, pubkey_hex;
    verify_cmd->add_option("--input", input_hex, "0x-hex input data")->required();
    verify_cmd->add_option("--pubkey", pubkey_hex, "classifier public key, 33-byte compressed hex");

    // build-block
    auto* block_cmd = app.add_subcommand("build-block", "build one block from a mempool file");
    std::string mempool_path, mode_name = "none", out_path, state_path, default_balance = "1000000000000000000000";
    std::uint64_t block_number = 1;
    block_cmd->add_option("--mempool", mempool_path, "JSON array of transactions")->required()->check(CLI::ExistingFile);
    block_cmd->add_option("--mode", mode_name, "none | builderMod | userMod");
    block_cmd->add_option("--out", out_path, "write block JSON here instead of stdout");
    block_cmd->add_option("--state", state_path, "chain state JSON")->check(CLI::ExistingFile);
    block_cmd->add_option("--default-balance", default_balance, "wei balance of accounts absent from --state");
    block_cmd->add_option("--number", block_number, "block number");
    block_cmd->add_option("--pubkey", pubkey_hex, "classifier public key for userMod");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "per-transaction validation-time sweep");
    std::string bench_mode = "userMod", lengths_csv, csv_out, dat_out;
    std::size_t trials = 1000;
    bench_cmd->add_option("--mode", bench_mode, "none | builderMod | userMod");
    bench_cmd->add_option("--lengths", lengths_csv, "comma-separated message lengths (default 10,100,1000,10000,100000)");
    bench_cmd->add_option("--trials", trials, "timed runs per length")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--csv", csv_out, "CSV output path");
    bench_cmd->add_option("--dat", dat_out, "gnuplot .dat output path");
    std::string bench_profile = "paper-gpt41";
    bench_cmd->add_option("--classifier-profile", bench_profile,
                          "classifier profile for builderMod runs; empty to use the config's classifier");

    // fee
    auto* fee_cmd = app.add_subcommand("fee", "moderation fee and gas report for one message length");
    std::size_t fee_len = 0;
    std::string fee_profile, fee_profile_file;
    fee_cmd->add_option("--len", fee_len, "message length in bytes")->required();
    fee_cmd->add_option("--profile", fee_profile, "paper-calibrated | zero");
    fee_cmd->add_option("--profile-file", fee_profile_file, "fee profile key=value file")->check(CLI::ExistingFile);

    // keygen
    auto* keygen_cmd = app.add_subcommand("keygen", "create a classifier keypair");
    std::string keygen_out, seed_hex;
    keygen_cmd->add_option("--out", keygen_out, "secret key file to write (mode 0600)")->required();
    keygen_cmd->add_option("--seed", seed_hex, "32-byte hex seed for deterministic keys");

    // corpus
    auto* corpus_cmd = app.add_subcommand("corpus", "generate a labelled test corpus as JSON lines");
    std::size_t corpus_count = 100;
    std::uint64_t corpus_seed = 7;
    std::string corpus_out;
    corpus_cmd->add_option("--count", corpus_count, "entries")->check(CLI::PositiveNumber);
    corpus_cmd->add_option("--seed", corpus_seed, "generator seed");
    corpus_cmd->add_option("--out", corpus_out, "output path")->required();
    corpus_cmd->add_option("--lexicon", lexicon, "lexicon file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        config::KeyValues flags;
        if (!backend.empty()) flags["classifier.backend"] = backend;
        if (!lexicon.empty()) flags["classifier.lexicon"] = lexicon;
        if (!pubkey_hex.empty()) flags["keys.public"] = pubkey_hex;

        if (*classify_cmd) {
            if (msg.empty() && msg_file.empty()) throw std::invalid_argument("one of --msg or --file is required");
            const auto cfg = load_config(common, flags);
            const std::string text = msg_file.empty() ? msg : read_file(msg_file);
            txmodel::encode_idm(text);  // rejects invalid UTF-8
            const auto verdict = classifier::classify(txmodel::make_message(text), cfg.classifier);
            std::cout << classifier::to_string(verdict.label) << " latency_us=" << std::fixed << std::setprecision(2)
                      << verdict.latencyMicros << " tokens=" << verdict.tokenCount << "\n";
            return verdict.label == classifier::Label::toxic ? kModerationNegative : kOk;
        }

        if (*prove_cmd) {
            flags["keys.secret"] = key_path;
            const auto cfg = load_config(common, flags);
            const auto keys = proof::load_secret_key(cfg.secretKeyPath);
            const auto bytes = txmodel::encode_idm(prove_msg);
            try {
                const auto p = proof::issue_proof(keys, txmodel::make_message(prove_msg), cfg.classifier);
                std::cout << to_hex(proof::embed_proof(bytes, p)) << "\n";
            } catch (const proof::AttestationRefused& e) {
                std::cerr << "attestation refused: " << e.what() << "\n";
                return kModerationNegative;
            }
            return kOk;
        }

        if (*verify_cmd) {
            const auto cfg = load_config(common, flags);
            const auto pk = resolve_public_key(cfg);
            const auto input = from_hex(input_hex);
            if (!input) throw std::invalid_argument("--input is not valid hex");
            txmodel::Transaction tx;
            tx.input = *input;
            tx.meta.gasLimit = std::numeric_limits<Gas>::max();  // proof check only; gas headroom is a tx concern
            const auto d = pipeline::user_mod_filter(tx, pk, cfg.fees);
            std::cout << "semValid=" << (d.included() ? "true" : "false") << " reason=" << pipeline::to_string(d.reason)
                      << "\n";
            return d.included() ? kOk : kModerationNegative;
        }

        if (*block_cmd) {
            const Mode mode = mode_from_string(mode_name);
            const auto cfg = load_config(common, flags);
            pipeline::PipelineConfig pc;
            pc.mode = mode;
            pc.classifier = cfg.classifier;
            pc.fees = cfg.fees;
            pc.timing = cfg.timing;
            if (mode == Mode::userMod) pc.classifierPk = resolve_public_key(cfg);

            const auto mempool = pipeline::mempool_from_json(nlohmann::json::parse(read_file(mempool_path)));
            pipeline::ChainState state;
            if (!state_path.empty()) state = pipeline::chain_state_from_json(nlohmann::json::parse(read_file(state_path)));
            auto balance = wei_from_decimal(default_balance);
            if (!balance) throw std::invalid_argument("--default-balance is not a decimal integer");
            if (state_path.empty() || state.defaultBalance == 0) state.defaultBalance = *balance;

            const auto block = pipeline::build_block(mempool, state, pc, block_number);
            const auto text = pipeline::block_to_json(block).dump(2) + "\n";
            if (out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
                if (!out) throw std::runtime_error("cannot write " + out_path);
                out << text;
            }
            return kOk;
        }

        if (*bench_cmd) {
            const Mode mode = mode_from_string(bench_mode);
            if (!bench_profile.empty()) flags["classifier.profile"] = bench_profile;
            const auto cfg = load_config(common, flags);
            std::vector<std::size_t> lengths = bench::kDefaultSweep;
            if (!lengths_csv.empty()) {
                lengths.clear();
                std::istringstream in(lengths_csv);
                std::string item;
                while (std::getline(in, item, ',')) lengths.push_back(std::stoull(item));
            }
            auto bc = bench::default_bench_config();
            bc.pipeline.classifier = cfg.classifier;
            bc.pipeline.fees = cfg.fees;
            bc.composition = cfg.composition;
            if (!cfg.secretKeyPath.empty()) bc.keys = proof::load_secret_key(cfg.secretKeyPath);
            bc.pipeline.classifierPk = bc.keys.publicKey;

            const auto samples = bench::sweep(mode, lengths, trials, bc);
            std::cout << "mode,msg_bytes,trials,mean_us,std_us,expected_block_us\n";
            for (const auto& s : samples) {
                std::cout << to_string(s.mode) << "," << s.msgBytes << "," << s.trials << "," << std::fixed
                          << std::setprecision(3) << s.meanMicros << "," << s.stdMicros << "," << s.expectedBlockMicros
                          << "\n";
            }
            if (!csv_out.empty()) bench::emit_csv(samples, csv_out);
            if (!dat_out.empty()) bench::emit_dat(samples, dat_out);
            return kOk;
        }

        if (*fee_cmd) {
            if (!fee_profile.empty()) flags["fees.profile"] = fee_profile;
            const auto cfg = load_config(common, flags);
            const auto s = fee_profile_file.empty() ? cfg.fees : config::load_fee_profile(fee_profile_file);
            const auto message = txmodel::DecodedMessage{std::string(fee_len, 'a'), fee_len};
            const auto local = fees::mod_exec_fee_local(fee_len, s);
            const auto external = fees::mod_exec_fee_external(message, s, cfg.classifier.bytesPerToken);
            std::cout << std::left << std::setw(24) << "msg_bytes" << fee_len << "\n"
                      << std::setw(24) << "modExecFee_local" << fmt_wei(local) << " wei\n"
                      << std::setw(24) << "modExecFee_external" << fmt_wei(external) << " wei (" << std::setprecision(8)
                      << fees::wei_to_usd(external, s) << " USD)\n"
                      << std::setw(24) << "gasUsed_mod" << fees::gas_used_mod(fee_len, s) << "\n"
                      << std::setw(24) << "recommended_gasLimit" << fees::recommended_gas_limit(fee_len, s) << "\n"
                      << std::setw(24) << "fee" << fmt_wei(fees::total_fee(fee_len, s)) << " wei\n"
                      << std::setw(24) << "builderReward" << fmt_wei(fees::builder_reward(fee_len, s)) << " wei\n";
            return kOk;
        }

        if (*keygen_cmd) {
            std::optional<Hash256> seed;
            if (!seed_hex.empty()) {
                auto raw = from_hex(seed_hex);
                if (!raw || raw->size() != 32) throw std::invalid_argument("--seed must be 32 bytes of hex");
                seed.emplace();
                std::copy(raw->begin(), raw->end(), seed->begin());
            }
            const auto keys = proof::keygen(seed);
            proof::save_secret_key(keygen_out, keys);
            std::cout << to_hex(keys.publicKey) << "\n";
            return kOk;
        }

        if (*corpus_cmd) {
            const auto cfg = load_config(common, flags);
            const auto c = corpus::generate_corpus(cfg.classifier.active_lexicon().terms(),
                                                   corpus::default_benign_templates(), corpus_count, corpus_seed);
            corpus::write_jsonl(c, corpus_out);
            return kOk;
        }
    } catch (const classifier::ClassifierUnavailable& e) {
        std::cerr << "classifier unavailable: " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
