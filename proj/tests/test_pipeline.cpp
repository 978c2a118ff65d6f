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

#include <random>
#include <set>

#include "modsim/corpus.hpp"
#include "modsim/pipeline.hpp"

namespace modsim::pipeline {

namespace {

constexpr std::uint64_t kGwei = 1'000'000'000ULL;
const Wei kRich = Wei(1'000'000'000'000ULL) * 1'000'000'000ULL;

Address addr(std::uint32_t n) {
    Address a{};
    a.bytes[16] = static_cast<std::uint8_t>(n >> 24);
    a.bytes[17] = static_cast<std::uint8_t>(n >> 16);
    a.bytes[18] = static_cast<std::uint8_t>(n >> 8);
    a.bytes[19] = static_cast<std::uint8_t>(n);
    return a;
}

txmodel::TxFieldsMeta meta(std::uint32_t sender, Gas gasLimit = 21000, std::uint64_t priorityGwei = 2) {
    txmodel::TxFieldsMeta m;
    m.from = addr(sender);
    m.to = addr(0xffff);
    m.value = 1;
    m.gasLimit = gasLimit;
    m.maxFeePerGas = Wei(100 * kGwei);
    m.maxPriorityFeePerGas = Wei(priorityGwei * kGwei);
    return m;
}

txmodel::Transaction transfer(std::uint32_t sender, std::uint64_t priorityGwei = 2) {
    return txmodel::build_transaction(meta(sender, 21000, priorityGwei), {});
}

txmodel::Transaction idm(std::uint32_t sender, std::string_view text, Gas gasLimit = 100'000) {
    return txmodel::build_transaction(meta(sender, gasLimit), txmodel::encode_idm(text));
}

const proof::ClassifierKeyPair& keys() {
    static const auto k = [] {
        Hash256 seed;
        seed.fill(0x01);
        return proof::keygen(seed);
    }();
    return k;
}

txmodel::Transaction proven(std::uint32_t sender, std::string_view text, Gas gasLimit = 0) {
    const auto msg = txmodel::make_message(text);
    const auto p = proof::issue_proof(keys(), msg, classifier::ClassifierConfig{});
    const auto fees = fees::paper_calibrated_profile();
    if (gasLimit == 0) gasLimit = fees::gas_used_mod(msg.byteLength, fees);
    return txmodel::build_transaction(meta(sender, gasLimit), proof::embed_proof(to_bytes(text), p));
}

ChainState rich_state() {
    ChainState s;
    s.defaultBalance = kRich;
    return s;
}

PipelineConfig config(Mode mode) {
    PipelineConfig c;
    c.mode = mode;
    c.classifierPk = keys().publicKey;
    c.fees = fees::paper_calibrated_profile();
    c.timing.timing = Timing::modeled;
    return c;
}

std::size_t count_reason(const Block& b, Reason r) {
    return static_cast<std::size_t>(std::count_if(b.decisions.begin(), b.decisions.end(),
                                                  [&](const DecisionRecord& d) { return d.decision.reason == r; }));
}

}  // namespace

TEST_CASE("exec_valid", "[pipeline]") {
    auto state = rich_state();
    CHECK(exec_valid(transfer(1), state));

    auto gap = transfer(1);
    gap.meta.nonce = 5;
    CHECK_FALSE(exec_valid(gap, state));

    auto tx = transfer(2);
    const Wei need = tx.meta.value + Wei(tx.meta.gasLimit) * tx.meta.maxFeePerGas;
    state.perAccountBalance[addr(2)] = need - 1;
    CHECK_FALSE(exec_valid(tx, state));
    state.perAccountBalance[addr(2)] = need;
    CHECK(exec_valid(tx, state));

    auto low = transfer(3);
    low.meta.gasLimit = 20999;
    CHECK_FALSE(exec_valid(low, state));
}

TEST_CASE("effective priority fee", "[pipeline]") {
    auto m = meta(1);
    CHECK(effective_priority_fee(m, Wei(10 * kGwei)) == Wei(2 * kGwei));
    m.maxFeePerGas = Wei(11 * kGwei);
    CHECK(effective_priority_fee(m, Wei(10 * kGwei)) == Wei(kGwei));
    m.maxFeePerGas = Wei(9 * kGwei);
    CHECK(effective_priority_fee(m, Wei(10 * kGwei)) == 0);
}

TEST_CASE("builder_mod_filter", "[pipeline]") {
    const auto fees = fees::paper_calibrated_profile();
    const classifier::ClassifierConfig lexicon;

    auto d = builder_mod_filter(transfer(1), lexicon, fees);
    CHECK(d.included());
    CHECK(d.reason == Reason::noSemanticContent);

    d = builder_mod_filter(idm(1, "you are a zorgblat"), lexicon, fees);
    CHECK(d.outcome == Outcome::exclude);
    CHECK(d.reason == Reason::toxicVerdict);

    d = builder_mod_filter(idm(1, "have a lovely day"), lexicon, fees);
    CHECK(d.included());
    CHECK(d.reason == Reason::nonToxicVerdict);

    auto cheap = idm(1, "have a lovely day");
    cheap.meta.maxPriorityFeePerGas = 0;
    d = builder_mod_filter(cheap, lexicon, fees);
    CHECK(d.reason == Reason::insufficientFee);

    const auto gpt = classifier::paper_gpt41_profile();
    const auto msg100 = std::string(90, 'g') + " gm frens";
    REQUIRE(msg100.size() == 99);
    for (auto timing : {Timing::wallClock, Timing::modeled}) {
        TimingOptions t;
        t.timing = timing;
        d = builder_mod_filter(idm(1, msg100 + "!"), gpt, fees, t);
        CHECK(d.included());
        CHECK(d.elapsedMicros == Catch::Approx(1'098'690.91).epsilon(0.05));
    }
}

TEST_CASE("classifier failures fail closed", "[pipeline]") {
    classifier::ClassifierConfig broken;
    broken.backend = classifier::Backend::http;
    broken.endpointUrl = "http://127.0.0.1:1/v1/chat/completions";
    broken.apiKeyEnvVar = "PATH";
    broken.timeout = std::chrono::milliseconds(300);
    const auto d = builder_mod_filter(idm(1, "have a lovely day"), broken, fees::paper_calibrated_profile());
    CHECK(d.outcome == Outcome::exclude);
    CHECK(d.reason == Reason::classifierError);
    CHECK(builder_mod_filter(transfer(1), broken, fees::paper_calibrated_profile()).included());
}

TEST_CASE("user_mod_filter", "[pipeline]") {
    const auto fees = fees::paper_calibrated_profile();
    const auto& pk = keys().publicKey;

    auto d = user_mod_filter(transfer(1), pk, fees);
    CHECK(d.reason == Reason::noSemanticContent);
    CHECK(d.included());

    d = user_mod_filter(proven(1, "have a lovely day"), pk, fees);
    CHECK(d.reason == Reason::validProof);
    CHECK(d.included());

    d = user_mod_filter(idm(1, "have a lovely day"), pk, fees);
    CHECK(d.reason == Reason::missingProof);
    CHECK_FALSE(d.included());

    auto tampered = proven(1, "have a lovely day");
    tampered.input[tampered.input.size() - 10] ^= 0x04;
    d = user_mod_filter(tampered, pk, fees);
    CHECK(d.reason == Reason::invalidProof);

    auto wrong_key = proven(1, "have a lovely day");
    d = user_mod_filter(wrong_key, proof::keygen().publicKey, fees);
    CHECK(d.reason == Reason::invalidProof);

    const auto need = fees::gas_used_mod(17, fees);
    CHECK(user_mod_filter(proven(1, "have a lovely day", need), pk, fees).reason == Reason::validProof);
    d = user_mod_filter(proven(1, "have a lovely day", need - 1), pk, fees);
    CHECK(d.reason == Reason::insufficientGasLimit);

    TimingOptions modeled;
    modeled.timing = Timing::modeled;
    d = user_mod_filter(proven(1, std::string(1000, 'a')), pk, fees, modeled);
    CHECK(d.elapsedMicros == Catch::Approx(69.2 + 0.0045 * 1000));
}

TEST_CASE("build_block examples", "[pipeline]") {
    SECTION("empty mempool") {
        auto state = rich_state();
        const auto b = build_block({}, state, config(Mode::builderMod));
        CHECK(b.txs.empty());
        CHECK(b.decisions.empty());
        CHECK(b.totalGasUsed == 0);
        CHECK(b.builderRewardWei == 0);
    }
    SECTION("toxic IDM and a transfer under builderMod") {
        auto state = rich_state();
        const auto b = build_block({idm(1, "you vexmorr"), transfer(2)}, state, config(Mode::builderMod));
        REQUIRE(b.txs.size() == 1);
        CHECK(b.txs[0] == transfer(2));
        CHECK(b.totalGasUsed == 21000);
        CHECK(b.builderRewardWei == Wei(21000) * Wei(2 * kGwei));
        CHECK(state.nonce(addr(2)) == 1);
        CHECK(state.nonce(addr(1)) == 0);
    }
    SECTION("118 transactions with one proof under userMod") {
        std::vector<txmodel::Transaction> mempool;
        for (std::uint32_t i = 0; i < 117; ++i) mempool.push_back(transfer(i));
        mempool.push_back(proven(500, "gm frens, have a calm day"));
        auto state = rich_state();
        const auto b = build_block(mempool, state, config(Mode::userMod));
        CHECK(b.txs.size() == 118);
        CHECK(count_reason(b, Reason::validProof) == 1);
        const auto fees = fees::paper_calibrated_profile();
        CHECK(b.totalGasUsed == 117 * 21000 + fees::gas_used_mod(25, fees));
    }
    SECTION("priority ordering with stable ties") {
        auto state = rich_state();
        const auto b = build_block({transfer(1, 1), transfer(2, 5), transfer(3, 1), transfer(4, 5)}, state,
                                   config(Mode::none));
        std::vector<std::size_t> order;
        for (const auto& rec : b.decisions) order.push_back(rec.txIndex);
        CHECK(order == std::vector<std::size_t>{1, 3, 0, 2});
    }
    SECTION("block gas limit") {
        auto state = rich_state();
        auto c = config(Mode::none);
        c.blockGasLimit = 50'000;
        const auto b = build_block({transfer(1), transfer(2), transfer(3)}, state, c);
        CHECK(b.txs.size() == 2);
        CHECK(b.decisions[2].decision.reason == Reason::blockGasExhausted);
        CHECK(b.totalGasUsed <= c.blockGasLimit);
    }
    SECTION("sequential nonces from one sender") {
        auto state = rich_state();
        auto t0 = transfer(1), t1 = transfer(1), t3 = transfer(1);
        t1.meta.nonce = 1;
        t3.meta.nonce = 3;
        const auto b = build_block({t0, t1, t3}, state, config(Mode::none));
        CHECK(b.txs.size() == 2);
        CHECK(b.decisions[2].decision.reason == Reason::execInvalid);
        CHECK(state.nonce(addr(1)) == 2);
    }
}

TEST_CASE("adversary submissions", "[pipeline]") {
    const auto toxic = corpus::generate_corpus(classifier::Lexicon::builtin()->terms(), corpus::default_benign_templates(),
                                               10, 1);
    for (const auto& e : toxic.entries) {
        if (e.expectedLabel != classifier::Label::toxic) continue;
        const auto tx = adversary_submit(e.text, meta(9, 200'000));
        CHECK(txmodel::decode_idm(tx.input)->text == e.text);

        const std::vector<txmodel::Transaction> pool{tx};
        auto s1 = rich_state(), s2 = rich_state(), s3 = rich_state();
        CHECK(build_block(pool, s1, config(Mode::none)).txs.size() == 1);
        CHECK(build_block(pool, s2, config(Mode::builderMod)).decisions[0].decision.reason == Reason::toxicVerdict);
        CHECK(build_block(pool, s3, config(Mode::userMod)).decisions[0].decision.reason == Reason::missingProof);
    }
}

namespace {

struct Generated {
    std::vector<txmodel::Transaction> mempool;
    std::set<std::size_t> plainTransfers;
};

Generated random_mempool(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto& terms = classifier::Lexicon::builtin()->terms();
    Generated g;
    const std::size_t n = 5 + rng() % 40;
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t sender = 1 + static_cast<std::uint32_t>(rng() % 12);  // some senders repeat
        const std::string benign = "hello number " + std::to_string(rng() % 1000);
        const std::string toxic = "you " + terms[rng() % terms.size()] + " " + std::to_string(i);
        txmodel::Transaction tx;
        switch (rng() % 7) {
            case 0: tx = transfer(sender, rng() % 4); g.plainTransfers.insert(i); break;
            case 1: tx = idm(sender, benign, 1'000'000); break;
            case 2: tx = adversary_submit(toxic, meta(sender, 1'000'000)); break;
            case 3: tx = proven(sender, benign); break;
            case 4: {
                tx = proven(sender, benign);
                tx.input[rng() % tx.input.size()] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
                break;
            }
            case 5: {
                // a proof over a benign message glued onto a toxic one
                const auto p = proof::issue_proof(keys(), txmodel::make_message(benign), {});
                tx = txmodel::build_transaction(meta(sender, 2'000'000), proof::embed_proof(to_bytes(toxic), p));
                break;
            }
            default: tx = txmodel::build_transaction(meta(sender, 30'000), Bytes{0x00, 0xff, 0x13}); break;
        }
        g.mempool.push_back(std::move(tx));
    }
    // every sender's nonces are sequential in arrival order
    std::map<Address, std::uint64_t> next;
    for (auto& tx : g.mempool) tx.meta.nonce = next[tx.meta.from]++;
    // plain transfers from senders with other txs may be blocked by nonce ordering; keep liveness
    // checks to senders that only send plain transfers
    std::map<Address, int> per_sender;
    for (const auto& tx : g.mempool) ++per_sender[tx.meta.from];
    std::erase_if(g.plainTransfers, [&](std::size_t i) { return per_sender[g.mempool[i].meta.from] != 1; });
    return g;
}

}  // namespace

TEST_CASE("moderation safety, liveness and determinism", "[pipeline][property]") {
    const auto pk = keys().publicKey;
    auto simulated = classifier::paper_gpt41_profile();
    simulated.toxicRate = 0.3;
    simulated.rngSeed = 99;

    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto g = random_mempool(seed);
        INFO("seed " << seed);

        for (auto mode : {Mode::none, Mode::builderMod, Mode::userMod}) {
            for (bool use_sim : {false, true}) {
                auto c = config(mode);
                if (use_sim) c.classifier = simulated;
                auto s1 = rich_state(), s2 = rich_state();
                const auto b1 = build_block(g.mempool, s1, c);
                const auto b2 = build_block(g.mempool, s2, c);
                CHECK(block_to_json(b1).dump() == block_to_json(b2).dump());

                CHECK(b1.totalGasUsed <= c.blockGasLimit);
                std::size_t included = 0;
                for (const auto& rec : b1.decisions) {
                    const auto& d = rec.decision;
                    if (!d.included()) continue;
                    ++included;
                    CHECK((d.reason == Reason::noSemanticContent || d.reason == Reason::nonToxicVerdict ||
                           d.reason == Reason::validProof));
                }
                CHECK(included == b1.txs.size());

                for (const auto i : g.plainTransfers) {
                    const auto it = std::find_if(b1.decisions.begin(), b1.decisions.end(),
                                                 [&](const DecisionRecord& r) { return r.txIndex == i; });
                    CHECK(it->decision.included());
                }

                for (const auto& tx : b1.txs) {
                    if (mode == Mode::builderMod) {
                        if (auto msg = txmodel::decode_idm(tx.input)) {
                            CHECK(classifier::classify(*msg, c.classifier).label == classifier::Label::nonToxic);
                        }
                    }
                    if (mode == Mode::userMod && proof::locate_message(tx.input)) {
                        const auto split = proof::split_proof(tx.input, pk);
                        REQUIRE(split);
                        CHECK(proof::verify_proof(pk, *txmodel::decode_idm(split->first), split->second));
                        CHECK_FALSE(classifier::lexicon_classify(*txmodel::decode_idm(split->first),
                                                                 *classifier::Lexicon::builtin()) ==
                                    classifier::Label::toxic);
                    }
                }
            }
        }

        // mode none keeps every exec-valid candidate in priority order
        auto state = rich_state(), shadow = rich_state();
        const auto b = build_block(g.mempool, state, config(Mode::none));
        std::vector<std::size_t> order(g.mempool.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t x) {
            return g.mempool[a].meta.maxPriorityFeePerGas > g.mempool[x].meta.maxPriorityFeePerGas;
        });
        std::vector<txmodel::Transaction> expected;
        for (const auto i : order) {
            const auto& tx = g.mempool[i];
            if (!exec_valid(tx, shadow)) continue;
            shadow.perAccountNonce[tx.meta.from] = tx.meta.nonce + 1;
            shadow.perAccountBalance[tx.meta.from] = kRich;  // balances stay ample here
            expected.push_back(tx);
        }
        CHECK(b.txs == expected);
    }
}

TEST_CASE("block and mempool JSON", "[pipeline]") {
    std::vector<txmodel::Transaction> mempool{transfer(1), idm(2, "gm frens"), proven(3, "peace")};
    const auto round = mempool_from_json(mempool_to_json(mempool));
    CHECK(round == mempool);
    CHECK_THROWS_AS(mempool_from_json(nlohmann::json::object()), txmodel::TxParseError);

    auto state = rich_state();
    const auto b = build_block(mempool, state, config(Mode::userMod), 7);
    const auto j = block_to_json(b);
    CHECK(j["number"] == 7);
    CHECK(j["decisions"].size() == 3);
    CHECK(j["decisions"][1]["reason"] == "missingProof");
    CHECK(j["builderRewardWei"].is_string());

    const auto cs = chain_state_from_json(nlohmann::json::parse(R"({
        "defaultBalance": "5",
        "accounts": {"0x00000000000000000000000000000000000000aa": {"balance": "77", "nonce": "3"}}
    })"));
    CHECK(cs.defaultBalance == 5);
    Address aa{};
    aa.bytes[19] = 0xaa;
    CHECK(cs.balance(aa) == 77);
    CHECK(cs.nonce(aa) == 3);
    CHECK(cs.balance(addr(1)) == 5);
    CHECK_THROWS(chain_state_from_json(nlohmann::json::parse(R"({"defaultBalance": "x"})")));
}

}  // namespace modsim::pipeline
