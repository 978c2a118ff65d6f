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

#include "modsim/txmodel.hpp"
#include "modsim/utf8.hpp"
#include "test_vectors.hpp"

namespace modsim::txmodel {

namespace {

TxFieldsMeta valid_meta() {
    TxFieldsMeta meta;
    meta.from.bytes.fill(0xaa);
    meta.to.bytes.fill(0xbb);
    meta.value = Wei("1000000000000000000");
    meta.nonce = 3;
    meta.gasLimit = 50000;
    meta.maxFeePerGas = Wei(30'000'000'000ULL);
    meta.maxPriorityFeePerGas = Wei(2'000'000'000ULL);
    meta.senderSig = {0xde, 0xad};
    return meta;
}

// Random code points from a few scripts, skipping surrogates.
std::string random_text(std::mt19937_64& rng) {
    static constexpr char32_t kRanges[][2] = {
        {0x20, 0x7e}, {0xa0, 0x17f}, {0x391, 0x3c9}, {0x410, 0x44f}, {0x4e00, 0x4fff}, {0x1f300, 0x1f5ff}};
    std::uniform_int_distribution<std::size_t> len(0, 40);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(kRanges) - 1);
    std::u32string cps;
    for (auto n = len(rng); n > 0; --n) {
        const auto& r = kRanges[pick(rng)];
        cps.push_back(std::uniform_int_distribution<std::uint32_t>(r[0], r[1])(rng));
    }
    return utf8::encode(cps);
}

}  // namespace

TEST_CASE("encode_idm produces UTF-8 bytes", "[txmodel]") {
    CHECK(encode_idm("").empty());
    CHECK(encode_idm("hi") == Bytes{0x68, 0x69});
    CHECK(encode_idm("\xc3\xa9") == Bytes{0xc3, 0xa9});
    CHECK_THROWS_AS(encode_idm("\xff\xfe"), std::invalid_argument);

    std::string sentence;
    while (sentence.size() < 1000) sentence += "The quick brown fox jumps over the lazy dog. ";
    sentence.resize(1000);
    const auto bytes = encode_idm(sentence);
    REQUIRE(bytes.size() == 1000);
    CHECK(std::equal(bytes.begin(), bytes.end(), sentence.begin(),
                     [](std::uint8_t b, char c) { return b == static_cast<std::uint8_t>(c); }));
}

TEST_CASE("decode_idm accepts human text and rejects call data", "[txmodel]") {
    const auto gm = decode_idm(encode_idm("gm frens"));
    REQUIRE(gm);
    CHECK(gm->text == "gm frens");
    CHECK(gm->byteLength == 8);

    // ERC-20 transfer selector followed by two zero words
    Bytes call = {0xa9, 0x05, 0x9c, 0xbb};
    call.resize(4 + 64, 0x00);
    CHECK_FALSE(decode_idm(call));
    CHECK_FALSE(is_semantic(call));

    CHECK_FALSE(decode_idm({}));
}

TEST_CASE("is_semantic rules", "[txmodel]") {
    CHECK(is_semantic(encode_idm("hello world")));
    CHECK_FALSE(is_semantic(encode_idm("1234")));
    CHECK_FALSE(is_semantic(encode_idm("abc")));        // three characters
    CHECK(is_semantic(encode_idm("abcd")));
    CHECK(is_semantic(encode_idm("\xce\xb3\xce\xb5\xce\xb9\xce\xb1")));  // greek, 4 chars / 8 bytes
    CHECK(is_semantic(encode_idm("line one\nline two\r\n")));

    // one control code in ten characters is exactly 90% printable
    CHECK(is_semantic(to_bytes(std::string("abcdefghi") + '\x01')));
    CHECK_FALSE(is_semantic(to_bytes(std::string("abcdefgh") + "\x01\x02")));

    const auto random32 = *from_hex(test_vectors::kSeed42RandomBytes);
    REQUIRE(random32.size() == 32);
    CHECK_FALSE(utf8::is_valid(random32));
    CHECK_FALSE(is_semantic(random32));

    // overlong '/' and a UTF-16 surrogate are both invalid
    CHECK_FALSE(is_semantic(Bytes{'a', 'b', 'c', 0xc0, 0xaf}));
    CHECK_FALSE(is_semantic(Bytes{'a', 'b', 'c', 0xed, 0xa0, 0x80}));
}

TEST_CASE("is_semantic is pure", "[txmodel][property]") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        Bytes b(std::uniform_int_distribution<std::size_t>(0, 64)(rng));
        for (auto& x : b) x = static_cast<std::uint8_t>(rng());
        const bool first = is_semantic(b);
        CHECK(is_semantic(b) == first);
        CHECK(decode_idm(b).has_value() == first);
    }
}

TEST_CASE("decode_idm inverts encode_idm on semantic text", "[txmodel][property]") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto text = random_text(rng);
        const auto bytes = encode_idm(text);
        const auto decoded = decode_idm(bytes);
        if (!is_semantic(bytes)) {
            CHECK_FALSE(decoded);
            continue;
        }
        REQUIRE(decoded);
        CHECK(decoded->text == text);
        CHECK(decoded->byteLength == bytes.size());
        ++checked;
    }
    CHECK(checked > 1000);
}

TEST_CASE("build_transaction enforces meta invariants", "[txmodel]") {
    const auto plain = build_transaction(valid_meta(), {});
    CHECK(plain.input.empty());
    const auto idm = build_transaction(valid_meta(), encode_idm("gm"));
    CHECK(idm.input == Bytes{'g', 'm'});

    auto bad = valid_meta();
    bad.maxPriorityFeePerGas = bad.maxFeePerGas + 1;
    CHECK_THROWS_AS(build_transaction(bad, {}), std::invalid_argument);
    bad = valid_meta();
    bad.gasLimit = 20999;
    CHECK_THROWS_AS(build_transaction(bad, {}), std::invalid_argument);
}

TEST_CASE("transaction JSON uses the exact schema", "[txmodel]") {
    const auto tx = build_transaction(valid_meta(), encode_idm("hi"));
    const auto j = nlohmann::json::parse(tx_to_json(tx));
    CHECK(j.size() == 9);
    CHECK(j.at("input") == "0x6869");
    CHECK(j.at("value") == "1000000000000000000");
    CHECK(j.at("gasLimit") == "50000");
    CHECK(j.at("from") == "0xaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa");
    CHECK(j.at("senderSig") == "0xdead");

    CHECK(tx_from_json(tx_to_json(tx)) == tx);
    const auto plain = build_transaction(valid_meta(), {});
    CHECK(tx_from_json(tx_to_json(plain)) == plain);
}

TEST_CASE("tx_from_json names the bad field", "[txmodel]") {
    auto j = tx_to_json_value(build_transaction(valid_meta(), {}));
    j["input"] = "0xZZ";
    try {
        tx_from_json(j.dump());
        FAIL("expected TxParseError");
    } catch (const TxParseError& e) {
        CHECK(e.field() == "input");
        CHECK(std::string(e.what()).find("input") != std::string::npos);
    }

    j = tx_to_json_value(build_transaction(valid_meta(), {}));
    j["value"] = "12abc";
    CHECK_THROWS_WITH(tx_from_json(j.dump()), Catch::Matchers::ContainsSubstring("value"));
    j = tx_to_json_value(build_transaction(valid_meta(), {}));
    j.erase("nonce");
    CHECK_THROWS_WITH(tx_from_json(j.dump()), Catch::Matchers::ContainsSubstring("nonce"));
    j = tx_to_json_value(build_transaction(valid_meta(), {}));
    j["to"] = "0x1234";
    CHECK_THROWS_WITH(tx_from_json(j.dump()), Catch::Matchers::ContainsSubstring("to"));
    CHECK_THROWS_AS(tx_from_json("{not json"), TxParseError);
}

TEST_CASE("JSON round trip over random transactions", "[txmodel][property]") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 300; ++i) {
        Transaction tx;
        for (auto& b : tx.meta.from.bytes) b = static_cast<std::uint8_t>(rng());
        for (auto& b : tx.meta.to.bytes) b = static_cast<std::uint8_t>(rng());
        tx.meta.value = (Wei(rng()) << 128) | Wei(rng());
        tx.meta.nonce = rng();
        tx.meta.gasLimit = 21000 + rng() % 1'000'000;
        tx.meta.maxFeePerGas = Wei(rng()) << 64;
        tx.meta.maxPriorityFeePerGas = tx.meta.maxFeePerGas / 3;
        tx.input.resize(rng() % 200);
        for (auto& b : tx.input) b = static_cast<std::uint8_t>(rng());
        tx.meta.senderSig.resize(rng() % 70);
        for (auto& b : tx.meta.senderSig) b = static_cast<std::uint8_t>(rng());
        REQUIRE(tx_from_json(tx_to_json(tx)) == tx);
    }
}

}  // namespace modsim::txmodel
