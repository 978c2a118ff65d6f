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

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "modsim/classifier.hpp"

namespace modsim::classifier {

namespace {

constexpr std::string_view kPrompt =
    "You are a content moderation classifier for messages embedded in blockchain transactions. "
    "Decide whether the user's message is toxic (hateful, harassing, threatening, sexually explicit, "
    "or otherwise abusive). Answer with exactly one word: TOXIC or NONTOXIC.";

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Endpoint split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ClassifierUnavailable("endpoint URL lacks a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

Label parse_reply(const std::string& content) {
    auto first = std::find_if_not(content.begin(), content.end(), [](unsigned char c) { return std::isspace(c); });
    std::string word;
    for (auto it = first; it != content.end(); ++it) {
        const unsigned char c = static_cast<unsigned char>(*it);
        if (std::isalpha(c)) {
            word += static_cast<char>(std::toupper(c));
        } else if (c == '-' || c == '_') {
            continue;  // NON-TOXIC, NON_TOXIC
        } else {
            break;
        }
    }
    if (word == "TOXIC") return Label::toxic;
    if (word == "NONTOXIC") return Label::nonToxic;
    throw ClassifierUnavailable("unparseable classifier reply: '" + content.substr(0, 64) + "'");
}

}  // namespace

std::string_view binary_prompt() { return kPrompt; }

Verdict http_classify(const txmodel::DecodedMessage& message, const ClassifierConfig& config) {
    const char* key = std::getenv(config.apiKeyEnvVar.c_str());
    if (key == nullptr || *key == '\0') {
        throw ClassifierUnavailable("API key variable " + config.apiKeyEnvVar + " is not set");
    }
    const auto endpoint = split_url(config.endpointUrl);

    const nlohmann::json body = {
        {"model", config.modelName},
        {"messages",
         nlohmann::json::array({{{"role", "system"}, {"content", std::string(kPrompt)}},
                                {{"role", "user"}, {"content", message.text}}})},
    };

    const auto start = std::chrono::steady_clock::now();
    httplib::Client client(endpoint.origin);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    client.set_bearer_token_auth(key);

    auto res = client.Post(endpoint.path, body.dump(), "application/json");
    const double elapsed = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
    if (!res) throw ClassifierUnavailable("transport error: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) {
        throw ClassifierUnavailable("classifier endpoint returned HTTP " + std::to_string(res->status));
    }

    std::string content;
    try {
        const auto reply = nlohmann::json::parse(res->body);
        content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ClassifierUnavailable(std::string("malformed classifier response: ") + e.what());
    }

    Verdict v;
    v.label = parse_reply(content);
    v.latencyMicros = elapsed;
    v.tokenCount = num_tokens(message, config.bytesPerToken);
    return v;
}

}  // namespace modsim::classifier
