#include "kgmasd/chat_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace kgmasd::agents {

using nlohmann::json;

void ChatBackendConfig::validate() const {
    if (temperature < 0.0) throw std::invalid_argument("temperature must be >= 0");
    if (top_p <= 0.0 || top_p > 1.0) throw std::invalid_argument("top_p must be in (0,1]");
    if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
}

HttpChatBackend::HttpChatBackend(ChatBackendConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    if (cfg_.endpoint.empty()) throw std::invalid_argument("chat endpoint not set");
}

std::string HttpChatBackend::chat_once(const std::vector<ChatMessage>& messages) {
    httplib::Client client(cfg_.endpoint);
    httplib::Headers headers;
    if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    json msgs = json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    json body{{"model", cfg_.model},
              {"messages", msgs},
              {"temperature", cfg_.temperature},
              {"top_p", cfg_.top_p},
              {"max_tokens", cfg_.max_tokens}};

    auto res = client.Post("/chat", headers, body.dump(), "application/json");
    if (!res) throw TransportError("chat backend unreachable: " + cfg_.endpoint);
    if (res->status != 200)
        throw TransportError("chat backend returned HTTP " + std::to_string(res->status));
    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("chat reply is not JSON: ") + e.what(), res->body);
    }
    if (!reply.contains("content") || !reply["content"].is_string())
        throw ProtocolError("chat reply missing \"content\"", res->body);
    return reply["content"].get<std::string>();
}

std::string HttpChatBackend::chat(const std::vector<ChatMessage>& messages, const CallMeta&) {
    auto delay = std::chrono::milliseconds(200);
    for (int attempt = 0;; ++attempt) {
        try {
            return chat_once(messages);
        } catch (const TransportError&) {
            if (attempt >= 2) throw;
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
    }
}

ScriptedBackend ScriptedBackend::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open scripted backend file: " + path);
    std::vector<std::pair<CallMeta, std::string>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error("scripted backend parse error at line " +
                                     std::to_string(lineno) + ": " + e.what());
        }
        CallMeta meta;
        meta.agent_role = j.at("match").at("agent_role").get<std::string>();
        meta.iteration = j.at("match").value("iteration", -1);
        entries.emplace_back(std::move(meta), j.at("response").get<std::string>());
    }
    return ScriptedBackend(std::move(entries));
}

std::string ScriptedBackend::chat(const std::vector<ChatMessage>&, const CallMeta& meta) {
    for (const auto& [m, resp] : entries_)
        if (m.agent_role == meta.agent_role && m.iteration == meta.iteration) return resp;
    for (const auto& [m, resp] : entries_)
        if (m.agent_role == meta.agent_role && m.iteration == -1) return resp;
    throw ProtocolError("no scripted response for role=" + meta.agent_role +
                        " iteration=" + std::to_string(meta.iteration));
}

std::string extract_json_block(const std::string& reply) {
    auto try_parse = [](const std::string& s) -> bool {
        return json::accept(s);
    };

    const std::string fence = "```";
    std::size_t pos = reply.find(fence);
    while (pos != std::string::npos) {
        std::size_t start = reply.find('\n', pos);
        if (start == std::string::npos) break;
        std::size_t end = reply.find(fence, start);
        if (end == std::string::npos) break;
        std::string body = reply.substr(start + 1, end - start - 1);
        if (try_parse(body)) return body;
        pos = reply.find(fence, end + fence.size());
    }

    // First balanced top-level object.
    for (std::size_t i = 0; i < reply.size(); ++i) {
        if (reply[i] != '{') continue;
        int depth = 0;
        bool in_str = false;
        for (std::size_t j = i; j < reply.size(); ++j) {
            char c = reply[j];
            if (in_str) {
                if (c == '\\')
                    ++j;
                else if (c == '"')
                    in_str = false;
            } else if (c == '"') {
                in_str = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    std::string body = reply.substr(i, j - i + 1);
                    if (try_parse(body)) return body;
                    break;
                }
            }
        }
    }
    throw ProtocolError("reply contains no parseable JSON block", reply);
}

}  // namespace kgmasd::agents
