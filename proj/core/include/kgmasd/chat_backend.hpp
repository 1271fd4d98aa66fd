#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kgmasd/embedding.hpp"  // TransportError

namespace kgmasd::agents {

using seg::TransportError;

// Backend reply that could not be parsed into the expected shape; carries
// the raw text for diagnosis.
struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& what, std::string raw = {})
        : std::runtime_error(what), raw_reply(std::move(raw)) {}
    std::string raw_reply;
};

struct ChatBackendConfig {
    std::string endpoint;
    std::string model;
    double temperature = 0.8;
    double top_p = 0.85;
    int max_tokens = 1024;
    std::string api_key_env = "KGMASD_LLM_API_KEY";

    void validate() const;
};

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string content;
};

// Identifies the calling agent; scripted backends key playback on it.
struct CallMeta {
    std::string agent_role;
    int iteration = 0;
};

// Must be safe for concurrent use (sessions may run in parallel).
class ChatBackend {
  public:
    virtual ~ChatBackend() = default;
    virtual std::string chat(const std::vector<ChatMessage>& messages, const CallMeta& meta) = 0;
};

// POST {endpoint}/chat with the wire schema
// {"model","messages":[{"role","content"}],"temperature","top_p","max_tokens"}
// -> {"content":str}. Bearer token read from the env var named by
// api_key_env. Two transport retries with exponential backoff.
class HttpChatBackend final : public ChatBackend {
  public:
    explicit HttpChatBackend(ChatBackendConfig cfg);
    std::string chat(const std::vector<ChatMessage>& messages, const CallMeta& meta) override;

  private:
    std::string chat_once(const std::vector<ChatMessage>& messages);
    ChatBackendConfig cfg_;
};

// Deterministic playback from a JSONL file of
// {"match":{"agent_role":str,"iteration":int},"response":str}.
// Selection: exact (agent_role, iteration) match first, then an
// (agent_role, -1) wildcard entry. No match is a ProtocolError.
class ScriptedBackend final : public ChatBackend {
  public:
    static ScriptedBackend from_file(const std::string& path);
    explicit ScriptedBackend(std::vector<std::pair<CallMeta, std::string>> entries)
        : entries_(std::move(entries)) {}
    std::string chat(const std::vector<ChatMessage>& messages, const CallMeta& meta) override;

  private:
    std::vector<std::pair<CallMeta, std::string>> entries_;
};

// Pulls the first JSON object out of a chat reply: a fenced ```json block
// if present, otherwise the first balanced {...} span. Throws
// ProtocolError (carrying the raw reply) when none parses.
std::string extract_json_block(const std::string& reply);

}  // namespace kgmasd::agents
