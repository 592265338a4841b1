#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "webalign/config.hpp"

namespace webalign::runtime {

// π_LLM boundary: one prompt in, one completion out. Implementations report
// failures through LLMError so the retry policy can tell transient from
// permanent ones.
class LLMClient {
public:
    virtual ~LLMClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

// FNV-1a 64 over the prompt bytes, hex-encoded; keys digest-addressed script
// entries.
std::string prompt_digest(const std::string& prompt);

// Replays canned completions: digest-keyed entries win when they match,
// otherwise the next sequential completion is consumed. Thread-safe; records
// every prompt it saw for test introspection.
class ScriptedLLMClient : public LLMClient {
public:
    explicit ScriptedLLMClient(std::vector<std::string> completions,
                               std::map<std::string, std::string> keyed = {});

    // Script file schema: {"completions": [...], "keyed": {digest: completion}}.
    static ScriptedLLMClient from_file(const std::string& path);

    std::string complete(const std::string& prompt) override;

    int calls() const;
    std::vector<std::string> prompts() const;

private:
    mutable std::mutex mutex_;
    std::vector<std::string> completions_;
    std::map<std::string, std::string> keyed_;
    std::size_t next_ = 0;
    int calls_ = 0;
    std::vector<std::string> prompts_;
};

// Exponential backoff delay for the given 1-based attempt, capped at 8s.
int backoff_delay_ms(int attempt, int base_ms = 250);

// Runs complete() with up to settings.max_retries retries on timeout or
// rate-limit failures; malformed responses are not retried. The sleeper is
// injectable so tests can observe the delays.
std::string complete_with_retry(LLMClient& client, const std::string& prompt,
                                const LLMSettings& settings,
                                const std::function<void(int)>& sleep_ms = {});

// Chat-completion HTTP client. The API key is read from AGENT_LLM_API_KEY;
// endpoint and model come from the settings. Shared across episodes: calls
// are serialized through an in-flight cap of settings.max_inflight.
class HttpLLMClient : public LLMClient {
public:
    explicit HttpLLMClient(LLMSettings settings);
    ~HttpLLMClient() override;

    std::string complete(const std::string& prompt) override;

private:
    struct Impl;
    Impl* impl_;
};

}  // namespace webalign::runtime
