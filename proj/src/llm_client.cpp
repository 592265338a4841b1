#include "webalign/llm_client.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "webalign/errors.hpp"

namespace webalign::runtime {

std::string prompt_digest(const std::string& prompt) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : prompt) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

ScriptedLLMClient::ScriptedLLMClient(std::vector<std::string> completions,
                                     std::map<std::string, std::string> keyed)
    : completions_(std::move(completions)), keyed_(std::move(keyed)) {}

ScriptedLLMClient ScriptedLLMClient::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfigError("cannot open script file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfigError("script file '" + path + "' is not valid JSON: " + e.what());
    }

    std::vector<std::string> completions;
    std::map<std::string, std::string> keyed;
    if (doc.contains("completions")) {
        for (const auto& entry : doc.at("completions")) {
            completions.push_back(entry.get<std::string>());
        }
    }
    if (doc.contains("keyed")) {
        for (const auto& [digest, completion] : doc.at("keyed").items()) {
            keyed.emplace(digest, completion.get<std::string>());
        }
    }
    if (completions.empty() && keyed.empty()) {
        throw InvalidConfigError("script file '" + path + "' holds no completions");
    }
    return ScriptedLLMClient(std::move(completions), std::move(keyed));
}

std::string ScriptedLLMClient::complete(const std::string& prompt) {
    std::lock_guard<std::mutex> lock(mutex_);
    ++calls_;
    prompts_.push_back(prompt);

    auto it = keyed_.find(prompt_digest(prompt));
    if (it != keyed_.end()) return it->second;
    if (next_ < completions_.size()) return completions_[next_++];
    throw LLMError(LLMError::Kind::Malformed,
                   "scripted completions exhausted after " + std::to_string(calls_) + " calls");
}

int ScriptedLLMClient::calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

std::vector<std::string> ScriptedLLMClient::prompts() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return prompts_;
}

int backoff_delay_ms(int attempt, int base_ms) {
    if (attempt < 1) attempt = 1;
    std::int64_t delay = base_ms;
    for (int i = 1; i < attempt; ++i) {
        delay *= 2;
        if (delay >= 8000) return 8000;
    }
    return static_cast<int>(std::min<std::int64_t>(delay, 8000));
}

std::string complete_with_retry(LLMClient& client, const std::string& prompt,
                                const LLMSettings& settings,
                                const std::function<void(int)>& sleep_ms) {
    auto do_sleep = sleep_ms ? sleep_ms : [](int ms) {
        std::this_thread::sleep_for(std::chrono::milliseconds(ms));
    };

    int attempt = 0;
    while (true) {
        ++attempt;
        try {
            return client.complete(prompt);
        } catch (const LLMError& e) {
            bool retriable = e.kind() == LLMError::Kind::Timeout ||
                             e.kind() == LLMError::Kind::RateLimited;
            if (!retriable || attempt > settings.max_retries) throw;
            do_sleep(backoff_delay_ms(attempt));
        }
    }
}

namespace {

// Blocks callers beyond the configured in-flight cap.
class InflightLimiter {
public:
    explicit InflightLimiter(int limit) : limit_(limit) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return inflight_ < limit_; });
        ++inflight_;
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            --inflight_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int limit_;
    int inflight_ = 0;
};

struct ParsedEndpoint {
    std::string host_port;  // scheme://host[:port]
    std::string path;
};

ParsedEndpoint parse_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw InvalidConfigError("endpoint must look like http://host[:port]/path, got '" +
                                 endpoint + "'");
    }
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {endpoint, "/v1/chat/completions"};
    }
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

}  // namespace

struct HttpLLMClient::Impl {
    LLMSettings settings;
    ParsedEndpoint endpoint;
    std::string api_key;
    InflightLimiter limiter;

    explicit Impl(LLMSettings s)
        : settings(std::move(s)),
          endpoint(parse_endpoint(settings.endpoint)),
          limiter(settings.max_inflight) {
        const char* key = std::getenv("AGENT_LLM_API_KEY");
        if (key != nullptr) api_key = key;
    }
};

HttpLLMClient::HttpLLMClient(LLMSettings settings) : impl_(new Impl(std::move(settings))) {
    if (impl_->settings.endpoint.empty()) {
        delete impl_;
        throw InvalidConfigError("live mode needs a non-empty endpoint");
    }
}

HttpLLMClient::~HttpLLMClient() { delete impl_; }

std::string HttpLLMClient::complete(const std::string& prompt) {
    impl_->limiter.acquire();
    struct Release {
        InflightLimiter& limiter;
        ~Release() { limiter.release(); }
    } release{impl_->limiter};

    httplib::Client client(impl_->endpoint.host_port);
    client.set_connection_timeout(impl_->settings.timeout_ms / 1000,
                                  (impl_->settings.timeout_ms % 1000) * 1000);
    client.set_read_timeout(impl_->settings.timeout_ms / 1000,
                            (impl_->settings.timeout_ms % 1000) * 1000);

    nlohmann::json payload = {
        {"model", impl_->settings.model},
        {"temperature", impl_->settings.temperature},
        {"messages", nlohmann::json::array({nlohmann::json{{"role", "user"}, {"content", prompt}}})},
    };

    httplib::Headers headers;
    if (!impl_->api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + impl_->api_key);
    }

    httplib::Result result =
        client.Post(impl_->endpoint.path, headers, payload.dump(), "application/json");
    if (!result) {
        throw LLMError(LLMError::Kind::Timeout,
                       "request to " + impl_->settings.endpoint + " failed: " +
                           httplib::to_string(result.error()));
    }
    if (result->status == 429) {
        throw LLMError(LLMError::Kind::RateLimited, "endpoint returned 429");
    }
    if (result->status != 200) {
        throw LLMError(LLMError::Kind::Malformed,
                       "endpoint returned status " + std::to_string(result->status));
    }

    try {
        nlohmann::json body = nlohmann::json::parse(result->body);
        return body.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw LLMError(LLMError::Kind::Malformed,
                       std::string("completion body is not chat-completion JSON: ") + e.what());
    }
}

}  // namespace webalign::runtime
