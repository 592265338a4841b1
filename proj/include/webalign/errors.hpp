#pragma once

#include <stdexcept>
#include <string>

namespace webalign {

// Base for every library error. Each condition the contracts distinguish gets
// its own type so callers can branch on the catch; messages carry the
// condition name so CLI output stays greppable.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

class EmptyObservationError final : public Error {
public:
    explicit EmptyObservationError(const std::string& m) : Error("EmptyObservation: " + m) {}
};

class ParseError final : public Error {
public:
    explicit ParseError(const std::string& m) : Error("ParseError: " + m) {}
};

class UnknownNodeError final : public Error {
public:
    explicit UnknownNodeError(const std::string& m) : Error("UnknownNode: " + m) {}
};

class UnknownActionError final : public Error {
public:
    explicit UnknownActionError(const std::string& m) : Error("UnknownAction: " + m) {}
};

class DisallowedActionError final : public Error {
public:
    explicit DisallowedActionError(const std::string& m) : Error("DisallowedAction: " + m) {}
};

class MalformedActionError final : public Error {
public:
    explicit MalformedActionError(const std::string& m) : Error("MalformedAction: " + m) {}
};

class InvalidObjectiveError final : public Error {
public:
    explicit InvalidObjectiveError(const std::string& m) : Error("InvalidObjective: " + m) {}
};

class InvalidPlanRefError final : public Error {
public:
    explicit InvalidPlanRefError(const std::string& m) : Error("InvalidPlanRef: " + m) {}
};

class UnparsableResponseError final : public Error {
public:
    explicit UnparsableResponseError(const std::string& m) : Error("UnparsableResponse: " + m) {}
};

class SnapshotError final : public Error {
public:
    explicit SnapshotError(const std::string& m) : Error("SnapshotError: " + m) {}
};

class InvalidConfigError final : public Error {
public:
    explicit InvalidConfigError(const std::string& m) : Error("InvalidConfig: " + m) {}
};

class EnvironmentError final : public Error {
public:
    explicit EnvironmentError(const std::string& m) : Error("EnvironmentError: " + m) {}
};

// LLM transport failures keep their taxonomy so the retry policy can decide
// which ones are worth another attempt.
class LLMError final : public Error {
public:
    enum class Kind { Timeout, RateLimited, Malformed };

    LLMError(Kind kind, const std::string& m) : Error(prefix(kind) + m), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    static std::string prefix(Kind kind) {
        switch (kind) {
            case Kind::Timeout: return "LLMError(timeout): ";
            case Kind::RateLimited: return "LLMError(rate_limited): ";
            case Kind::Malformed: return "LLMError(malformed): ";
        }
        return "LLMError: ";
    }

    Kind kind_;
};

}  // namespace webalign
