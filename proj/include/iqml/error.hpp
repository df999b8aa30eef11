#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace iqml {

/// Malformed formula, model, or proof text. `offset` is a character offset for
/// formulas and a 1-based line number for line-oriented files.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : std::runtime_error(what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A model description that violates the structure invariants.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

/// A request whose search space exceeds a configured limit.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown world/index names and similar precondition failures.
class LookupError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace iqml
