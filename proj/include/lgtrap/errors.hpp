#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lgtrap {

// Invalid or inconsistent scenario configuration. Collects every violation
// found, not just the first one. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), m_violations(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return m_violations; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "configuration invalid:";
        for (const auto& msg : v) {
            s += "\n  - ";
            s += msg;
        }
        return s;
    }

    std::vector<std::string> m_violations;
};

// Numerical failure: norm drift, integrator step underflow, quadrature
// convergence. CLI exit code 3. (An oracle cross-check mismatch is not an
// exception: the suite reports it and the CLI exits 4.)
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lgtrap
