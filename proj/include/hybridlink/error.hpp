#pragma once

#include <stdexcept>
#include <string>

namespace hybridlink {

// Input outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Parameter geometry that no evaluation path supports (e.g. a Meijer-G
// instance whose contour integrand does not decay).
class unsupported_parameters_error : public std::runtime_error {
public:
    unsupported_parameters_error(const std::string& op, const std::string& condition)
        : std::runtime_error(op + ": unsupported parameters (" + condition + ")"),
          op_(op), condition_(condition) {}

    const std::string& operation() const noexcept { return op_; }
    const std::string& condition() const noexcept { return condition_; }

private:
    std::string op_;
    std::string condition_;
};

// A computed value failed a sanity bound (probability out of [0,1] etc.).
class numerical_integrity_error : public std::runtime_error {
public:
    numerical_integrity_error(const std::string& op, const std::string& what)
        : std::runtime_error(op + ": " + what), op_(op) {}

    const std::string& operation() const noexcept { return op_; }

private:
    std::string op_;
};

class config_error : public std::runtime_error {
public:
    config_error(const std::string& what, int line = 0, std::string key = {})
        : std::runtime_error(what), line_(line), key_(std::move(key)) {}

    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    int line_;
    std::string key_;
};

}  // namespace hybridlink
