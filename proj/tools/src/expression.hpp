#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace tscal::cli {

/// Error in a configuration file or CLI arguments (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A small arithmetic expression over the variables t and x, for scalar
/// right-hand sides given in configuration files.  Supports + - * / ^,
/// unary minus, parentheses, the constants pi and e, and the functions
/// sin cos tan exp log sqrt abs sign floor round.
class Expression {
public:
    static Expression parse(const std::string& src); // throws ConfigError

    double eval(double t, double x) const;
    bool uses_x() const noexcept { return uses_x_; }
    const std::string& source() const noexcept { return source_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    bool uses_x_ = false;
    std::string source_;
};

} // namespace tscal::cli
