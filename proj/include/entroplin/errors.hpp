#ifndef ENTROPLIN_ERRORS_HPP
#define ENTROPLIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace entroplin {

// Invalid parameters, divergent requests, degenerate samples.  CLI exit code 1.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// A numeric routine could not reach the requested tolerance.  CLI exit code 1.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// A run configuration is unsatisfiable (e.g. truncation budget too small).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / parsing failures.  CLI exit code 2.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace entroplin

#endif
