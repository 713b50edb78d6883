#ifndef DCE_ERRORS_HPP
#define DCE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dce {

/// Error categories, mapped to distinct process exit codes by the CLI.
enum class ErrorClass {
    domain,        ///< invalid argument or state outside its contract
    regime,        ///< formula used outside its validity regime
    precision,     ///< result would lose all significant digits
    truncation,    ///< basis/series truncation too small for the request
    integration,   ///< ODE integration failure
    range,         ///< value not representable in double
    consistency,   ///< internal cross-check failed (numerical inconsistency)
    grid,          ///< time-grid precondition violated
    config,        ///< configuration parse/validation failure
    io             ///< file I/O failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string module, std::string parameter,
          std::string message, std::string remedy = {})
        : std::runtime_error(format(module, parameter, message, remedy)),
          cls_(cls), module_(std::move(module)), parameter_(std::move(parameter)),
          remedy_(std::move(remedy)) {}

    ErrorClass error_class() const noexcept { return cls_; }
    const std::string& module() const noexcept { return module_; }
    const std::string& parameter() const noexcept { return parameter_; }
    const std::string& remedy() const noexcept { return remedy_; }

private:
    static std::string format(const std::string& module, const std::string& parameter,
                              const std::string& message, const std::string& remedy) {
        std::string s = "[" + module + "] " + message;
        if (!parameter.empty()) s += " (parameter: " + parameter + ")";
        if (!remedy.empty()) s += "; remedy: " + remedy;
        return s;
    }

    ErrorClass cls_;
    std::string module_, parameter_, remedy_;
};

struct DomainError : Error {
    DomainError(std::string module, std::string parameter, std::string message,
                std::string remedy = {})
        : Error(ErrorClass::domain, std::move(module), std::move(parameter),
                std::move(message), std::move(remedy)) {}
};

struct RegimeError : Error {
    RegimeError(std::string module, std::string parameter, std::string message,
                std::string remedy = {})
        : Error(ErrorClass::regime, std::move(module), std::move(parameter),
                std::move(message), std::move(remedy)) {}
};

struct PrecisionError : Error {
    PrecisionError(std::string module, std::string parameter, std::string message,
                   std::string remedy = {})
        : Error(ErrorClass::precision, std::move(module), std::move(parameter),
                std::move(message), std::move(remedy)) {}
};

struct TruncationError : Error {
    TruncationError(std::string module, std::string parameter, std::string message,
                    std::string remedy = {})
        : Error(ErrorClass::truncation, std::move(module), std::move(parameter),
                std::move(message), std::move(remedy)) {}
};

/// Carries the time at which the integrator gave up.
struct IntegrationError : Error {
    IntegrationError(std::string module, double t_fail, std::string message,
                     std::string remedy = {})
        : Error(ErrorClass::integration, std::move(module),
                "t=" + std::to_string(t_fail), std::move(message), std::move(remedy)),
          t_fail(t_fail) {}
    double t_fail;
};

struct RangeError : Error {
    RangeError(std::string module, std::string quantity, std::string message,
               std::string remedy = {})
        : Error(ErrorClass::range, std::move(module), std::move(quantity),
                std::move(message), std::move(remedy)) {}
};

struct ConsistencyError : Error {
    ConsistencyError(std::string module, std::string parameter, std::string message,
                     std::string remedy = {})
        : Error(ErrorClass::consistency, std::move(module), std::move(parameter),
                std::move(message), std::move(remedy)) {}
};

struct GridError : Error {
    GridError(std::string module, std::string parameter, std::string message)
        : Error(ErrorClass::grid, std::move(module), std::move(parameter),
                std::move(message)) {}
};

/// Parse/validation failure with source position (1-based line/column).
struct ConfigError : Error {
    ConfigError(int line, int column, std::string message)
        : Error(ErrorClass::config, "config",
                "line " + std::to_string(line) + ", col " + std::to_string(column),
                std::move(message)),
          line(line), column(column) {}
    int line, column;
};

struct IoError : Error {
    IoError(std::string module, std::string path, std::string message)
        : Error(ErrorClass::io, std::move(module), std::move(path), std::move(message)) {}
};

/// Exit code for the CLI: 0 success, distinct small integers per class.
inline int exit_code(ErrorClass cls) {
    switch (cls) {
        case ErrorClass::config: return 2;
        case ErrorClass::domain: return 3;
        case ErrorClass::regime: return 4;
        case ErrorClass::precision: return 5;
        case ErrorClass::truncation: return 6;
        case ErrorClass::integration: return 7;
        case ErrorClass::range: return 8;
        case ErrorClass::consistency: return 9;
        case ErrorClass::grid: return 10;
        case ErrorClass::io: return 11;
    }
    return 1;
}

/// Non-fatal validation finding.
struct Warning {
    std::string message;
};

} // namespace dce

#endif // DCE_ERRORS_HPP
