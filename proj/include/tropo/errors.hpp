#pragma once

#include <stdexcept>
#include <string>

namespace tropo {

// Every library failure derives from Error so the CLI can map it to an exit code
// with a single catch.
enum class ErrorKind {
    InvalidParameter,
    ConfigError,
    Io,
    UnstableSystem,
    SingularAtFrequency,
    NonPositiveDefinite,
    RecurrenceSingular,
    DivergentPurityIntegral,
    QuadratureNotConverged,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define TROPO_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& what)                            \
            : Error(ErrorKind::Name, what) {}                             \
    };

TROPO_DEFINE_ERROR(InvalidParameter)
TROPO_DEFINE_ERROR(ConfigError)
TROPO_DEFINE_ERROR(UnstableSystem)
TROPO_DEFINE_ERROR(SingularAtFrequency)
TROPO_DEFINE_ERROR(NonPositiveDefinite)
TROPO_DEFINE_ERROR(RecurrenceSingular)
TROPO_DEFINE_ERROR(DivergentPurityIntegral)
TROPO_DEFINE_ERROR(QuadratureNotConverged)

#undef TROPO_DEFINE_ERROR

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

} // namespace tropo
