#ifndef XFT_ERRORS_HPP
#define XFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xft {

struct NotHermitian : std::runtime_error {
    explicit NotHermitian(const std::string& what) : std::runtime_error(what) {}
};

struct NotUnitary : std::runtime_error {
    explicit NotUnitary(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct IndexOutOfRange : std::out_of_range {
    explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

struct DegenerateSpectrum : std::runtime_error {
    explicit DegenerateSpectrum(const std::string& what) : std::runtime_error(what) {}
};

struct CertificateFailure : std::runtime_error {
    explicit CertificateFailure(const std::string& what) : std::runtime_error(what) {}
};

struct SingularState : std::runtime_error {
    explicit SingularState(const std::string& what) : std::runtime_error(what) {}
};

struct MissingInteractionHamiltonian : std::runtime_error {
    explicit MissingInteractionHamiltonian(const std::string& what) : std::runtime_error(what) {}
};

// Config parse/validation error carrying the path into the offending JSON node,
// e.g. "baths.A.charges[0].matrix".
struct ConfigError : std::runtime_error {
    ConfigError(std::string path_, const std::string& what)
        : std::runtime_error(path_.empty() ? what : path_ + ": " + what),
          path(std::move(path_)) {}
    std::string path;
};

}  // namespace xft

#endif
