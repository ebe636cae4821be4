#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgring {

/// Category of a physics/domain failure. Surfaces as a structured record in
/// the CLI, so the names are part of the output format.
enum class ErrorKind {
    domain,            ///< argument outside the mathematical domain
    ring_too_strong,   ///< u^2 < 0, no real angular solution
    complex_lambda,    ///< 1/4 + eta alpha (alpha-1) + lambda < 0
    inadmissible,      ///< state fails sqrt_c > 0 / epsilon > 0
    misuse,            ///< wrapper called with parameters it does not cover
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::domain: return "domain";
        case ErrorKind::ring_too_strong: return "ring_too_strong";
        case ErrorKind::complex_lambda: return "complex_Lambda";
        case ErrorKind::inadmissible: return "inadmissible";
        case ErrorKind::misuse: return "misuse";
    }
    return "unknown";
}

class DomainError : public std::domain_error {
  public:
    DomainError(ErrorKind kind, const std::string& what)
        : std::domain_error(what), kind_(kind) {}
    explicit DomainError(const std::string& what) : DomainError(ErrorKind::domain, what) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

namespace detail {

inline void require(bool cond, ErrorKind kind, const char* msg) {
    if (!cond) throw DomainError(kind, msg);
}

inline void require(bool cond, const char* msg) { require(cond, ErrorKind::domain, msg); }

} // namespace detail
} // namespace kgring
