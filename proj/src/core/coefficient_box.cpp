#include "occbound/coefficient_box.hpp"

#include "occbound/errors.hpp"

#include <string>

namespace occbound {

CoefficientBox::CoefficientBox(double a, double b, double k) : a_(a), b_(b), k_(k) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(k)) {
        throw DomainError("CoefficientBox: a, b, k must be finite");
    }
    if (!(a > 0.0) || !(a <= b)) {
        throw DomainError("CoefficientBox: need 0 < a <= b, got a=" + std::to_string(a) +
                          ", b=" + std::to_string(b));
    }
    if (!(k >= 0.0)) {
        throw DomainError("CoefficientBox: need k >= 0, got k=" + std::to_string(k));
    }
}

bool CoefficientBox::contains(double beta, double sigma, double tol) const noexcept {
    if (!std::isfinite(beta) || !std::isfinite(sigma)) return false;
    if (sigma < a_ - tol || sigma > b_ + tol) return false;
    return std::abs(beta) <= k_ * sigma * sigma + tol;
}

Query::Query(double x, double y, double T) : x_(x), y_(y), T_(T) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw DomainError("Query: x and y must be finite");
    }
    if (!(T >= 0.0) || !std::isfinite(T)) {
        throw DomainError("Query: horizon T must be finite and >= 0");
    }
}

}  // namespace occbound
