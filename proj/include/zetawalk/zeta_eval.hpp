#pragma once

// Evaluation of the Riemann zeta function.
//
//   truncated_zeta   sum_{k<=x} k^{-s} - x^{1-s}/(1-s), the approximation
//                    underlying the auxiliary system Z_n(x)
//   zeta_critical    the same with x chosen from |t| so that |t| <= 2 pi x / C
//   zeta_em_oracle   Euler-Maclaurin reference evaluator (independent oracle)
//   zeta_real        zeta(r) for real r > 1

#include <cstdint>
#include <vector>

#include "zetawalk/compensated.hpp"
#include "zetawalk/complex_value.hpp"

namespace zetawalk {

struct ZetaEvalConfig {
    double sigma = 0.5;
    /// The constant C in T_x = 2 pi x / C; must exceed 1.
    double safety_constant = 2.0;
    std::uint64_t x_min = 64;
    /// Evaluation with |t| above this is refused with CapExceededError.
    double t_cap = 1e9;

    void validate() const;
};

struct CriticalValue {
    ComplexValue value;
    std::uint64_t x = 0;
};

/// The two pieces of sum_{k<=x} k^{-s} - x^{1-s}/(1-s), s = sigma + i t:
/// `sum` is the Dirichlet polynomial, `correction` is x^{1-s}/(1-s).
struct AuxiliaryParts {
    ComplexValue sum;
    ComplexValue correction;
    ComplexValue value() const { return sum - correction; }
};

/// k^{-sigma} e^{-i t log k}. The phase is formed from |t| and the sign is
/// applied afterwards, so term(-t) is the exact conjugate of term(t).
ComplexValue dirichlet_term(double log_k, double weight, double t);

/// x^{1-s}/(1-s) for real x >= 1.
ComplexValue correction_term(double sigma, double t, double x);

/// sum_{k <= floor(x)} k^{-sigma - i t}, ascending k, compensated.
ComplexValue dirichlet_sum(double sigma, double t, double x);

/// Both pieces of the truncated formula at real x >= 1.
AuxiliaryParts auxiliary_parts(double sigma, double t, double x);

/// Precomputed log k and k^{-sigma} for repeated evaluation of the
/// Dirichlet polynomial at many t with a common sigma. Results are bitwise
/// identical to dirichlet_sum.
class DirichletTable {
public:
    DirichletTable(double sigma, std::uint64_t k_max);

    double sigma() const { return sigma_; }
    std::uint64_t k_max() const { return static_cast<std::uint64_t>(log_k_.size()); }

    /// sum_{k<=floor(x)} k^{-sigma - i t}; requires floor(x) <= k_max().
    ComplexValue sum(double t, double x) const;

    /// Partial sums at each cut in `cuts` (ascending, each <= k_max()),
    /// accumulated in a single pass.
    std::vector<ComplexValue> prefix_sums(double t, const std::vector<double>& cuts) const;

private:
    double sigma_;
    std::vector<double> log_k_;
    std::vector<double> weight_;
};

/// sum_{k<=x} k^{-s} - x^{1-s}/(1-s) with s = sigma + i t.
/// Throws DomainError for sigma <= 0 or x == 0, PoleError at s = 1.
ComplexValue truncated_zeta(double sigma, double t, std::uint64_t x);

/// Truncation length used by zeta_critical for a given t.
std::uint64_t critical_truncation(double t, const ZetaEvalConfig& cfg);

/// truncated_zeta at sigma = cfg.sigma with
/// x = max(x_min, ceil(safety_constant |t| / (2 pi))).
/// Throws CapExceededError when |t| > cfg.t_cap.
CriticalValue zeta_critical(double t, const ZetaEvalConfig& cfg = {});

/// Euler-Maclaurin reference value of zeta(sigma + i t): main sum of
/// max(2 ceil|t|, 64) terms, tail integral, eight Bernoulli corrections.
/// Valid for sigma > 0, |t| <= 1e6.
ComplexValue zeta_em_oracle(double sigma, double t);

/// zeta(r) for real r > 1, relative accuracy ~1e-14.
double zeta_real(double r);

}  // namespace zetawalk
