#pragma once

// Second-order theory of the auxiliary system
//
//   Z_n(x) = Z_{n1} - Z_{n2},
//   Z_{n1} = sum_{k<=x} k^{-(sigma + i S_n)},
//   Z_{n2} = x^{1-(sigma + i S_n)} / (1 - (sigma + i S_n)),
//
// sampled along a standard Cauchy walk S_n: exact finite-x moments, their
// x -> infinity limits, the constant K_n and the limiting constant C, and
// the resulting predictions for zeta(1/2 + i S_n).
//
// Notation used below: q = 1 - sigma, d = m - n.

#include <cstdint>
#include <optional>
#include <stop_token>

#include "zetawalk/complex_value.hpp"

namespace zetawalk {

/// Which moment is being asked for: indices n <= m, sigma in [1/2, 1),
/// truncation x >= 1.
struct MomentQuery {
    std::uint64_t n = 1;
    std::uint64_t m = 1;
    double sigma = 0.5;
    double x = 1.0;

    /// Throws DomainError when an invariant does not hold.
    void validate() const;
};

/// The four blocks of E Z_n conj(Z_m):
/// c11 = E Z_{n1} conj Z_{m1}, c12 = E Z_{n1} conj Z_{m2},
/// c21 = E Z_{n2} conj Z_{m1}, c22 = E Z_{n2} conj Z_{m2},
/// combined = c11 - c12 - c21 + c22.
struct SecondMomentSet {
    ComplexValue c11;
    ComplexValue c12;
    ComplexValue c21;
    ComplexValue c22;
    ComplexValue combined;
    bool c22_from_quadrature = false;
};

/// Prediction interval induced by the unknown theta in [0, 1].
struct ThetaInterval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double v, double slack = 0.0) const { return v >= lo - slack && v <= hi + slack; }
};

/// Ingredients of the limiting constant. c_eq222 is
/// C_E - 1 + 2 int_0^1 phi + 2 int_1^inf (phi - 1/(2 alpha)); c_theorem1 is
/// the same with C_E - 2. kn_limit is the value K_n - log n actually
/// converges to, C_E + 2 int_0^1 phi + 2 int_1^inf (phi - 1/(2 alpha)):
/// the factor (n - 3/2)/(n + 1/2) zeta(n + 1/2) in K_n tends to 1 and is
/// not part of c_eq222.
struct ConstantCBreakdown {
    double euler_const = 0.0;
    double integral_0_1 = 0.0;
    double integral_1_inf = 0.0;
    double c_eq222 = 0.0;
    double c_theorem1 = 0.0;
    double kn_limit = 0.0;
};

struct Affine {
    double slope = 0.0;
    double intercept = 0.0;
    double at(double x) const { return slope * x + intercept; }
};

/// x -> infinity limits for m > n + 1 at sigma = 1/2.
struct OffDiagonalLimits {
    double a22 = 0.0;  // E Z_{n2} conj Z_{m2}
    double a12 = 0.0;  // E Z_{n1} conj Z_{m2}
    double a21 = 0.0;  // E Z_{m1} conj Z_{n2}, real, equal to E Z_{n2} conj Z_{m1}
    ThetaInterval a11;  // E Z_{n1} conj Z_{m1}
};

/// Leading x-linear behaviour of the diagonal blocks for n > 2 at
/// sigma = 1/2: E|Z_{n2}|^2 = d22(x) exactly, E Z_{n1} conj Z_{n2} = d12(x)
/// + o(1), E|Z_{n1}|^2 = d11(x) + o(1).
struct DiagonalAsymptotics {
    Affine d22;
    Affine d12;
    Affine d11;
};

struct AsymptoticTerms {
    std::optional<OffDiagonalLimits> off_diagonal;
    std::optional<DiagonalAsymptotics> diagonal;
};

struct PhiValues {
    double phi = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
};

/// n B_k (k+1)^{-(n-1/2)}, D_k (k+1)^{n+1/2}, D'_k (k+1)^{n+1/2}.
struct ScaledBD {
    double b_scaled = 0.0;
    double d_scaled = 0.0;
    double dprime_scaled = 0.0;
};

struct CovariancePrediction {
    ThetaInterval interval;
    /// Smallest C_0 with max(|lo|, |hi|) <= C_0 max(1/n, 2^{-(m-n)}).
    double c0_required = 0.0;
};

/// E Z_n(x) = sum_{k<=x} k^{-(sigma+n)} - 2n/(n^2 - q^2) + x^{q-n}/(n - q).
double mean_Zn(const MomentQuery& q);

/// Closed form A + B x^{-n+q} + C x^{-d+2q} for E Z_{n2} conj Z_{m2}.
/// Throws SingularCaseError at d = 1, 2q = 1.
double cross_n2m2(const MomentQuery& q);

/// x^{2q} * double integral over [0,1]^2 of
/// u^{-sigma} v^{-sigma} exp(-|log(xv)| d - |log(v/u)| n), split along
/// u = v and v = 1/x. Valid for every admissible query.
double cross_n2m2_quadrature(const MomentQuery& q, std::stop_token stop = {});

/// Exact k-sum for E Z_{n1} conj Z_{m2}.
double cross_n1m2(const MomentQuery& q);

/// Exact k-sum for E Z_{m1} conj Z_{n2} (equal to E Z_{n2} conj Z_{m1}).
double cross_m1n2(const MomentQuery& q);

/// E Z_{n1} conj Z_{m1} = sum_{k,l<=x} (kl)^{-sigma} (min/max)^n l^{-d},
/// evaluated in O(x) with scaled suffix sums. Throws CostGuardError for
/// x > 1e8.
double cross_n1m1(const MomentQuery& q);

/// Assembles the four blocks. The singular d = 1, sigma = 1/2 case is
/// routed to quadrature when `quadrature_fallback` is set and throws
/// SingularCaseError otherwise.
SecondMomentSet second_moment(const MomentQuery& q, bool quadrature_fallback = false);

/// Large-x limits at sigma = 1/2. m > n + 1 fills off_diagonal; m == n
/// fills diagonal (requires n > 2); m == n + 1 throws DomainError.
AsymptoticTerms asym_terms(std::uint64_t n, std::uint64_t m);

/// phi, phi_1, phi_2 at alpha > 0.
PhiValues phi_funcs(double alpha);

/// phi(alpha) - 1/(2 alpha) = phi_1 + phi_2, evaluated directly.
double phi_minus_half_inverse(double alpha);

ConstantCBreakdown constant_C(std::stop_token stop = {});

/// K_n = (n - 3/2)/(n + 1/2) zeta(n + 1/2) + 2 sum_{k>=1} A_k D_k with
/// A_k = (n - 1/2) B_k, the first-order Euler-Maclaurin remainder of
/// sum_k k^{n-1/2}. Requires n >= 3.
double compute_Kn(std::uint64_t n, std::stop_token stop = {});

/// Requires n >= 3, k >= 1.
ScaledBD bk_dk_scaled(std::uint64_t n, std::uint64_t k);

/// a^s zeta(s, a) = sum_{h>=0} (1 + h/a)^{-s} for s > 1, a > 0.
double hurwitz_scaled(double s, double a);

/// E zeta(1/2 + i S_n) = zeta(n + 1/2) - 8n/(4n^2 - 1).
double mean_zeta(std::uint64_t n);

/// E|zeta(1/2 + i S_n) - E zeta(1/2 + i S_n)|^2
///   = K_n + 1/(n - 1/2) - mean_zeta(n)^2. Requires n >= 3.
double variance_zeta(std::uint64_t n);

/// c0 max(1/n, 2^{-(m-n)}); requires m > n + 1 and c0 > 0.
double cov_bound(std::uint64_t n, std::uint64_t m, double c0 = 5.0);

/// Interval for the covariance of zeta(1/2 + i S_n) and zeta(1/2 + i S_m),
/// m > n + 1, from the limits in asym_terms and the means.
CovariancePrediction predicted_cov_interval(std::uint64_t n, std::uint64_t m);

}  // namespace zetawalk
