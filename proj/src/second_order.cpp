#include "zetawalk/second_order.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "zetawalk/compensated.hpp"
#include "zetawalk/errors.hpp"
#include "zetawalk/quadrature.hpp"
#include "zetawalk/zeta_eval.hpp"

namespace zetawalk {

namespace {

constexpr double kCostGuardX = 1e8;

// B_{2j} / (2j)! for j = 1..8.
constexpr std::array<double, 8> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
};

double as_real(std::uint64_t v) { return static_cast<double>(v); }

std::uint64_t terms_below(double x) { return static_cast<std::uint64_t>(std::floor(x)); }

void require_kn_index(std::uint64_t n) {
    if (n < 3) throw DomainError("K_n requires n >= 3, got n = " + std::to_string(n));
}

void require_off_diagonal(std::uint64_t n, std::uint64_t m) {
    if (n < 1 || m <= n + 1) throw DomainError("requires m > n + 1");
}

// a^s zeta(s, a) via Euler-Maclaurin at b >= a, the power ratio taken in
// log space: (a/b)^s [b/(s-1) + 1/2 + sum_j c_j (s)_{2j-1} b^{1-2j}].
double hurwitz_em(double s, double a, double b) {
    double bracket = b / (s - 1.0) + 0.5;
    double rising_ratio = s / b;  // (s)_{2j-1} / b^{2j-1}
    for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
        bracket += kBernoulliOverFactorial[j] * rising_ratio;
        const double next = static_cast<double>(2 * j + 1);
        rising_ratio *= (s + next) * (s + next + 1.0) / (b * b);
    }
    return std::exp(-s * std::log(b / a)) * bracket;
}

// (k+1)^{-(n-3/2)} B_k = int_0^1 ((k+t)/(k+1))^{n-3/2} (t - 1/2) dt.
double scaled_b_integral(double p, double k, std::stop_token stop) {
    const double inv = 1.0 / (k + 1.0);
    auto f = [&](double t) { return std::exp(p * std::log1p((t - 1.0) * inv)) * (t - 0.5); };
    quad::Options opts;
    opts.abs_tol = 1e-300;
    opts.rel_tol = 1e-13;
    opts.stop = stop;
    // For p >> k the integrand is a spike of width (k+1)/p at t = 1; below
    // 1 - 50 (k+1)/p it is under e^{-50} of the peak. Panels shrink
    // geometrically towards the spike so no panel straddles it blind.
    const double width = 50.0 * (k + 1.0) / std::max(p, 1.0);
    if (width >= 1.0) return quad::integrate(f, 0.0, 1.0, opts).value;
    CompensatedSum sum;
    double hi = 1.0;
    double piece = width / 64.0;
    double lo = 1.0 - piece;
    while (true) {
        sum.add(quad::integrate(f, lo, hi, opts).value);
        if (lo <= 1.0 - width) break;
        hi = lo;
        piece *= 2.0;
        lo = std::max(1.0 - width, hi - piece);
    }
    return sum.value();
}

// (u+1) * (u+1)^{-(n-3/2)} B_u as a power series in c = 1/(u+1); used for
// u + 1 >= 8 p where the series converges geometrically.
double scaled_b_series(double p, double u) {
    const double c = 1.0 / (u + 1.0);
    double binom = p;  // C(p, j)
    double cpow = 1.0;  // c^{j-1}
    double sum = 0.0;
    for (int j = 1; j < 400; ++j) {
        const double jd = j;
        const double term = ((j % 2) ? 1.0 : -1.0) * binom * cpow * jd / (2.0 * (jd + 1.0) * (jd + 2.0));
        sum += term;
        if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
        binom *= (p - jd) / (jd + 1.0);
        cpow *= c;
        if (binom == 0.0) break;
    }
    return sum;
}

quad::Options tight(std::stop_token stop, double rel = 1e-13) {
    quad::Options opts;
    opts.abs_tol = 1e-300;
    opts.rel_tol = rel;
    opts.max_intervals = 20000;
    opts.stop = stop;
    return opts;
}

}  // namespace

void MomentQuery::validate() const {
    if (n < 1) throw DomainError("n must be a positive integer");
    if (m < n) throw DomainError("requires m >= n");
    if (!(sigma >= 0.5 && sigma < 1.0)) throw DomainError("sigma must lie in [1/2, 1)");
    if (!(x >= 1.0) || !std::isfinite(x)) throw DomainError("x must be finite and at least 1");
}

double mean_Zn(const MomentQuery& q) {
    q.validate();
    const double n = as_real(q.n);
    const double c = 1.0 - q.sigma;
    CompensatedSum sum;
    const std::uint64_t terms = terms_below(q.x);
    for (std::uint64_t k = 1; k <= terms; ++k) {
        const double term = std::exp(-(q.sigma + n) * std::log(as_real(k)));
        sum.add(term);
        if (term < 1e-20 * sum.value()) break;
    }
    sum.add(-2.0 * n / (n * n - c * c));
    sum.add(std::exp((c - n) * std::log(q.x)) / (n - c));
    return sum.value();
}

double cross_n2m2(const MomentQuery& q) {
    q.validate();
    const double n = as_real(q.n);
    const double m = as_real(q.m);
    const double d = m - n;
    const double c = 1.0 - q.sigma;
    if (q.m == q.n + 1 && 2.0 * c == 1.0) {
        throw SingularCaseError(
            "closed form for E Z_n2 conj Z_m2 is singular at m = n + 1, sigma = 1/2; use cross_n2m2_quadrature");
    }
    const double a = 4.0 * n * d / ((d * d - 4.0 * c * c) * (n * n - c * c));
    const double b = 2.0 * d / ((2.0 * n - m + c) * (m + c) * (n - c));
    const double cc = (3.0 * n - m + 2.0 * c) / ((2.0 * n - m + c) * (2.0 * c - d) * (n + c));
    const double log_x = std::log(q.x);
    return a + b * std::exp((c - n) * log_x) + cc * std::exp((2.0 * c - d) * log_x);
}

double cross_n2m2_quadrature(const MomentQuery& q, std::stop_token stop) {
    q.validate();
    const double n = as_real(q.n);
    const double d = as_real(q.m - q.n);
    const double sigma = q.sigma;
    const double c = 1.0 - sigma;
    const double r = 1.0 / c;
    const double log_x = std::log(q.x);

    // Inner integral over u in [0, 1] for fixed v, split at u = v.
    // u <= v: u = v y^r turns u^{-sigma} du into r v^c dy.
    // u >= v: u = v^{1-y} turns the kink-free remainder into a smooth
    // exponential in y.
    auto inner = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double low = quad::integrate([&](double y) { return std::exp(r * n * std::log(y)); }, 0.0, 1.0,
                                           tight(stop))
                               .value;
        const double log_v = std::log(v);
        const double high =
            quad::integrate([&](double y) { return std::exp(c * (1.0 - y) * log_v + n * y * log_v); }, 0.0, 1.0,
                            tight(stop))
                .value;
        return r * std::exp(c * log_v) * low - log_v * high;
    };

    // v in [1/x, 1]: v = x^{z-1}.
    auto upper = [&](double z) {
        const double log_v = (z - 1.0) * log_x;
        const double v = std::exp(log_v);
        return std::exp(-sigma * log_v - z * d * log_x) * inner(v) * v * log_x;
    };
    // v in [0, 1/x]: v = z^r / x, which absorbs v^{-sigma}.
    auto lower = [&](double z) {
        if (z <= 0.0) return 0.0;
        const double log_z = std::log(z);
        const double v = std::exp(r * log_z - log_x);
        return std::exp((sigma - 1.0) * log_x + r * d * log_z) * r * inner(v);
    };

    const double hi = log_x > 0.0 ? quad::integrate(upper, 0.0, 1.0, tight(stop, 1e-12)).value : 0.0;
    const double lo = quad::integrate(lower, 0.0, 1.0, tight(stop, 1e-12)).value;
    return std::exp(2.0 * c * log_x) * (lo + hi);
}

double cross_n1m2(const MomentQuery& q) {
    q.validate();
    const double n = as_real(q.n);
    const double m = as_real(q.m);
    const double d = m - n;
    const double sigma = q.sigma;
    const double c = 1.0 - sigma;
    const double c1 = -2.0 * d / ((m + c) * (2.0 * n - m + c));
    const double c2 = 2.0 * n / ((m - c) * (2.0 * n - m + c));
    const double c3 = 1.0 / (m - c);
    const double log_x = std::log(q.x);
    CompensatedSum sum;
    const std::uint64_t terms = terms_below(q.x);
    for (std::uint64_t k = 1; k <= terms; ++k) {
        const double log_k = std::log(as_real(k));
        sum.add(c1 * std::exp(-(n + sigma) * log_k));
        sum.add(c2 * std::exp((1.0 - d - 2.0 * sigma) * log_k));
        sum.add(-c3 * std::exp((n - sigma) * log_k + (c - m) * log_x));
    }
    return sum.value();
}

double cross_m1n2(const MomentQuery& q) {
    q.validate();
    const double n = as_real(q.n);
    const double m = as_real(q.m);
    const double d = m - n;
    const double sigma = q.sigma;
    const double c = 1.0 - sigma;
    const double c1 = 2.0 * n / (n * n - c * c);
    const double c2 = 1.0 / (n - c);
    const double log_x = std::log(q.x);
    CompensatedSum sum;
    const std::uint64_t terms = terms_below(q.x);
    for (std::uint64_t k = 1; k <= terms; ++k) {
        const double log_k = std::log(as_real(k));
        sum.add(c1 * std::exp((1.0 - d - 2.0 * sigma) * log_k));
        sum.add(-c2 * std::exp((2.0 * n - m - sigma) * log_k + (c - n) * log_x));
    }
    return sum.value();
}

double cross_n1m1(const MomentQuery& q) {
    q.validate();
    if (q.x > kCostGuardX) throw CostGuardError("cross_n1m1 is limited to x <= 1e8");
    const double n = as_real(q.n);
    const double m = as_real(q.m);
    const double d = m - n;
    const double sigma = q.sigma;
    const std::uint64_t terms = terms_below(q.x);

    // With U_p(k) = sum_{l=k+1}^{X} ((k+1)/l)^p, the inner suffix sum is
    // (k+1)^{-p} U_p(k) and U_p(k) = 1 + ((k+1)/(k+2))^p U_p(k+1).
    const double p1 = m + sigma;
    const double p2 = n + sigma;
    double u1 = 0.0;
    double u2 = 0.0;
    CompensatedSum total;
    for (std::uint64_t k = terms; k >= 1; --k) {
        const double kd = as_real(k);
        const double log_k = std::log(kd);
        if (k < terms) {
            const double shrink = std::log1p(-1.0 / (kd + 2.0));
            u1 = 1.0 + std::exp(p1 * shrink) * u1;
            u2 = 1.0 + std::exp(p2 * shrink) * u2;
            const double log_k1 = std::log1p(kd);
            total.add(std::exp((n - sigma) * log_k - p1 * log_k1) * u1);
            total.add(std::exp((2.0 * n - m - sigma) * log_k - p2 * log_k1) * u2);
        }
        total.add(std::exp(-(d + 2.0 * sigma) * log_k));
    }
    return total.value();
}

SecondMomentSet second_moment(const MomentQuery& q, bool quadrature_fallback) {
    q.validate();
    SecondMomentSet out;
    out.c11 = {cross_n1m1(q), 0.0};
    out.c12 = {cross_n1m2(q), 0.0};
    out.c21 = {cross_m1n2(q), 0.0};
    try {
        out.c22 = {cross_n2m2(q), 0.0};
    } catch (const SingularCaseError&) {
        if (!quadrature_fallback) throw;
        out.c22 = {cross_n2m2_quadrature(q), 0.0};
        out.c22_from_quadrature = true;
    }
    out.combined = out.c11 - out.c12 - out.c21 + out.c22;
    return out;
}

AsymptoticTerms asym_terms(std::uint64_t n, std::uint64_t m) {
    if (n < 1 || m < n) throw DomainError("asym_terms requires 1 <= n <= m");
    if (m == n + 1) throw DomainError("asym_terms has no limits for m = n + 1");
    const double nd = as_real(n);
    AsymptoticTerms out;
    if (m == n) {
        require_kn_index(n);
        const double slope = 2.0 / (nd + 0.5);
        out.diagonal = DiagonalAsymptotics{
            {slope, 0.0},
            {slope, -1.0 / (2.0 * nd - 1.0)},
            {slope, compute_Kn(n)},
        };
        return out;
    }
    const double md = as_real(m);
    const double d = md - nd;
    const double zeta_d = zeta_real(d);
    const double zeta_d1 = zeta_real(d + 1.0);
    OffDiagonalLimits lim;
    lim.a22 = 4.0 * nd * d / ((d * d - 1.0) * (nd * nd - 0.25));
    lim.a12 = -2.0 * d * zeta_real(nd + 0.5) / ((md + 0.5) * (2.0 * nd - md + 0.5)) +
              2.0 * nd * zeta_d / ((md - 0.5) * (2.0 * nd - md + 0.5));
    lim.a21 = 2.0 * nd * zeta_d / (nd * nd - 0.25);
    lim.a11 = {zeta_d1, zeta_d1 + (1.0 / (md - 0.5) + 1.0 / (nd - 0.5)) * zeta_d};
    out.off_diagonal = lim;
    return out;
}

PhiValues phi_funcs(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("phi_funcs requires finite alpha > 0");
    PhiValues out;
    const double e = std::exp(-alpha);
    if (alpha <= 1.0) {
        // Numerator alpha e^alpha - 2 e^alpha + alpha + 2 = sum_{k>=3} (k-2) alpha^k / k!,
        // taken with alpha^3 factored out against 2 alpha^2 (e^alpha - 1).
        double series = 0.0;
        double power_over_fact = 1.0 / 6.0;  // alpha^{k-3} / k!
        for (int k = 3; k < 60; ++k) {
            const double term = (k - 2) * power_over_fact;
            series += term;
            if (term < 1e-18 * series) break;
            power_over_fact *= alpha / (k + 1);
        }
        out.phi = series / (2.0 * (std::expm1(alpha) / alpha));
    } else {
        out.phi = (alpha - 2.0 + (alpha + 2.0) * e) / (-2.0 * alpha * alpha * std::expm1(-alpha));
    }
    out.phi1 = e * out.phi;
    out.phi2 = (2.0 * std::expm1(-alpha) + alpha * e) / (2.0 * alpha * alpha);
    return out;
}

double phi_minus_half_inverse(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("requires finite alpha > 0");
    // (2 + 2 alpha - 2 e^alpha) / (2 alpha^2 (e^alpha - 1))
    //   = ((1 + alpha) e^{-alpha} - 1) / (alpha^2 (1 - e^{-alpha})).
    return ((1.0 + alpha) * std::exp(-alpha) - 1.0) / (alpha * alpha * -std::expm1(-alpha));
}

ConstantCBreakdown constant_C(std::stop_token stop) {
    constexpr double cut = 200.0;
    quad::Options opts;
    opts.abs_tol = 1e-14;
    opts.rel_tol = 1e-13;
    opts.stop = stop;
    ConstantCBreakdown out;
    out.euler_const = std::numbers::egamma;
    out.integral_0_1 = quad::integrate([](double a) { return phi_funcs(a).phi; }, 0.0, 1.0, opts).value;
    // Beyond alpha = 200 the integrand is -1/alpha^2 up to O(e^{-200}).
    out.integral_1_inf = quad::integrate(phi_minus_half_inverse, 1.0, cut, opts).value - 1.0 / cut;
    out.c_eq222 = out.euler_const - 1.0 + 2.0 * out.integral_0_1 + 2.0 * out.integral_1_inf;
    out.c_theorem1 = out.c_eq222 - 1.0;
    out.kn_limit = out.euler_const + 2.0 * out.integral_0_1 + 2.0 * out.integral_1_inf;
    return out;
}

double hurwitz_scaled(double s, double a) {
    if (!(s > 1.0) || !(a > 0.0)) throw DomainError("hurwitz_scaled requires s > 1, a > 0");
    const double shift = std::max(0.0, std::ceil(s + 32.0 - a));
    CompensatedSum sum;
    for (double h = 0.0; h < shift; h += 1.0) {
        const double term = std::exp(-s * std::log1p(h / a));
        sum.add(term);
        // The rest of the direct part is bounded by term * (1 + (a + h)/(s - 1)).
        if (term * (1.0 + (a + h) / (s - 1.0)) < 1e-18 * sum.value()) return sum.value();
    }
    sum.add(hurwitz_em(s, a, a + shift));
    return sum.value();
}

double compute_Kn(std::uint64_t n, std::stop_token stop) {
    require_kn_index(n);
    const double nd = as_real(n);
    const double p = nd - 1.5;
    const double s = nd + 0.5;
    const double coef = nd - 0.5;
    const std::uint64_t cutoff = std::max<std::uint64_t>(8 * n, 2000);

    // Direct part, k = cutoff down to 1. With d_k = D_k (k+1)^s the
    // summand A_k D_k is coef * I_k * d_k / (k+1)^2, I_k the scaled B_k.
    CompensatedSum direct;
    double d = hurwitz_scaled(s, as_real(cutoff) + 1.0);
    for (std::uint64_t k = cutoff; k >= 1; --k) {
        if ((k & 1023) == 0 && stop.stop_requested()) throw Cancelled();
        const double kd = as_real(k);
        const double k1 = kd + 1.0;
        direct.add(coef * scaled_b_integral(p, kd, stop) * d / (k1 * k1));
        d = d * std::exp(s * std::log(kd / k1)) + 1.0;
    }

    // Tail sum_{k > cutoff} h(k) ~ int_{cutoff+1/2}^inf h(u) du, midpoint
    // error O(h'') ~ cutoff^{-4}. With u + 1 = (cutoff + 3/2)/w the
    // integrand is coef * J(u) * d(u)/(u+1) / (cutoff + 3/2), smooth in w.
    const double base = as_real(cutoff) + 1.5;
    auto tail_integrand = [&](double w) {
        const double u1 = base / w;
        const double j = scaled_b_series(p, u1 - 1.0);
        const double e = hurwitz_em(s, u1, u1) / u1;
        return coef * j * e / base;
    };
    quad::Options opts;
    opts.abs_tol = 1e-16;
    opts.rel_tol = 1e-13;
    opts.stop = stop;
    const double tail = quad::integrate(tail_integrand, 0.0, 1.0, opts).value;

    CompensatedSum total((p / s) * zeta_real(s));
    total.add(2.0 * direct.value());
    total.add(2.0 * tail);
    return total.value();
}

ScaledBD bk_dk_scaled(std::uint64_t n, std::uint64_t k) {
    require_kn_index(n);
    if (k < 1) throw DomainError("bk_dk_scaled requires k >= 1");
    const double nd = as_real(n);
    const double kd = as_real(k);
    ScaledBD out;
    out.b_scaled = nd / (kd + 1.0) * scaled_b_integral(nd - 1.5, kd, {});
    out.d_scaled = hurwitz_scaled(nd + 0.5, kd + 1.0);
    out.dprime_scaled = out.d_scaled - 1.0;
    return out;
}

double mean_zeta(std::uint64_t n) {
    if (n < 1) throw DomainError("mean_zeta requires n >= 1");
    const double nd = as_real(n);
    return zeta_real(nd + 0.5) - 8.0 * nd / (4.0 * nd * nd - 1.0);
}

double variance_zeta(std::uint64_t n) {
    require_kn_index(n);
    const double mean = mean_zeta(n);
    return compute_Kn(n) + 1.0 / (as_real(n) - 0.5) - mean * mean;
}

double cov_bound(std::uint64_t n, std::uint64_t m, double c0) {
    require_off_diagonal(n, m);
    if (!(c0 > 0.0)) throw DomainError("cov_bound requires c0 > 0");
    return c0 * std::max(1.0 / as_real(n), std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(m - n, 2000))));
}

CovariancePrediction predicted_cov_interval(std::uint64_t n, std::uint64_t m) {
    require_off_diagonal(n, m);
    const OffDiagonalLimits lim = *asym_terms(n, m).off_diagonal;
    const double rest = -lim.a12 - lim.a21 + lim.a22 - mean_zeta(n) * mean_zeta(m);
    CovariancePrediction out;
    out.interval = {lim.a11.lo + rest, lim.a11.hi + rest};
    const double scale = cov_bound(n, m, 1.0);
    out.c0_required = std::max(std::fabs(out.interval.lo), std::fabs(out.interval.hi)) / scale;
    return out;
}

}  // namespace zetawalk
