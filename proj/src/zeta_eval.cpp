#include "zetawalk/zeta_eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "zetawalk/errors.hpp"

namespace zetawalk {

namespace {

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

void require_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("sigma must be positive and finite, got " + std::to_string(sigma));
    }
}

void require_not_pole(double sigma, double t) {
    if (sigma == 1.0 && t == 0.0) throw PoleError();
}

// Euler-Maclaurin evaluation with main-sum length `terms`:
// zeta(s) = sum_{k<N} k^{-s} + N^{1-s}/(s-1) + N^{-s}/2
//           + sum_j B_{2j}/(2j)! s(s+1)...(s+2j-2) N^{-s-2j+1}.
std::complex<double> euler_maclaurin(std::complex<double> s, std::uint64_t terms) {
    CompensatedComplexSum main;
    for (std::uint64_t k = 1; k < terms; ++k) {
        const double log_k = std::log(static_cast<double>(k));
        main.add(dirichlet_term(log_k, std::exp(-s.real() * log_k), s.imag()));
    }
    const double big_n = static_cast<double>(terms);
    const std::complex<double> n_pow = std::exp(-s * std::log(big_n));  // N^{-s}
    std::complex<double> tail = n_pow * big_n / (s - 1.0) + 0.5 * n_pow;

    std::complex<double> rising = s;  // s(s+1)...(s+2j-2)
    std::complex<double> power = n_pow / big_n;  // N^{-s-2j+1}
    for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
        tail += kBernoulliOverFactorial[j] * rising * power;
        rising *= (s + static_cast<double>(2 * j + 1)) * (s + static_cast<double>(2 * j + 2));
        power /= big_n * big_n;
    }
    return main.value().to_std() + tail;
}

}  // namespace

void ZetaEvalConfig::validate() const {
    if (!(safety_constant > 1.0)) throw DomainError("safety_constant must exceed 1");
    if (x_min < 1) throw DomainError("x_min must be at least 1");
    if (!(t_cap > 0.0)) throw DomainError("t_cap must be positive");
    require_sigma(sigma);
}

ComplexValue dirichlet_term(double log_k, double weight, double t) {
    const double phase = std::fabs(t) * log_k;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    return {weight * c, t < 0.0 ? weight * s : -(weight * s)};
}

ComplexValue correction_term(double sigma, double t, double x) {
    // x^{1-sigma} e^{-i t log x} / ((1 - sigma) - i t)
    const double log_x = std::log(x);
    const double modulus = std::exp((1.0 - sigma) * log_x);
    const ComplexValue numerator = dirichlet_term(log_x, modulus, t);
    const double a = 1.0 - sigma;
    const double denom = a * a + t * t;
    // 1 / (a - i t) = (a + i t) / (a^2 + t^2)
    const ComplexValue inverse{a / denom, t / denom};
    return numerator * inverse;
}

ComplexValue dirichlet_sum(double sigma, double t, double x) {
    const auto terms = static_cast<std::uint64_t>(std::floor(x));
    CompensatedComplexSum acc;
    for (std::uint64_t k = 1; k <= terms; ++k) {
        const double log_k = std::log(static_cast<double>(k));
        acc.add(dirichlet_term(log_k, std::exp(-sigma * log_k), t));
    }
    return acc.value();
}

AuxiliaryParts auxiliary_parts(double sigma, double t, double x) {
    require_sigma(sigma);
    if (!(x >= 1.0)) throw DomainError("truncation x must be at least 1");
    require_not_pole(sigma, t);
    return {dirichlet_sum(sigma, t, x), correction_term(sigma, t, x)};
}

DirichletTable::DirichletTable(double sigma, std::uint64_t k_max) : sigma_(sigma) {
    require_sigma(sigma);
    log_k_.resize(k_max);
    weight_.resize(k_max);
    for (std::uint64_t k = 1; k <= k_max; ++k) {
        const double log_k = std::log(static_cast<double>(k));
        log_k_[k - 1] = log_k;
        weight_[k - 1] = std::exp(-sigma * log_k);
    }
}

ComplexValue DirichletTable::sum(double t, double x) const {
    const auto terms = static_cast<std::uint64_t>(std::floor(x));
    if (terms > log_k_.size()) throw RangeError("DirichletTable too short for requested x");
    CompensatedComplexSum acc;
    for (std::uint64_t i = 0; i < terms; ++i) acc.add(dirichlet_term(log_k_[i], weight_[i], t));
    return acc.value();
}

std::vector<ComplexValue> DirichletTable::prefix_sums(double t, const std::vector<double>& cuts) const {
    std::vector<ComplexValue> out;
    out.reserve(cuts.size());
    CompensatedComplexSum acc;
    std::uint64_t done = 0;
    for (double cut : cuts) {
        const auto terms = static_cast<std::uint64_t>(std::floor(cut));
        if (terms > log_k_.size()) throw RangeError("DirichletTable too short for requested x");
        if (terms < done) throw DomainError("prefix cuts must be ascending");
        for (; done < terms; ++done) acc.add(dirichlet_term(log_k_[done], weight_[done], t));
        out.push_back(acc.value());
    }
    return out;
}

ComplexValue truncated_zeta(double sigma, double t, std::uint64_t x) {
    if (x == 0) throw DomainError("truncation x must be a positive integer");
    return auxiliary_parts(sigma, t, static_cast<double>(x)).value();
}

std::uint64_t critical_truncation(double t, const ZetaEvalConfig& cfg) {
    const double needed = std::ceil(cfg.safety_constant * std::fabs(t) / (2.0 * std::numbers::pi));
    return std::max<std::uint64_t>(cfg.x_min, static_cast<std::uint64_t>(needed));
}

CriticalValue zeta_critical(double t, const ZetaEvalConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(t) || std::fabs(t) > cfg.t_cap) throw CapExceededError(std::fabs(t), cfg.t_cap);
    const std::uint64_t x = critical_truncation(t, cfg);
    return {truncated_zeta(cfg.sigma, t, x), x};
}

ComplexValue zeta_em_oracle(double sigma, double t) {
    require_sigma(sigma);
    require_not_pole(sigma, t);
    if (!(std::fabs(t) <= 1e6)) throw RangeError("zeta_em_oracle supports |t| <= 1e6");
    const auto terms = std::max<std::uint64_t>(2 * static_cast<std::uint64_t>(std::ceil(std::fabs(t))), 64);
    return euler_maclaurin({sigma, t}, terms);
}

double zeta_real(double r) {
    if (!(r > 1.0) || std::isnan(r)) throw DomainError("zeta_real requires r > 1");
    if (r >= 40.0) {
        // 2^{-r} <= 1e-12; the series converges geometrically.
        CompensatedSum acc(1.0);
        for (int k = 2;; ++k) {
            const double term = std::exp(-r * std::log(static_cast<double>(k)));
            acc.add(term);
            if (term < 1e-18) break;
        }
        return acc.value();
    }
    return euler_maclaurin({r, 0.0}, 64).real();
}

CapExceededError::CapExceededError(double abs_t, double cap)
    : DomainError("|t| = " + std::to_string(abs_t) + " exceeds t_cap = " + std::to_string(cap)),
      abs_t_(abs_t),
      cap_(cap) {}

}  // namespace zetawalk
