#pragma once

#include <cmath>
#include <complex>

namespace zetawalk {

/// A pair of finite doubles. Every public routine returning a zeta value,
/// a Z_n(x) value or a moment uses this type.
struct ComplexValue {
    double re = 0.0;
    double im = 0.0;

    constexpr ComplexValue() = default;
    constexpr ComplexValue(double r, double i = 0.0) : re(r), im(i) {}
    ComplexValue(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}

    std::complex<double> to_std() const { return {re, im}; }
    constexpr ComplexValue conj() const { return {re, -im}; }
    double abs() const { return std::hypot(re, im); }
    constexpr double norm() const { return re * re + im * im; }
    bool finite() const { return std::isfinite(re) && std::isfinite(im); }

    constexpr ComplexValue operator+(const ComplexValue& o) const { return {re + o.re, im + o.im}; }
    constexpr ComplexValue operator-(const ComplexValue& o) const { return {re - o.re, im - o.im}; }
    constexpr ComplexValue operator*(const ComplexValue& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    constexpr ComplexValue operator*(double s) const { return {re * s, im * s}; }
    constexpr bool operator==(const ComplexValue&) const = default;
};

/// a * conj(b)
constexpr ComplexValue mul_conj(const ComplexValue& a, const ComplexValue& b) {
    return {a.re * b.re + a.im * b.im, a.im * b.re - a.re * b.im};
}

}  // namespace zetawalk
