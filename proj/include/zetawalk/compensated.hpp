#pragma once

#include <cmath>

#include "zetawalk/complex_value.hpp"

#ifdef __FAST_MATH__
#error "fast math would cancel the compensation terms"
#endif

namespace zetawalk {

/// Neumaier (improved Kahan-Babuska) accumulator. The rounding error of
/// every addition is captured with an error-free transform and folded back
/// in by value().
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;
    explicit constexpr CompensatedSum(double init) : sum_(init) {}

    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }

    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Component-wise compensated accumulation of complex terms. Negating every
/// imaginary input negates the imaginary result exactly.
class CompensatedComplexSum {
public:
    void add(const ComplexValue& z) {
        re_.add(z.re);
        im_.add(z.im);
    }
    void add(double re, double im) {
        re_.add(re);
        im_.add(im);
    }
    CompensatedComplexSum& operator+=(const ComplexValue& z) {
        add(z);
        return *this;
    }
    ComplexValue value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

}  // namespace zetawalk
