#pragma once

#include <cmath>
#include <complex>

#include "lclock/constants.hpp"

namespace lclock {

// Neumaier-compensated accumulator. Unlike plain Kahan this also keeps the
// carry correct when the incoming term is larger than the running sum.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  void add(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      carry_ += (sum_ - t) + term;
    } else {
      carry_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double term) {
    add(term);
    return *this;
  }

  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> term) {
    re_.add(term.real());
    im_.add(term.imag());
  }

  CompensatedComplexSum& operator+=(std::complex<double> term) {
    add(term);
    return *this;
  }

  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// Exact product a*b = hi + lo (Dekker/FMA two-product).
inline void two_product(double a, double b, double& hi, double& lo) {
  hi = a * b;
  lo = std::fma(a, b, -hi);
}

// Reduces a*b + extra modulo 2*pi using double-double arithmetic, so that a
// phase of order 1e10 rad still carries an absolute residual error far below
// 1e-10 rad. Returns a value in (-2*pi, 2*pi).
inline double reduce_phase_2pi(double a, double b, double extra = 0.0) {
  double hi, lo;
  two_product(a, b, hi, lo);
  const double k = std::nearbyint(hi / kTwoPiHi);
  // k * 2*pi in double-double; k is exactly representable for |k| < 2^53.
  double khi, klo;
  two_product(k, kTwoPiHi, khi, klo);
  const double r = ((hi - khi) - klo) + (lo - k * kTwoPiLo) + extra;
  return std::remainder(r, kTwoPiHi);
}

}  // namespace lclock
