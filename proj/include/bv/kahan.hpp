#pragma once

#include <cmath>

namespace bv {

// Neumaier-compensated accumulator.  Streaming sums here run over up to ~1e7
// terms and feed strict inequality checks, so plain += is not good enough.
class KahanSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value))
      comp_ += (sum_ - t) + value;
    else
      comp_ += (value - t) + sum_;
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

  void reset() {
    sum_ = 0.0;
    comp_ = 0.0;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace bv
