#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "ruelle/types.hpp"

namespace ruelle {

/// Worker count used by all internal parallel loops. Defaults to the value of
/// RUELLE_THREADS if set, otherwise 1.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Calls may run concurrently; each index runs
/// exactly once. Results must be written to per-index storage by the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(Complex x) {
    add_part(re_, cre_, x.real());
    add_part(im_, cim_, x.imag());
  }
  Complex value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

/// Sums term(i) for i in [0, n) in fixed-size blocks. Each block is summed in
/// index order and block sums are combined in index order, so the result does
/// not depend on the number of threads.
Complex ordered_sum(std::size_t n, const std::function<Complex(std::size_t)>& term,
                    double* abs_total = nullptr);

}  // namespace ruelle
