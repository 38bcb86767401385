#include <cmath>

#include "kernels_impl.hpp"

namespace muscu::kernels::detail {

void segment_scalar(const SegmentCoeffs& k, const double* theta, std::size_t n, double* length,
                    double* d1, double* d2) {
  for (std::size_t i = 0; i < n; ++i) {
    if (length)
      length[i] = segment_length(k, theta[i]);
    if (d1)
      d1[i] = segment_length_d1(k, theta[i]);
    if (d2)
      d2[i] = segment_length_d2(k, theta[i]);
  }
}

void sincos_scalar(const double* x, std::size_t n, double* s, double* c) {
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

}  // namespace muscu::kernels::detail
