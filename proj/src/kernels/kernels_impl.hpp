#pragma once

#include <cstddef>

#include "muscu/geometry.hpp"

namespace muscu::kernels::detail {

// Raw-pointer entry points behind the span API. Null outputs are skipped.

void segment_scalar(const SegmentCoeffs& k, const double* theta, std::size_t n, double* length,
                    double* d1, double* d2);
void sincos_scalar(const double* x, std::size_t n, double* s, double* c);

#if MUSCU_HAVE_AVX2
void segment_avx2(const SegmentCoeffs& k, const double* theta, std::size_t n, double* length, double* d1,
                  double* d2);
void sincos_avx2(const double* x, std::size_t n, double* s, double* c);
#endif

}  // namespace muscu::kernels::detail
