// Compiled with -mavx2 -mfma; only called after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cstddef>

#include "kernels_impl.hpp"

namespace muscu::kernels::detail {

namespace {

// pi/2 split into three 33-bit pieces; n * piece is exact for |n| < 2^20,
// so the reduction is accurate far beyond the angles used here.
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050630396597660e-11;
constexpr double kPio2Lo = 2.02226624879595063154e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

// Minimax coefficients on [-pi/4, pi/4].
constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;

constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;

// 1.5 * 2^52: adding it leaves round(n) in the low mantissa bits.
constexpr double kIntMagic = 6755399441055744.0;

inline __m256d poly(__m256d z, double c0, double c1, double c2, double c3, double c4, double c5) {
  __m256d p = _mm256_set1_pd(c5);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c4));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c3));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c2));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c1));
  return _mm256_fmadd_pd(p, z, _mm256_set1_pd(c0));
}

inline void sincos4(__m256d x, __m256d& sin_out, __m256d& cos_out) {
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2Lo), r);

  const __m256d z = _mm256_mul_pd(r, r);
  const __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(z, r), poly(z, kS1, kS2, kS3, kS4, kS5, kS6), r);
  const __m256d half_z = _mm256_mul_pd(z, _mm256_set1_pd(0.5));
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d w = _mm256_sub_pd(one, half_z);
  // Recover the bits lost in 1 - z/2 before adding the small tail.
  const __m256d w_err = _mm256_sub_pd(_mm256_sub_pd(one, w), half_z);
  const __m256d tail = _mm256_fmadd_pd(_mm256_mul_pd(z, z), poly(z, kC1, kC2, kC3, kC4, kC5, kC6), w_err);
  const __m256d c = _mm256_add_pd(w, tail);

  const __m256i q = _mm256_castpd_si256(_mm256_add_pd(n, _mm256_set1_pd(kIntMagic)));
  const __m256i one_i = _mm256_set1_epi64x(1);
  const __m256i two_i = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one_i), one_i));
  const __m256d sin_neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, two_i), two_i));
  const __m256i q1 = _mm256_add_epi64(q, one_i);
  const __m256d cos_neg = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q1, two_i), two_i));

  const __m256d sign = _mm256_set1_pd(-0.0);
  sin_out = _mm256_xor_pd(_mm256_blendv_pd(s, c, swap), _mm256_and_pd(sin_neg, sign));
  cos_out = _mm256_xor_pd(_mm256_blendv_pd(c, s, swap), _mm256_and_pd(cos_neg, sign));
}

struct SegmentConsts {
  __m256d alpha;
  __m256d base;      // a^2 + b^2 + c^2
  __m256d two_brho;  // 2 b rho
  __m256d half_brho;
  __m256d quad_a;    // b rho
  __m256d neg_quarter_a;
};

inline void segment4(const SegmentConsts& k, __m256d theta, __m256d& f, __m256d& d1, __m256d& d2) {
  const __m256d arg = _mm256_add_pd(_mm256_mul_pd(theta, _mm256_set1_pd(0.5)), k.alpha);
  __m256d s, c;
  sincos4(arg, s, c);
  f = _mm256_sqrt_pd(_mm256_fmadd_pd(k.two_brho, s, k.base));
  d1 = _mm256_div_pd(_mm256_mul_pd(k.half_brho, c), f);
  // A s^2 + B s + A
  const __m256d quad = _mm256_fmadd_pd(_mm256_fmadd_pd(k.quad_a, s, k.base), s, k.quad_a);
  const __m256d f3 = _mm256_mul_pd(_mm256_mul_pd(f, f), f);
  d2 = _mm256_div_pd(_mm256_mul_pd(k.neg_quarter_a, quad), f3);
}

// Unoptimized builds skip the compiler's automatic vzeroupper; without it
// every later SSE instruction in the process pays a transition penalty.
struct ClearUpperOnExit {
  ~ClearUpperOnExit() { _mm256_zeroupper(); }
};

}  // namespace

void sincos_avx2(const double* x, std::size_t n, double* s, double* c) {
  const ClearUpperOnExit clear;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vs, vc;
    sincos4(_mm256_loadu_pd(x + i), vs, vc);
    _mm256_storeu_pd(s + i, vs);
    _mm256_storeu_pd(c + i, vc);
  }
  if (i < n) {
    alignas(32) double in[4] = {0, 0, 0, 0};
    alignas(32) double os[4], oc[4];
    std::copy(x + i, x + n, in);
    __m256d vs, vc;
    sincos4(_mm256_load_pd(in), vs, vc);
    _mm256_store_pd(os, vs);
    _mm256_store_pd(oc, vc);
    std::copy(os, os + (n - i), s + i);
    std::copy(oc, oc + (n - i), c + i);
  }
}

void segment_avx2(const SegmentCoeffs& k, const double* theta, std::size_t n, double* length, double* d1,
                  double* d2) {
  const ClearUpperOnExit clear;
  const double brho = k.b * k.rho;
  const SegmentConsts kc{_mm256_set1_pd(k.alpha),
                         _mm256_set1_pd(k.a * k.a + k.b * k.b + k.c * k.c),
                         _mm256_set1_pd(2.0 * brho),
                         _mm256_set1_pd(0.5 * brho),
                         _mm256_set1_pd(brho),
                         _mm256_set1_pd(-0.25 * brho)};
  auto store_one = [](double* dst, std::size_t at, std::size_t count, __m256d v) {
    if (!dst)
      return;
    if (count == 4) {
      _mm256_storeu_pd(dst + at, v);
      return;
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, v);
    std::copy(buf, buf + count, dst + at);
  };
  auto store = [&](std::size_t at, std::size_t count, __m256d f, __m256d v1, __m256d v2) {
    store_one(length, at, count, f);
    store_one(d1, at, count, v1);
    store_one(d2, at, count, v2);
  };

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d f, v1, v2;
    segment4(kc, _mm256_loadu_pd(theta + i), f, v1, v2);
    store(i, 4, f, v1, v2);
  }
  if (i < n) {
    alignas(32) double in[4] = {0, 0, 0, 0};
    std::copy(theta + i, theta + n, in);
    __m256d f, v1, v2;
    segment4(kc, _mm256_load_pd(in), f, v1, v2);
    store(i, n - i, f, v1, v2);
  }
}

}  // namespace muscu::kernels::detail
