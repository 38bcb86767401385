#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "kernels_impl.hpp"
#include "muscu/kernels.hpp"

namespace muscu::kernels {

namespace {

void check_sizes(std::size_t n, SegmentBatch out) {
  for (auto span : {out.length, out.d1, out.d2})
    if (!span.empty() && span.size() < n)
      throw std::invalid_argument("eval_segment: output span shorter than input");
}

Isa detect() {
  if (const char* env = std::getenv("MUSCU_SIMD")) {
    const std::string_view want(env);
    if (want == "scalar")
      return Isa::Scalar;
    if (want == "avx2" && supported(Isa::Avx2))
      return Isa::Avx2;
  }
  return supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "scalar";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if MUSCU_HAVE_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

void eval_segment(Isa isa, const SegmentCoeffs& k, std::span<const double> theta, SegmentBatch out) {
  check_sizes(theta.size(), out);
  auto ptr = [](std::span<double> s) { return s.empty() ? nullptr : s.data(); };
  switch (isa) {
#if MUSCU_HAVE_AVX2
    case Isa::Avx2:
      if (!supported(Isa::Avx2))
        throw std::runtime_error("eval_segment: AVX2/FMA not supported on this CPU");
      detail::segment_avx2(k, theta.data(), theta.size(), ptr(out.length), ptr(out.d1), ptr(out.d2));
      return;
#endif
    default:
      if (isa != Isa::Scalar)
        throw std::runtime_error("eval_segment: variant not built");
      detail::segment_scalar(k, theta.data(), theta.size(), ptr(out.length), ptr(out.d1), ptr(out.d2));
      return;
  }
}

void eval_segment(const SegmentCoeffs& k, std::span<const double> theta, SegmentBatch out) {
  eval_segment(active_isa(), k, theta, out);
}

void sincos(Isa isa, std::span<const double> x, std::span<double> s, std::span<double> c) {
  if (s.size() < x.size() || c.size() < x.size())
    throw std::invalid_argument("sincos: output span shorter than input");
  switch (isa) {
#if MUSCU_HAVE_AVX2
    case Isa::Avx2:
      if (!supported(Isa::Avx2))
        throw std::runtime_error("sincos: AVX2/FMA not supported on this CPU");
      detail::sincos_avx2(x.data(), x.size(), s.data(), c.data());
      return;
#endif
    default:
      if (isa != Isa::Scalar)
        throw std::runtime_error("sincos: variant not built");
      detail::sincos_scalar(x.data(), x.size(), s.data(), c.data());
      return;
  }
}

}  // namespace muscu::kernels
