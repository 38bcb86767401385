#pragma once

// Batch evaluators for segment lengths and their derivatives over many
// angles at once. Used by the grid scans; the per-angle functions in
// geometry.hpp remain the reference.
//
// Each instruction-set variant is selectable explicitly so tests can check
// them against each other. `active_isa()` picks the widest variant the CPU
// supports; MUSCU_SIMD=scalar|avx2 overrides it.

#include <span>

#include "muscu/geometry.hpp"

namespace muscu::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa);
bool supported(Isa isa);
Isa active_isa();

/// Output spans; an empty span skips that quantity. Non-empty spans must
/// be at least as long as the input.
struct SegmentBatch {
  std::span<double> length;
  std::span<double> d1;
  std::span<double> d2;
};

void eval_segment(Isa isa, const SegmentCoeffs& k, std::span<const double> theta, SegmentBatch out);
void eval_segment(const SegmentCoeffs& k, std::span<const double> theta, SegmentBatch out);

/// Element-wise sine and cosine; exposed for equivalence tests.
void sincos(Isa isa, std::span<const double> x, std::span<double> s, std::span<double> c);

}  // namespace muscu::kernels
