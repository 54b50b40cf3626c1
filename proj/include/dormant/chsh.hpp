#pragma once

// CHSH evaluation with the admissible sign patterns restricted to those whose
// odd sign sits in the 3rd or 4th term.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dormant/qsim.hpp"
#include "dormant/states.hpp"

namespace dormant {

inline const double kTsirelson = 2.0 * std::sqrt(2.0);

struct CHSHSetting {
  Unitary1Q u;  // A side rotation
  Unitary1Q v;  // B side rotation
  Mat2 a0, a1, b0, b1;
};

/// Signs applied to (A0B0, A0B1, A1B0, A1B1).
using SignPattern = std::array<int, 4>;

/// Default: the four patterns with the odd sign in position 3 or 4, ordered
/// (+,+,-,+), (+,+,+,-), (-,-,+,-), (-,-,-,+). With `all` the eight patterns of the
/// textbook CHSH family (odd sign anywhere) are returned, the default four first.
std::vector<SignPattern> admissible_patterns(bool all = false);
bool is_admissible(const SignPattern& pattern);

CHSHSetting default_setting();
/// A0 = U sz U^dag, A1 = U sx U^dag, B0 = -V (sx + sz) V^dag / sqrt2, B1 = V (sx - sz) V^dag / sqrt2.
CHSHSetting rotated_setting(const Unitary1Q& u, const Unitary1Q& v);

struct CHSHResult {
  std::array<double, 4> correlators;  // <A0B0>, <A0B1>, <A1B0>, <A1B1>
  std::vector<SignPattern> patterns;
  std::vector<double> s_per_pattern;
  double s_max;
  SignPattern best_pattern;  // first pattern reaching s_max
};

/// <psi| A (x) B |psi> with A on pair.first, B on pair.second, identity elsewhere.
double expectation(const StateVector& state, QubitPair pair, const Mat2& a, const Mat2& b);

CHSHResult evaluate(const StateVector& state, QubitPair pair, const CHSHSetting& setting,
                    bool all_patterns = false);

struct SweepSummary {
  int trials;
  double sup_s_max;
  double sup_abs_correlator;
};

/// Evaluates `trials` random (U, V) settings. Trial t draws from an engine seeded
/// with (seed, t), so the result does not depend on evaluation order.
SweepSummary rotation_sweep(const StateVector& state, QubitPair pair, int trials,
                            std::uint64_t seed, bool all_patterns = false);

/// Engine for trial `trial` of a sweep seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t trial);

enum class EntanglementLevel { kType1, kType2, kType3, kOther };

std::string to_string(EntanglementLevel level);

EntanglementLevel classify(const StateVector& state, QubitPair pair);

}  // namespace dormant
