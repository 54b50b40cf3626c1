#include "dormant/chsh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dormant/analysis.hpp"
#include "dormant/error.hpp"

namespace dormant {

namespace {

constexpr double kLevelTol = 1e-9;

const Mat2 kSigmaX{0.0, 1.0, 1.0, 0.0};
const Mat2 kSigmaZ{1.0, 0.0, 0.0, -1.0};

Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

Mat2 adjoint(const Mat2& x) {
  return {std::conj(x[0]), std::conj(x[2]), std::conj(x[1]), std::conj(x[3])};
}

Mat2 conjugate(const Unitary1Q& u, const Mat2& m) {
  const Mat2 um = u.matrix();
  return mul(mul(um, m), adjoint(um));
}

Mat2 combine(double s, const Mat2& x, double t, const Mat2& y) {
  return {s * x[0] + t * y[0], s * x[1] + t * y[1], s * x[2] + t * y[2], s * x[3] + t * y[3]};
}

}  // namespace

std::vector<SignPattern> admissible_patterns(bool all) {
  std::vector<SignPattern> out{{+1, +1, -1, +1}, {+1, +1, +1, -1}, {-1, -1, +1, -1},
                               {-1, -1, -1, +1}};
  if (all) {
    out.insert(out.end(), {{-1, +1, +1, +1}, {+1, -1, +1, +1}, {+1, -1, -1, -1},
                           {-1, +1, -1, -1}});
  }
  return out;
}

bool is_admissible(const SignPattern& p) {
  for (int s : p) {
    if (s != 1 && s != -1) return false;
  }
  // Odd sign in position 3 or 4: the first two agree and exactly one of the last two differs.
  return p[0] == p[1] && ((p[2] != p[0]) != (p[3] != p[0]));
}

CHSHSetting rotated_setting(const Unitary1Q& u, const Unitary1Q& v) {
  const double h = (1.0 / std::numbers::sqrt2);
  return {u,
          v,
          conjugate(u, kSigmaZ),
          conjugate(u, kSigmaX),
          conjugate(v, combine(-h, kSigmaX, -h, kSigmaZ)),
          conjugate(v, combine(h, kSigmaX, -h, kSigmaZ))};
}

CHSHSetting default_setting() {
  return rotated_setting(Unitary1Q::identity(), Unitary1Q::identity());
}

double expectation(const StateVector& state, QubitPair pair, const Mat2& a, const Mat2& b) {
  if (pair.first == pair.second) throw InputError("expectation: pair must be distinct");
  // A (x) B is not unitary in general; operate on the raw amplitudes.
  const int n = state.n_qubits();
  const std::size_t ma = qubit_mask(n, pair.first);
  const std::size_t mb = qubit_mask(n, pair.second);
  if (pair.first < 1 || pair.first > n || pair.second < 1 || pair.second > n) {
    throw InputError("expectation: qubit out of range");
  }
  Complex total{};
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const int ia = (i & ma) ? 1 : 0;
    const int ib = (i & mb) ? 1 : 0;
    const std::size_t base = i & ~(ma | mb);
    // (A (x) B psi)[i] = sum_{ja, jb} A[ia][ja] B[ib][jb] psi[base | ja | jb]
    Complex row{};
    for (int ja = 0; ja < 2; ++ja) {
      for (int jb = 0; jb < 2; ++jb) {
        const std::size_t j = base | (ja ? ma : 0) | (jb ? mb : 0);
        row += a[2 * ia + ja] * b[2 * ib + jb] * state[j];
      }
    }
    total += std::conj(state[i]) * row;
  }
  return total.real();
}

CHSHResult evaluate(const StateVector& state, QubitPair pair, const CHSHSetting& setting,
                    bool all_patterns) {
  CHSHResult r;
  r.correlators = {expectation(state, pair, setting.a0, setting.b0),
                   expectation(state, pair, setting.a0, setting.b1),
                   expectation(state, pair, setting.a1, setting.b0),
                   expectation(state, pair, setting.a1, setting.b1)};
  r.patterns = admissible_patterns(all_patterns);
  r.s_max = -std::numeric_limits<double>::infinity();
  for (const auto& p : r.patterns) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += p[k] * r.correlators[k];
    r.s_per_pattern.push_back(s);
    if (s > r.s_max + 1e-15) {
      r.s_max = s;
      r.best_pattern = p;
    }
  }
  return r;
}

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

SweepSummary rotation_sweep(const StateVector& state, QubitPair pair, int trials,
                            std::uint64_t seed, bool all_patterns) {
  if (trials < 1) throw InputError("rotation_sweep: trials must be >= 1");
  SweepSummary summary{trials, -std::numeric_limits<double>::infinity(), 0.0};
  for (int t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    const auto u = Unitary1Q::random(rng);
    const auto v = Unitary1Q::random(rng);
    const auto result = evaluate(state, pair, rotated_setting(u, v), all_patterns);
    summary.sup_s_max = std::max(summary.sup_s_max, result.s_max);
    for (double c : result.correlators) {
      summary.sup_abs_correlator = std::max(summary.sup_abs_correlator, std::abs(c));
    }
  }
  return summary;
}

std::string to_string(EntanglementLevel level) {
  switch (level) {
    case EntanglementLevel::kType1:
      return "Type1";
    case EntanglementLevel::kType2:
      return "Type2";
    case EntanglementLevel::kType3:
      return "Type3";
    case EntanglementLevel::kOther:
      return "Other";
  }
  return "Other";
}

EntanglementLevel classify(const StateVector& state, QubitPair pair) {
  const auto comp = Unitary1Q::identity();
  const auto had = Unitary1Q::hadamard();
  const auto in_comp = conditional_report(state, pair.first, comp, pair.second, comp);
  const auto in_had = conditional_report(state, pair.first, had, pair.second, had);
  const double s_max = evaluate(state, pair, default_setting()).s_max;

  if (in_comp.perfectly_correlated() && in_had.perfectly_correlated() &&
      std::abs(s_max - kTsirelson) <= kLevelTol) {
    return EntanglementLevel::kType1;
  }
  if (!in_comp.correlated && in_had.perfectly_correlated() && s_max > kLevelTol &&
      s_max < kTsirelson - kLevelTol) {
    return EntanglementLevel::kType2;
  }
  if (!in_comp.correlated && !in_had.correlated && std::abs(s_max) <= kLevelTol) {
    return EntanglementLevel::kType3;
  }
  return EntanglementLevel::kOther;
}

}  // namespace dormant
