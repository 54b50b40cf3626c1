#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <numeric>

#include "dormant/analysis.hpp"
#include "dormant/error.hpp"
#include "dormant/states.hpp"
#include "oracles.hpp"

using namespace dormant;

namespace {

const double kH = (1.0 / std::numbers::sqrt2);

void expect_support(const StateVector& s, const std::vector<std::string>& support, double amp) {
  std::vector<Complex> expected(s.dim());
  for (const auto& bits : support) expected[bits_to_index(bits)] = amp;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    EXPECT_NEAR(std::abs(s[i] - expected[i]), 0.0, 1e-12) << index_to_bits(i, s.n_qubits());
  }
}

int nonzero_count(const StateVector& s) {
  return static_cast<int>(std::count_if(s.amplitudes().begin(), s.amplitudes().end(),
                                        [](Complex a) { return std::abs(a) > 1e-12; }));
}

}  // namespace

TEST(BuildPsi3, ClosedForm) {
  const auto f = build_psi3();
  EXPECT_EQ(f.kind, FamilyKind::kPsi3);
  EXPECT_EQ(f.n_qubits, 3);
  expect_support(f.state, {"000", "011", "101", "110"}, 0.5);
  EXPECT_NEAR(f.state.norm_squared(), 1.0, 1e-12);
}

TEST(BuildPsi3, ReducedStateIsEvenMixtureOfPlusPlusAndMinusMinus) {
  const std::vector<Complex> pp{0.5, 0.5, 0.5, 0.5};
  const std::vector<Complex> mm{0.5, -0.5, -0.5, 0.5};
  const auto a = oracle::outer(pp, pp);
  const auto b = oracle::outer(mm, mm);
  const auto rho = partial_trace(build_psi3().state, {1, 2});
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(rho(r, c) - 0.5 * (a[r][c] + b[r][c])), 0.0, 1e-12);
}

TEST(BuildPsiN, BaseCaseIsBellPair) {
  expect_support(build_psi_n(2).state, {"00", "11"}, kH);
}

TEST(BuildPsiN, FiveQubitTermList) {
  const auto s = build_psi_n(5).state;
  expect_support(s, oracle::psi5_terms(), 0.25);
  EXPECT_EQ(nonzero_count(s), 16);
}

TEST(BuildPsiN, FourQubitsMatchHandExpandedRecursion) {
  // Expanding the recursion from psi(3) gives the eight even-parity strings.
  expect_support(build_psi_n(4).state,
                 {"0000", "0011", "0101", "0110", "1001", "1010", "1100", "1111"},
                 0.5 * kH);
}

TEST(BuildPsiN, MatchesRecursionOracleAndParityStructure) {
  for (int n = 2; n <= 12; ++n) {
    const auto s = build_psi_n(n).state;
    const auto ref = oracle::psi_n_by_recursion(n);
    const double amp = std::pow(2.0, -(n - 1) / 2.0);
    for (std::size_t i = 0; i < s.dim(); ++i) {
      EXPECT_NEAR(std::abs(s[i] - ref[i]), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(s[i]), oracle::parity(i) == 0 ? amp : 0.0, 1e-12);
    }
    EXPECT_EQ(nonzero_count(s), 1 << (n - 1));
  }
  EXPECT_EQ(build_psi_n(3).state.amplitudes().size(), build_psi3().state.amplitudes().size());
}

TEST(BuildPsiN, RangeChecked) {
  EXPECT_THROW(build_psi_n(1), InputError);
  EXPECT_THROW(build_psi_n(21), InputError);
}

TEST(BuildPsi3L, ClosedFormInRegisterOrderQ1Q2Q3QL) {
  const auto f = build_psi3L();
  EXPECT_EQ(f.lock_index, 4);
  expect_support(f.state, {"0000", "1101", "0111", "1010"}, 0.5);
  EXPECT_NEAR(f.state.norm_squared(), 1.0, 1e-12);
}

TEST(BuildPsi3L, HadamardOnLock) {
  // 1/(2 sqrt2) [ ((00+11)|0>_L + (00-11)|1>_L)|0>_3 + ((01+10)|0>_L - (01-10)|1>_L)|1>_3 ]
  const auto s = apply_1q(build_psi3L().state, Unitary1Q::hadamard(), 4);
  const double a = 0.5 * kH;
  std::vector<Complex> expected(16);
  auto set = [&](const char* q1q2q3qL, double v) { expected[bits_to_index(q1q2q3qL)] += v; };
  set("0000", a), set("1100", a), set("0001", a), set("1101", -a);
  set("0110", a), set("1010", a), set("0111", -a), set("1011", a);
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(std::abs(s[i] - expected[i]), 0.0, 1e-12);
}

TEST(Concurrence, ClosedForm) {
  for (int k = 1; k <= 4; ++k) EXPECT_NEAR(concurrence(bell_state(k)), 1.0, 1e-12);
  EXPECT_NEAR(concurrence(new_basis_state(2, "01")), 0.0, 1e-15);
  EXPECT_THROW(concurrence(new_basis_state(3, "000")), InputError);
}

TEST(ActivationTable, Psi3Computational) {
  const auto t = activation_table(build_psi3(), {1, 2}, {{3, Unitary1Q::identity()}});
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].pattern, "0");
  EXPECT_NEAR(t.rows[0].probability, 0.5, 1e-12);
  EXPECT_NEAR(fidelity(t.rows[0].state, bell_state(1)), 1.0, 1e-12);
  EXPECT_NEAR(t.rows[0].concurrence, 1.0, 1e-12);
  EXPECT_EQ(t.rows[1].pattern, "1");
  EXPECT_NEAR(fidelity(t.rows[1].state, bell_state(2)), 1.0, 1e-12);
  EXPECT_NEAR(t.rows[1].concurrence, 1.0, 1e-12);
}

TEST(ActivationTable, Psi3HadamardGivesProductStates) {
  const auto t = activation_table(build_psi3(), {1, 2}, {{3, Unitary1Q::hadamard()}});
  ASSERT_EQ(t.rows.size(), 2u);
  const StateVector pp({0.5, 0.5, 0.5, 0.5});
  const StateVector mm({0.5, -0.5, -0.5, 0.5});
  EXPECT_NEAR(fidelity(t.rows[0].state, pp), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(t.rows[1].state, mm), 1.0, 1e-12);
  for (const auto& r : t.rows) {
    EXPECT_NEAR(r.concurrence, 0.0, 1e-12);
    EXPECT_NEAR(r.probability, 0.5, 1e-12);
  }
}

TEST(ActivationTable, Psi3LockActivatesAllFourBellStates) {
  const auto t = activation_table(build_psi3L(), {1, 2},
                                  {{3, Unitary1Q::identity()}, {4, Unitary1Q::hadamard()}});
  ASSERT_EQ(t.rows.size(), 4u);
  // pattern = (q3, qL): 00 -> phi1, 01 -> (00-11), 10 -> phi2, 11 -> (01-10)
  const int expected_bell[4] = {1, 4, 2, 3};
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(t.rows[k].pattern, index_to_bits(k, 2));
    EXPECT_NEAR(t.rows[k].probability, 0.25, 1e-12);
    EXPECT_NEAR(fidelity(t.rows[k].state, bell_state(expected_bell[k])), 1.0, 1e-12);
  }
}

TEST(ActivationTable, Psi5ParityLawAgainstTermListEnumeration) {
  // Oracle: for each controller pattern, gather the endpoint strings from the
  // five-qubit term list directly.
  const auto t = activation_table(build_psi_n(5), {1, 2},
                                  {{3, Unitary1Q::identity()}, {4, Unitary1Q::identity()},
                                   {5, Unitary1Q::identity()}});
  ASSERT_EQ(t.rows.size(), 8u);
  for (const auto& row : t.rows) {
    std::vector<Complex> pair(4);
    for (const auto& term : oracle::psi5_terms()) {
      if (term.substr(2) == row.pattern) pair[bits_to_index(term.substr(0, 2))] = 1.0;
    }
    double norm = 0.0;
    for (auto& a : pair) norm += std::norm(a);
    for (auto& a : pair) a /= std::sqrt(norm);
    EXPECT_NEAR(fidelity(row.state, StateVector(pair)), 1.0, 1e-12);
    const int parity = oracle::parity(bits_to_index(row.pattern));
    EXPECT_NEAR(fidelity(row.state, bell_state(parity == 0 ? 1 : 2)), 1.0, 1e-12);
    EXPECT_NEAR(row.probability, 0.125, 1e-12);
  }
}

TEST(ActivationTable, ParityLawUpToEightQubits) {
  for (int n = 3; n <= 8; ++n) {
    const auto f = build_psi_n(n);
    const auto t = activation_table(f, {1, 2}, activating_bases(f, {1, 2}));
    ASSERT_EQ(t.rows.size(), std::size_t{1} << (n - 2));
    double total = 0.0;
    for (const auto& row : t.rows) {
      const int parity = oracle::parity(bits_to_index(row.pattern));
      EXPECT_NEAR(fidelity(row.state, bell_state(parity == 0 ? 1 : 2)), 1.0, 1e-12);
      total += row.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(ActivationTable, InputErrors) {
  const auto f = build_psi3();
  EXPECT_THROW(activation_table(f, {1, 1}, {{3, Unitary1Q::identity()}}), InputError);
  EXPECT_THROW(activation_table(f, {1, 2}, {}), InputError);
  EXPECT_THROW(activation_table(f, {1, 2}, {{2, Unitary1Q::identity()}, {3, Unitary1Q::identity()}}),
               InputError);
}

TEST(ActivationTable, EndpointEquivalenceForPsiN) {
  // Every endpoint pair of psi(n) yields the same table up to row order.
  for (int n = 3; n <= 6; ++n) {
    const auto f = build_psi_n(n);
    const auto ref = activation_table(f, {1, 2}, activating_bases(f, {1, 2}));
    for (int a = 1; a <= n; ++a) {
      for (int b = 1; b <= n; ++b) {
        if (a == b) continue;
        const auto t = activation_table(f, {a, b}, activating_bases(f, {a, b}));
        ASSERT_EQ(t.rows.size(), ref.rows.size());
        std::vector<bool> used(ref.rows.size(), false);
        for (const auto& row : t.rows) {
          bool matched = false;
          for (std::size_t k = 0; k < ref.rows.size() && !matched; ++k) {
            if (used[k] || row.pattern != ref.rows[k].pattern) continue;
            matched = std::abs(row.probability - ref.rows[k].probability) < 1e-12 &&
                      fidelity(row.state, ref.rows[k].state) > 1.0 - 1e-12;
            used[k] = matched;
          }
          EXPECT_TRUE(matched) << "n=" << n << " pair " << a << "," << b;
        }
      }
    }
  }
}

TEST(ActivationTable, MixtureMatchesPartialTraceForAnyControllerBases) {
  Rng rng(31);
  const std::vector<DormantFamily> families{build_psi3(), build_psi_n(4), build_psi_n(5),
                                            build_psi3L()};
  for (const auto& f : families) {
    for (int trial = 0; trial < 20; ++trial) {
      std::map<int, Unitary1Q> bases;
      for (int q = 3; q <= f.n_qubits; ++q) bases.emplace(q, Unitary1Q::random(rng));
      const auto table = activation_table(f, {1, 2}, bases);
      double total = 0.0;
      Eigen::Matrix4cd mix = Eigen::Matrix4cd::Zero();
      for (const auto& row : table.rows) {
        EXPECT_NEAR(row.state.norm_squared(), 1.0, 1e-12);
        total += row.probability;
        Eigen::Map<const Eigen::Vector4cd> v(row.state.amplitudes().data());
        mix += row.probability * v * v.adjoint();
      }
      EXPECT_NEAR(total, 1.0, 1e-10);
      const auto reduced = partial_trace(f.state, {1, 2});
      EXPECT_LT((mix - reduced.matrix()).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(PermutationInvariance, ExhaustiveUpToSixQubits) {
  for (int n = 3; n <= 6; ++n) {
    const auto psi = build_psi_n(n).state;
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 1);
    do {
      const auto p = apply_permutation(psi, PermutationMap(m));
      for (std::size_t i = 0; i < psi.dim(); ++i) ASSERT_NEAR(std::abs(p[i] - psi[i]), 0.0, 1e-14);
    } while (std::next_permutation(m.begin(), m.end()));
  }
}

TEST(DestructionCheck, KnownCases) {
  EXPECT_TRUE(destruction_check(build_psi_n(5), {1, 2}, 4));
  EXPECT_TRUE(destruction_check(build_psi3(), {1, 2}, 3));
  EXPECT_TRUE(destruction_check(build_psi3L(), {1, 2}, 4));
  EXPECT_TRUE(destruction_check(build_psi3L(), {1, 2}, 3));
  EXPECT_THROW(destruction_check(build_psi3(), {1, 2}, 2), InputError);
}

TEST(DestructionCheck, EveryDeviantUpToEightQubits) {
  for (int n = 3; n <= 8; ++n) {
    const auto f = build_psi_n(n);
    for (int d = 3; d <= n; ++d) EXPECT_TRUE(destruction_check(f, {1, 2}, d)) << n << " " << d;
  }
}

TEST(DormantFamily, ActivatingBasisPerQubit) {
  const auto lock = build_psi3L();
  EXPECT_TRUE(lock.activating_basis(3).is_computational());
  EXPECT_TRUE(lock.activating_basis(4).is_hadamard_like());
  EXPECT_TRUE(lock.deviant_basis(4).is_computational());
  EXPECT_TRUE(build_psi3().deviant_basis(3).is_hadamard_like());
}
