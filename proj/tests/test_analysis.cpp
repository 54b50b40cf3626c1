#include <gtest/gtest.h>

#include <numbers>

#include "dormant/analysis.hpp"
#include "dormant/error.hpp"
#include "oracles.hpp"

using namespace dormant;

namespace {

const double kH = (1.0 / std::numbers::sqrt2);

oracle::ComplexMatrix to_rows(const DensityMatrix& rho) {
  const auto dim = rho.matrix().rows();
  oracle::ComplexMatrix m(dim, std::vector<Complex>(dim));
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) m[r][c] = rho(r, c);
  return m;
}

/// rho12 written out by hand from (|++><++| + |--><--|)/2.
const double kRho12[4][4] = {{0.25, 0, 0, 0.25}, {0, 0.25, 0.25, 0}, {0, 0.25, 0.25, 0},
                             {0.25, 0, 0, 0.25}};

StateVector rotate_pair(const StateVector& s, const Unitary1Q& u1, const Unitary1Q& u2) {
  return apply_1q(apply_1q(s, u1, 1), u2, 2);
}

}  // namespace

TEST(DensityFromState, Examples) {
  const auto zero = density_from_state(new_basis_state(1, "0"));
  EXPECT_NEAR(std::abs(zero(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(zero(1, 1)), 0.0, 1e-15);

  const auto plus = density_from_state(StateVector({kH, kH}));
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) EXPECT_NEAR(std::abs(plus(r, c) - 0.5), 0.0, 1e-15);

  const auto bell = density_from_state(bell_state(1));
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const bool corner = (r == 0 || r == 3) && (c == 0 || c == 3);
      EXPECT_NEAR(std::abs(bell(r, c) - (corner ? 0.5 : 0.0)), 0.0, 1e-15);
    }
  }
  EXPECT_NEAR(bell.matrix().trace().real(), 1.0, 1e-12);
}

TEST(DensityMatrix, RejectsNonHermitianOrWrongTrace) {
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, 0.5, 0.0, 0.0;
  EXPECT_THROW(DensityMatrix{m}, InputError);
  m << 0.7, 0.0, 0.0, 0.7;
  EXPECT_THROW(DensityMatrix{m}, InputError);
}

TEST(PartialTrace, Psi3ReducedStateMatchesBothDecompositions) {
  const auto rho = partial_trace(build_psi3().state, {1, 2});
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(std::abs(rho(r, c) - kRho12[r][c]), 0.0, 1e-12);

  const auto entangled_mix = mixture({{0.5, bell_state(1)}, {0.5, bell_state(2)}});
  const auto product_mix =
      mixture({{0.5, StateVector({0.5, 0.5, 0.5, 0.5})}, {0.5, StateVector({0.5, -0.5, -0.5, 0.5})}});
  EXPECT_LT(entangled_mix.max_abs_diff(rho), 1e-12);
  EXPECT_LT(product_mix.max_abs_diff(rho), 1e-12);
  EXPECT_LT(entangled_mix.max_abs_diff(product_mix), 1e-12);
}

TEST(PartialTrace, ProductStateAndOrdering) {
  const auto s = new_basis_state(1, "0").tensor(StateVector({kH, kH}));
  const auto first = partial_trace(s, {1});
  EXPECT_NEAR(std::abs(first(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(first(1, 1)), 0.0, 1e-15);
  // Kept qubits come back in ascending order regardless of how they are listed.
  const auto three = new_basis_state(3, "100");
  EXPECT_NEAR(std::abs(partial_trace(three, {3, 1})(2, 2) - 1.0), 0.0, 1e-15);
  EXPECT_THROW(partial_trace(s, {}), InputError);
  EXPECT_THROW(partial_trace(s, {3}), InputError);
}

TEST(PartialTrace, PreservesTrace) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = build_psi_n(5).state;
    for (int q = 1; q <= 5; ++q) s = apply_1q(s, Unitary1Q::random(rng), q);
    const auto r = partial_trace(s, {2, 4});
    EXPECT_NEAR(r.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_GE(r.min_eigenvalue(), -1e-10);
  }
}

TEST(Ppt, Rho12IsSeparable) {
  const auto rho = partial_trace(build_psi3().state, {1, 2});
  const auto ref = oracle::hermitian_eigenvalues(oracle::partial_transpose_2(to_rows(rho)));
  EXPECT_NEAR(ref.front(), 0.0, 1e-12);
  EXPECT_NEAR(ppt_min_eigenvalue(rho), ref.front(), 1e-10);
  EXPECT_TRUE(is_ppt_separable(rho));
}

TEST(Ppt, BellProjectorIsEntangled) {
  const auto rho = density_from_state(bell_state(1));
  const auto ref = oracle::hermitian_eigenvalues(oracle::partial_transpose_2(to_rows(rho)));
  EXPECT_NEAR(ref.front(), -0.5, 1e-12);
  EXPECT_NEAR(ppt_min_eigenvalue(rho), -0.5, 1e-10);
  EXPECT_FALSE(is_ppt_separable(rho));
}

TEST(Ppt, MaximallyMixed) {
  const DensityMatrix mixed(Eigen::MatrixXcd::Identity(4, 4) * 0.25);
  EXPECT_NEAR(ppt_min_eigenvalue(mixed), 0.25, 1e-12);
  EXPECT_THROW(ppt_min_eigenvalue(density_from_state(build_psi3().state)), InputError);
}

TEST(Ppt, SideIndependentAndMatchesOracle) {
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = build_psi_n(4).state;
    for (int q = 1; q <= 4; ++q) s = apply_1q(s, Unitary1Q::random(rng), q);
    s = apply_cx(s, 3, 1);
    const auto rho = partial_trace(s, {1, 2});
    const auto ref = oracle::hermitian_eigenvalues(oracle::partial_transpose_2(to_rows(rho)));
    EXPECT_NEAR(ppt_min_eigenvalue(rho, 2), ref.front(), 1e-10);
    EXPECT_NEAR(ppt_min_eigenvalue(rho, 1), ppt_min_eigenvalue(rho, 2), 1e-10);
  }
}

TEST(Ppt, EveryPairOfPsiNIsSeparable) {
  for (int n = 3; n <= 8; ++n) {
    const auto rho = density_from_state(build_psi_n(n).state);
    for (int a = 1; a <= n; ++a)
      for (int b = a + 1; b <= n; ++b)
        EXPECT_GE(ppt_min_eigenvalue(partial_trace(rho, {a, b})), -1e-10) << n << ":" << a << b;
  }
}

TEST(ConditionalReport, Psi3Computational) {
  const auto comp = Unitary1Q::identity();
  const auto r = conditional_report(build_psi3().state, 1, comp, 2, comp);
  EXPECT_NEAR(r.p_marginal, 0.5, 1e-12);
  ASSERT_TRUE(r.p_conditional_given_0 && r.p_conditional_given_1);
  EXPECT_NEAR(*r.p_conditional_given_0, 0.5, 1e-12);
  EXPECT_NEAR(*r.p_conditional_given_1, 0.5, 1e-12);
  EXPECT_FALSE(r.correlated);
}

TEST(ConditionalReport, Psi3HadamardIsPerfectlyCorrelated) {
  const auto had = Unitary1Q::hadamard();
  const auto r = conditional_report(build_psi3().state, 1, had, 2, had);
  ASSERT_TRUE(r.p_conditional_given_0);
  EXPECT_NEAR(*r.p_conditional_given_0, 1.0, 1e-12);
  EXPECT_NEAR(*r.p_conditional_given_1, 0.0, 1e-12);
  EXPECT_TRUE(r.correlated);
  EXPECT_TRUE(r.perfectly_correlated());
}

TEST(ConditionalReport, LockRemovesCorrelationInEveryBasis) {
  Rng rng(42);
  const auto comp = Unitary1Q::identity();
  const auto lock = build_psi3L().state;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = rotate_pair(lock, Unitary1Q::random(rng), Unitary1Q::random(rng));
    const auto r = conditional_report(s, 1, comp, 2, comp);
    EXPECT_NEAR(r.p_marginal, 0.5, 1e-9);
    if (r.p_conditional_given_0) EXPECT_NEAR(*r.p_conditional_given_0, 0.5, 1e-9);
    if (r.p_conditional_given_1) EXPECT_NEAR(*r.p_conditional_given_1, 0.5, 1e-9);
    EXPECT_FALSE(r.correlated);
  }
}

TEST(ConditionalReport, ZeroProbabilityBranchIsAbsent) {
  const auto comp = Unitary1Q::identity();
  const auto r = conditional_report(new_basis_state(2, "00"), 1, comp, 2, comp);
  EXPECT_TRUE(r.p_conditional_given_0.has_value());
  EXPECT_FALSE(r.p_conditional_given_1.has_value());
  EXPECT_THROW(conditional_report(new_basis_state(2, "00"), 1, comp, 1, comp), InputError);
}

TEST(LocklessDeviation, Identity) {
  const auto id = Unitary1Q::identity();
  EXPECT_NEAR(lockless_deviation(id, id), 0.0, 1e-15);
}

TEST(LocklessDeviation, HadamardGivesHalf) {
  const auto h = Unitary1Q::hadamard();
  EXPECT_NEAR(lockless_deviation(h, h), 0.5, 1e-12);
  const auto r = conditional_report(rotate_pair(build_psi3().state, h, h), 1, Unitary1Q::identity(), 2,
                                    Unitary1Q::identity());
  EXPECT_NEAR(*r.p_conditional_given_0, 1.0, 1e-12);
}

TEST(LocklessDeviation, ClosedFormMatchesSimulation) {
  Rng rng(2024);
  const auto comp = Unitary1Q::identity();
  const auto psi = build_psi3().state;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto u1 = Unitary1Q::random(rng);
    const auto u2 = Unitary1Q::random(rng);
    const auto r = conditional_report(rotate_pair(psi, u1, u2), 1, comp, 2, comp);
    ASSERT_TRUE(r.p_conditional_given_0);
    EXPECT_NEAR(*r.p_conditional_given_0 - 0.5, lockless_deviation(u1, u2), 1e-9);
  }
}

TEST(NoSignalling, Psi3AnyRemoteBasis) {
  const auto f = build_psi3();
  EXPECT_TRUE(no_signalling_check(f, {1, 2}, Unitary1Q::identity()));
  EXPECT_TRUE(no_signalling_check(f, {1, 2}, Unitary1Q::hadamard()));
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    EXPECT_TRUE(no_signalling_check(f, {1, 2}, Unitary1Q::random(rng)));
  }
}

TEST(NoSignalling, AllFamiliesAndEndpointOrders) {
  Rng rng(78);
  const std::vector<DormantFamily> families{build_psi3(), build_psi_n(5), build_psi3L()};
  for (const auto& f : families) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto u = Unitary1Q::random(rng);
      EXPECT_TRUE(no_signalling_check(f, {1, 2}, u));
      EXPECT_TRUE(no_signalling_check(f, {2, 1}, u));
      EXPECT_TRUE(no_signalling_check(f, {1, 3}, u));
    }
  }
}

TEST(NoSignalling, SingleBranchDiffersFromReducedState) {
  // Knowing the controller outcome does change the endpoint description.
  const auto table = activation_table(build_psi3(), {1, 2}, {{3, Unitary1Q::identity()}});
  const auto reduced = partial_trace(build_psi3().state, {1, 2});
  EXPECT_GT(density_from_state(table.rows[0].state).max_abs_diff(reduced), 0.1);
}
