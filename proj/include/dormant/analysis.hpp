#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "dormant/qsim.hpp"
#include "dormant/states.hpp"

namespace dormant {

/// Hermitian, unit-trace matrix over `n_qubits` qubits (same index convention as StateVector).
class DensityMatrix {
 public:
  /// Validates Hermiticity and trace within 1e-12.
  explicit DensityMatrix(Eigen::MatrixXcd matrix);

  int n_qubits() const { return n_qubits_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return matrix_(row, col); }

  double max_abs_diff(const DensityMatrix& other) const;
  /// Smallest eigenvalue (Hermitian solver).
  double min_eigenvalue() const;

 private:
  int n_qubits_;
  Eigen::MatrixXcd matrix_;
};

DensityMatrix density_from_state(const StateVector& state);

/// sum_k w_k |psi_k><psi_k|. Weights must sum to 1.
DensityMatrix mixture(const std::vector<std::pair<double, StateVector>>& ensemble);

/// Reduced state on `keep` (1-based), kept qubits in ascending order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep);
DensityMatrix partial_trace(const StateVector& state, std::vector<int> keep);

/// Partial transpose of a 2-qubit matrix over qubit `side` (1 or 2).
Eigen::Matrix4cd partial_transpose(const DensityMatrix& rho, int side = 2);

/// Minimum eigenvalue of the partial transpose; >= -1e-10 means separable.
double ppt_min_eigenvalue(const DensityMatrix& rho, int side = 2);
bool is_ppt_separable(const DensityMatrix& rho);

struct CorrelationReport {
  QubitPair pair;  // (measured, target)
  Unitary1Q measured_basis;
  Unitary1Q target_basis;
  double p_marginal;                             // p(target = 0)
  std::optional<double> p_conditional_given_0;  // p(target = 0 | measured = 0)
  std::optional<double> p_conditional_given_1;
  bool correlated;

  /// Both conditionals present and each 0 or 1 within `tol`.
  bool perfectly_correlated(double tol = 1e-9) const;
  double max_deviation() const;
};

inline constexpr double kCorrelationThreshold = 1e-10;

CorrelationReport conditional_report(const StateVector& state, int measured,
                                     const Unitary1Q& measured_basis, int target,
                                     const Unitary1Q& target_basis);

/// p(q2 = 0 | q1 = 0) - 1/2 for U1 U2 |psi3> in closed form:
/// Re(a1 b1 a2 b2 e^{-i(alpha+beta)}) + Re(a1 conj(b1) a2 conj(b2) e^{i(beta-alpha)}).
double lockless_deviation(const Unitary1Q& u1, const Unitary1Q& u2);

/// Endpoint density matrix after every non-endpoint qubit is measured in the
/// given basis and the outcomes are discarded.
DensityMatrix measured_and_forgotten(const StateVector& state, QubitPair endpoints,
                                     const std::map<int, Unitary1Q>& bases);

/// True iff measuring-and-forgetting all remote qubits in `remote_basis` leaves
/// the endpoint reduced state unchanged (within 1e-10).
bool no_signalling_check(const DormantFamily& family, QubitPair endpoints,
                         const Unitary1Q& remote_basis);

}  // namespace dormant
