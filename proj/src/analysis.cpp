#include "dormant/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "dormant/error.hpp"

namespace dormant {

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  const auto dim = static_cast<std::size_t>(matrix_.rows());
  if (matrix_.rows() != matrix_.cols() || dim < 2 || (dim & (dim - 1)) != 0) {
    throw InputError("DensityMatrix: must be square with power-of-two dimension");
  }
  n_qubits_ = std::countr_zero(dim);
  if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kAmpTol) {
    throw InputError("DensityMatrix: not Hermitian");
  }
  if (std::abs(matrix_.trace() - Complex{1.0}) > kAmpTol) {
    throw InputError("DensityMatrix: trace is not 1");
  }
}

double DensityMatrix::max_abs_diff(const DensityMatrix& other) const {
  if (other.n_qubits_ != n_qubits_) throw InputError("max_abs_diff: dimension mismatch");
  return (matrix_ - other.matrix_).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix density_from_state(const StateVector& state) {
  Eigen::Map<const Eigen::VectorXcd> v(state.amplitudes().data(),
                                       static_cast<Eigen::Index>(state.dim()));
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix mixture(const std::vector<std::pair<double, StateVector>>& ensemble) {
  if (ensemble.empty()) throw InputError("mixture: empty ensemble");
  const auto dim = static_cast<Eigen::Index>(ensemble.front().second.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [w, psi] : ensemble) {
    if (static_cast<Eigen::Index>(psi.dim()) != dim) throw InputError("mixture: dimension mismatch");
    Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), dim);
    m += w * (v * v.adjoint());
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  const int n = rho.n_qubits();
  if (keep.empty()) throw InputError("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw InputError("partial_trace: duplicate qubit in keep set");
  }
  for (int q : keep) {
    if (q < 1 || q > n) throw InputError("partial_trace: qubit out of range");
  }
  std::vector<int> traced;
  for (int q = 1; q <= n; ++q) {
    if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);
  }

  const int k = static_cast<int>(keep.size());
  // Scatter a compact index over the given qubit list into a full register index.
  auto scatter = [n](std::size_t compact, const std::vector<int>& qubits) {
    const int m = static_cast<int>(qubits.size());
    std::size_t full = 0;
    for (int i = 0; i < m; ++i) {
      if (compact & qubit_mask(m, i + 1)) full |= qubit_mask(n, qubits[i]);
    }
    return full;
  };

  const std::size_t kdim = std::size_t{1} << k;
  const std::size_t tdim = std::size_t{1} << traced.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kdim, kdim);
  for (std::size_t r = 0; r < kdim; ++r) {
    const std::size_t rfull = scatter(r, keep);
    for (std::size_t c = 0; c < kdim; ++c) {
      const std::size_t cfull = scatter(c, keep);
      Complex s{};
      for (std::size_t t = 0; t < tdim; ++t) {
        const std::size_t tfull = scatter(t, traced);
        s += rho(rfull | tfull, cfull | tfull);
      }
      out(r, c) = s;
    }
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix partial_trace(const StateVector& state, std::vector<int> keep) {
  return partial_trace(density_from_state(state), std::move(keep));
}

Eigen::Matrix4cd partial_transpose(const DensityMatrix& rho, int side) {
  if (rho.n_qubits() != 2) throw InputError("partial_transpose: expected a 2-qubit matrix");
  if (side != 1 && side != 2) throw InputError("partial_transpose: side must be 1 or 2");
  Eigen::Matrix4cd out;
  const int shift = side == 2 ? 0 : 1;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      // Swap the chosen qubit's bit between the row and column index.
      const int rb = (r >> shift) & 1;
      const int cb = (c >> shift) & 1;
      const int r2 = (r & ~(1 << shift)) | (cb << shift);
      const int c2 = (c & ~(1 << shift)) | (rb << shift);
      out(r2, c2) = rho(r, c);
    }
  }
  return out;
}

double ppt_min_eigenvalue(const DensityMatrix& rho, int side) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(partial_transpose(rho, side),
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_ppt_separable(const DensityMatrix& rho) { return ppt_min_eigenvalue(rho) >= -kProbTol; }

bool CorrelationReport::perfectly_correlated(double tol) const {
  if (!p_conditional_given_0 || !p_conditional_given_1) return false;
  auto extreme = [tol](double p) { return p < tol || p > 1.0 - tol; };
  return extreme(*p_conditional_given_0) && extreme(*p_conditional_given_1);
}

double CorrelationReport::max_deviation() const {
  double d = 0.0;
  if (p_conditional_given_0) d = std::max(d, std::abs(*p_conditional_given_0 - p_marginal));
  if (p_conditional_given_1) d = std::max(d, std::abs(*p_conditional_given_1 - p_marginal));
  return d;
}

CorrelationReport conditional_report(const StateVector& state, int measured,
                                     const Unitary1Q& measured_basis, int target,
                                     const Unitary1Q& target_basis) {
  if (measured == target) throw InputError("conditional_report: measured equals target");
  CorrelationReport report{{measured, target},
                           measured_basis,
                           target_basis,
                           outcome_probability(state, target, target_basis, 0),
                           std::nullopt,
                           std::nullopt,
                           false};
  for (int m : {0, 1}) {
    if (outcome_probability(state, measured, measured_basis, m) < kProbTol) continue;
    const auto collapsed = postselect(state, measured, measured_basis, m).second;
    const double p = outcome_probability(collapsed, target, target_basis, 0);
    (m == 0 ? report.p_conditional_given_0 : report.p_conditional_given_1) = p;
  }
  report.correlated = report.max_deviation() > kCorrelationThreshold;
  return report;
}

double lockless_deviation(const Unitary1Q& u1, const Unitary1Q& u2) {
  const Complex a1 = u1.a1(), a2 = u1.a2(), b1 = u2.a1(), b2 = u2.a2();
  const double alpha = u1.phase(), beta = u2.phase();
  return (a1 * b1 * a2 * b2 * std::polar(1.0, -(alpha + beta))).real() +
         (a1 * std::conj(b1) * a2 * std::conj(b2) * std::polar(1.0, beta - alpha)).real();
}

DensityMatrix measured_and_forgotten(const StateVector& state, QubitPair endpoints,
                                     const std::map<int, Unitary1Q>& bases) {
  const auto table = activation_table(state, endpoints, bases);
  std::vector<std::pair<double, StateVector>> ensemble;
  for (const auto& row : table.rows) ensemble.emplace_back(row.probability, row.state);
  return mixture(ensemble);
}

bool no_signalling_check(const DormantFamily& family, QubitPair endpoints,
                         const Unitary1Q& remote_basis) {
  std::map<int, Unitary1Q> bases;
  for (int q = 1; q <= family.n_qubits; ++q) {
    if (q != endpoints.first && q != endpoints.second) bases.emplace(q, remote_basis);
  }
  const auto forgotten = measured_and_forgotten(family.state, endpoints, bases);
  const auto reduced = partial_trace(family.state, {endpoints.first, endpoints.second});
  // partial_trace orders kept qubits ascending; align with the endpoint order.
  if (endpoints.first > endpoints.second) {
    Eigen::Matrix4cd swapped = forgotten.matrix();
    const int order[4] = {0, 2, 1, 3};
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) swapped(order[r], order[c]) = forgotten(r, c);
    return DensityMatrix(swapped).max_abs_diff(reduced) < kProbTol;
  }
  return forgotten.max_abs_diff(reduced) < kProbTol;
}

}  // namespace dormant
