#include "dormant/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dormant/error.hpp"

namespace dormant {

namespace {

void check_qubit(int n, int q, const char* what) {
  if (q < 1 || q > n) {
    throw InputError(std::string(what) + ": qubit " + std::to_string(q) + " out of range 1.." +
                     std::to_string(n));
  }
}

}  // namespace

// ---------------------------------------------------------------- Unitary1Q

Unitary1Q::Unitary1Q(Complex a1, Complex a2, double phase) : a1_(a1), a2_(a2), phase_(phase) {
  const double norm = std::norm(a1) + std::norm(a2);
  if (std::abs(norm - 1.0) > kAmpTol) {
    throw InputError("Unitary1Q: |a1|^2 + |a2|^2 = " + std::to_string(norm) + ", expected 1");
  }
}

Unitary1Q Unitary1Q::identity() { return {1.0, 0.0, std::numbers::pi}; }

Unitary1Q Unitary1Q::hadamard() {
  return {(1.0 / std::numbers::sqrt2), (1.0 / std::numbers::sqrt2), 0.0};
}

Unitary1Q Unitary1Q::pauli_x() { return {0.0, 1.0, 0.0}; }

Unitary1Q Unitary1Q::random(Rng& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double x0 = gauss(rng), x1 = gauss(rng), x2 = gauss(rng), x3 = gauss(rng);
  const double r = std::sqrt(x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3);
  const Complex a1{x0 / r, x1 / r};
  // Recompute a2 from a1 so the unit norm holds to rounding.
  const Complex a2 = std::polar(std::sqrt(std::max(0.0, 1.0 - std::norm(a1))), std::atan2(x3, x2));
  return {a1, a2, angle(rng)};
}

Mat2 Unitary1Q::matrix() const {
  const Complex e = std::polar(1.0, phase_);
  return {a1_, std::conj(a2_) * e, a2_, -std::conj(a1_) * e};
}

Unitary1Q Unitary1Q::inverse() const {
  return {std::conj(a1_), a2_ * std::polar(1.0, -phase_), -phase_};
}

bool Unitary1Q::is_computational() const { return std::abs(a2_) < kAmpTol; }

bool Unitary1Q::is_hadamard_like() const {
  // U|0> must be proportional to |+> or |->.
  return std::abs(std::abs(a1_) - (1.0 / std::numbers::sqrt2)) < kAmpTol &&
         std::abs(std::abs(a2_) - (1.0 / std::numbers::sqrt2)) < kAmpTol &&
         (std::abs(a2_ - a1_) < kAmpTol || std::abs(a2_ + a1_) < kAmpTol);
}

// ----------------------------------------------------------- PermutationMap

PermutationMap::PermutationMap(std::vector<int> mapping) : mapping_(std::move(mapping)) {
  const int n = size();
  if (n < 1) throw InputError("PermutationMap: empty mapping");
  std::vector<bool> seen(n, false);
  for (int target : mapping_) {
    if (target < 1 || target > n || seen[target - 1]) {
      throw InputError("PermutationMap: mapping is not a bijection on 1..n");
    }
    seen[target - 1] = true;
  }
}

PermutationMap PermutationMap::identity(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i + 1;
  return PermutationMap(std::move(m));
}

PermutationMap PermutationMap::swap(int n, int a, int b) {
  auto m = identity(n).mapping_;
  check_qubit(n, a, "swap");
  check_qubit(n, b, "swap");
  std::swap(m[a - 1], m[b - 1]);
  return PermutationMap(std::move(m));
}

PermutationMap PermutationMap::compose(const PermutationMap& other) const {
  if (other.size() != size()) throw InputError("compose: size mismatch");
  std::vector<int> m(size());
  for (int i = 1; i <= size(); ++i) m[i - 1] = target(other.target(i));
  return PermutationMap(std::move(m));
}

// -------------------------------------------------------------- StateVector

StateVector::StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
  const std::size_t dim = amplitudes_.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw InputError("StateVector: dimension must be a power of two >= 2");
  }
  n_qubits_ = std::countr_zero(dim);
  if (n_qubits_ > kMaxQubits) throw InputError("StateVector: more than 20 qubits");
  if (std::abs(norm_squared() - 1.0) > kProbTol) {
    throw InputError("StateVector: amplitudes are not normalized");
  }
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

StateVector StateVector::tensor(const StateVector& rhs) const {
  if (n_qubits_ + rhs.n_qubits_ > kMaxQubits) throw InputError("tensor: more than 20 qubits");
  std::vector<Complex> out(dim() * rhs.dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < rhs.dim(); ++j) out[i * rhs.dim() + j] = amplitudes_[i] * rhs[j];
  }
  return StateVector(std::move(out));
}

// --------------------------------------------------------------- operations

std::size_t bits_to_index(std::string_view bits) {
  std::size_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InputError("bitstring may contain only '0' and '1'");
    index = (index << 1) | static_cast<std::size_t>(c - '0');
  }
  return index;
}

std::string index_to_bits(std::size_t index, int n) {
  std::string s(n, '0');
  for (int q = 1; q <= n; ++q) {
    if (index & qubit_mask(n, q)) s[q - 1] = '1';
  }
  return s;
}

StateVector new_basis_state(int n, std::string_view bits) {
  if (n < 1 || n > kMaxQubits) throw InputError("new_basis_state: n out of range");
  if (static_cast<int>(bits.size()) != n) {
    throw InputError("new_basis_state: bitstring length " + std::to_string(bits.size()) +
                     " does not match n = " + std::to_string(n));
  }
  std::vector<Complex> amps(std::size_t{1} << n);
  amps[bits_to_index(bits)] = 1.0;
  return StateVector(std::move(amps));
}

StateVector apply_matrix(const StateVector& state, const Mat2& m, int target) {
  const int n = state.n_qubits();
  check_qubit(n, target, "apply");
  const std::size_t mask = qubit_mask(n, target);
  std::vector<Complex> out(state.amplitudes());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i & mask) continue;
    const Complex v0 = state[i];
    const Complex v1 = state[i | mask];
    out[i] = m[0] * v0 + m[1] * v1;
    out[i | mask] = m[2] * v0 + m[3] * v1;
  }
  return StateVector(std::move(out));
}

StateVector apply_1q(const StateVector& state, const Unitary1Q& gate, int target) {
  return apply_matrix(state, gate.matrix(), target);
}

StateVector apply_cx(const StateVector& state, int control, int target) {
  const int n = state.n_qubits();
  check_qubit(n, control, "apply_cx");
  check_qubit(n, target, "apply_cx");
  if (control == target) throw InputError("apply_cx: control equals target");
  const std::size_t cmask = qubit_mask(n, control);
  const std::size_t tmask = qubit_mask(n, target);
  std::vector<Complex> out(state.amplitudes());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i & cmask) out[i] = state[i ^ tmask];
  }
  return StateVector(std::move(out));
}

StateVector apply_permutation(const StateVector& state, const PermutationMap& perm) {
  const int n = state.n_qubits();
  if (perm.size() != n) throw InputError("apply_permutation: size mismatch");
  std::vector<Complex> out(state.dim());
  for (std::size_t i = 0; i < state.dim(); ++i) {
    std::size_t j = 0;
    for (int q = 1; q <= n; ++q) {
      if (i & qubit_mask(n, q)) j |= qubit_mask(n, perm.target(q));
    }
    out[j] = state[i];
  }
  return StateVector(std::move(out));
}

double outcome_probability(const StateVector& state, int qubit, const Unitary1Q& basis,
                           int outcome) {
  check_qubit(state.n_qubits(), qubit, "outcome_probability");
  if (outcome != 0 && outcome != 1) throw InputError("outcome must be 0 or 1");
  const auto rotated = apply_1q(state, basis.inverse(), qubit);
  const std::size_t mask = qubit_mask(state.n_qubits(), qubit);
  double p = 0.0;
  for (std::size_t i = 0; i < rotated.dim(); ++i) {
    if (((i & mask) != 0) == (outcome == 1)) p += std::norm(rotated[i]);
  }
  return std::clamp(p, 0.0, 1.0);
}

std::pair<MeasurementRecord, StateVector> postselect(const StateVector& state, int qubit,
                                                     const Unitary1Q& basis, int outcome) {
  const double p = outcome_probability(state, qubit, basis, outcome);
  if (p < kProbTol) {
    throw InternalError("postselect: outcome " + std::to_string(outcome) + " on qubit " +
                        std::to_string(qubit) + " has zero probability");
  }
  auto rotated = apply_1q(state, basis.inverse(), qubit).amplitudes();
  const std::size_t mask = qubit_mask(state.n_qubits(), qubit);
  const double scale = 1.0 / std::sqrt(p);
  for (std::size_t i = 0; i < rotated.size(); ++i) {
    rotated[i] = (((i & mask) != 0) == (outcome == 1)) ? rotated[i] * scale : Complex{};
  }
  auto collapsed = apply_1q(StateVector(std::move(rotated)), basis, qubit);
  return {MeasurementRecord{qubit, basis, outcome, p}, std::move(collapsed)};
}

std::pair<MeasurementRecord, StateVector> measure_qubit(const StateVector& state, int qubit,
                                                        const Unitary1Q& basis, Rng& rng) {
  const double p0 = outcome_probability(state, qubit, basis, 0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const int outcome = uniform(rng) < p0 ? 0 : 1;
  return postselect(state, qubit, basis, outcome);
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) throw InputError("inner_product: dimension mismatch");
  Complex s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

std::string debug_dump(const StateVector& state, double threshold) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (std::abs(state[i]) <= threshold) continue;
    os << index_to_bits(i, state.n_qubits()) << ' ' << state[i].real() << ' ' << state[i].imag()
       << '\n';
  }
  return os.str();
}

}  // namespace dormant
