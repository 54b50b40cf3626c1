#pragma once

// Dense statevector substrate.
//
// Qubits are addressed 1..n. The ket |q1 q2 ... qn> lives at index
// sum_i q_i * 2^(n-i), so q1 is the most significant bit and kets read
// left-to-right exactly as they are written.

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dormant {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

inline constexpr int kMaxQubits = 20;
inline constexpr double kProbTol = 1e-10;
inline constexpr double kAmpTol = 1e-12;

/// 2x2 complex matrix in row-major order.
using Mat2 = std::array<Complex, 4>;

/// Single-qubit basis rotation [[a1, conj(a2) e^{i phase}], [a2, -conj(a1) e^{i phase}]].
///
/// Every element of U(2) can be written this way (det = -e^{i phase}), and the
/// family is closed under adjoint, so the inverse of a rotation is again a
/// Unitary1Q.
class Unitary1Q {
 public:
  /// Throws InputError unless |a1|^2 + |a2|^2 = 1 within 1e-12.
  Unitary1Q(Complex a1, Complex a2, double phase);

  static Unitary1Q identity();  // a1 = 1, a2 = 0, phase = pi
  static Unitary1Q hadamard();  // a1 = a2 = 1/sqrt2, phase = 0
  static Unitary1Q pauli_x();   // a1 = 0, a2 = 1, phase = 0
  /// (a1, a2) uniform on the complex unit 3-sphere, phase uniform in [0, 2pi).
  static Unitary1Q random(Rng& rng);

  Complex a1() const { return a1_; }
  Complex a2() const { return a2_; }
  double phase() const { return phase_; }

  Mat2 matrix() const;
  Unitary1Q inverse() const;

  /// True when this rotation equals the identity up to a global phase.
  bool is_computational() const;
  /// True when this rotation maps the computational basis onto {|+>, |->} (up to phases).
  bool is_hadamard_like() const;

 private:
  Complex a1_;
  Complex a2_;
  double phase_;
};

/// Relabeling of qubits: qubit i (1-based) moves to position mapping()[i-1].
class PermutationMap {
 public:
  /// Throws InputError if `mapping` is not a bijection on {1..n}.
  explicit PermutationMap(std::vector<int> mapping);

  static PermutationMap identity(int n);
  static PermutationMap swap(int n, int a, int b);

  int size() const { return static_cast<int>(mapping_.size()); }
  int target(int qubit) const { return mapping_.at(qubit - 1); }
  const std::vector<int>& mapping() const { return mapping_; }

  /// (*this after other): qubit i goes to this->target(other.target(i)).
  PermutationMap compose(const PermutationMap& other) const;

  bool operator==(const PermutationMap&) const = default;

 private:
  std::vector<int> mapping_;
};

class StateVector {
 public:
  /// Takes ownership of the amplitude array. Size must be 2^n with 1 <= n <= 20
  /// and the norm must be 1 within 1e-10.
  explicit StateVector(std::vector<Complex> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t index) const { return amplitudes_[index]; }

  double norm_squared() const;

  /// Kronecker product: the qubits of `rhs` follow the qubits of *this.
  StateVector tensor(const StateVector& rhs) const;

 private:
  int n_qubits_;
  std::vector<Complex> amplitudes_;
};

struct MeasurementRecord {
  int qubit;
  Unitary1Q basis;
  int outcome;
  double probability;
};

/// Bit mask for 1-based qubit `q` in an n-qubit register.
inline std::size_t qubit_mask(int n, int q) { return std::size_t{1} << (n - q); }

/// Parses a string of '0'/'1' characters into an index, q1 first.
std::size_t bits_to_index(std::string_view bits);
std::string index_to_bits(std::size_t index, int n);

StateVector new_basis_state(int n, std::string_view bits);

/// Applies an arbitrary 2x2 matrix to one qubit. Used internally and for observables.
StateVector apply_matrix(const StateVector& state, const Mat2& m, int target);
StateVector apply_1q(const StateVector& state, const Unitary1Q& gate, int target);
StateVector apply_cx(const StateVector& state, int control, int target);
StateVector apply_permutation(const StateVector& state, const PermutationMap& perm);

/// Born probability of `outcome` when `qubit` is measured in the basis {U|0>, U|1>}.
double outcome_probability(const StateVector& state, int qubit, const Unitary1Q& basis,
                           int outcome);

/// Projects onto U|outcome> on `qubit` and renormalizes. The measured qubit is left
/// in the basis state U|outcome>. Throws InternalError when the branch has
/// probability below 1e-10.
std::pair<MeasurementRecord, StateVector> postselect(const StateVector& state, int qubit,
                                                     const Unitary1Q& basis, int outcome);

/// Samples the outcome by the Born rule and collapses.
std::pair<MeasurementRecord, StateVector> measure_qubit(const StateVector& state, int qubit,
                                                        const Unitary1Q& basis, Rng& rng);

Complex inner_product(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);

/// One line per nonzero amplitude: "bitstring re im", ascending index.
std::string debug_dump(const StateVector& state, double threshold = kAmpTol);

}  // namespace dormant
