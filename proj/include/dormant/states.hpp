#pragma once

// Constructors for the dormant-entanglement families and enumeration of what
// a pair of endpoint qubits is left holding once the remaining (controller)
// qubits have been measured.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dormant/qsim.hpp"

namespace dormant {

enum class FamilyKind { kPsi3, kPsiN, kPsi3L };

std::string to_string(FamilyKind kind);

/// Ordered endpoint pair; the first qubit is the most significant qubit of the extracted 2-qubit state.
using QubitPair = std::pair<int, int>;

struct DormantFamily {
  FamilyKind kind;
  int n_qubits;
  std::optional<int> lock_index;  // only for kPsi3L
  StateVector state;

  /// Basis a controller must use for activation: Hadamard for the lock qubit, computational otherwise.
  Unitary1Q activating_basis(int qubit) const;
  /// The other basis of the computational/Hadamard pair.
  Unitary1Q deviant_basis(int qubit) const;
};

/// (|00> + |11>)/sqrt2, (|01> + |10>)/sqrt2, (|01> - |10>)/sqrt2, (|00> - |11>)/sqrt2 for index 1..4.
StateVector bell_state(int index);

/// 2|ad - bc| for a|00> + b|01> + c|10> + d|11>.
double concurrence(const StateVector& two_qubit);

DormantFamily build_psi3();
/// Built gate by gate: H(1), CX(1->2), then H(k+1), CX(k+1 -> k) for k = 2..n-1.
DormantFamily build_psi_n(int n);
/// Register order (q1, q2, q3, qL).
DormantFamily build_psi3L();

struct ControllerBasis {
  int qubit;
  Unitary1Q basis;
};

struct ActivationRow {
  std::string pattern;  // controller outcomes, ascending controller index
  double probability;
  StateVector state;  // normalized endpoint state
  double concurrence;
};

struct ActivationTable {
  QubitPair endpoints;
  std::vector<ControllerBasis> controllers;
  std::vector<ActivationRow> rows;
};

/// Endpoint state left after the controllers read `pattern` in their bases.
/// Returns nullopt when that pattern has probability below 1e-10.
std::optional<std::pair<double, StateVector>> conditional_endpoint_state(
    const StateVector& state, QubitPair endpoints, const std::vector<ControllerBasis>& controllers,
    const std::string& pattern);

/// Enumerates every controller outcome pattern. Zero-probability patterns are
/// omitted since they carry no normalizable endpoint state.
ActivationTable activation_table(const DormantFamily& family, QubitPair endpoints,
                                 const std::map<int, Unitary1Q>& controller_bases);
ActivationTable activation_table(const StateVector& state, QubitPair endpoints,
                                 const std::map<int, Unitary1Q>& controller_bases);

/// True iff every endpoint state is a product state (concurrence < 1e-10) after
/// `deviant` measures in its deviant basis and all other controllers use the
/// activating basis.
bool destruction_check(const DormantFamily& family, QubitPair endpoints, int deviant);

/// Controllers for a family/endpoint pair, all set to the activating basis.
std::map<int, Unitary1Q> activating_bases(const DormantFamily& family, QubitPair endpoints);

}  // namespace dormant
