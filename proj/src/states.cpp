#include "dormant/states.hpp"

#include <cmath>
#include <numbers>

#include "dormant/error.hpp"

namespace dormant {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kPsi3:
      return "psi3";
    case FamilyKind::kPsiN:
      return "psiN";
    case FamilyKind::kPsi3L:
      return "psi3L";
  }
  return "?";
}

Unitary1Q DormantFamily::activating_basis(int qubit) const {
  return lock_index == qubit ? Unitary1Q::hadamard() : Unitary1Q::identity();
}

Unitary1Q DormantFamily::deviant_basis(int qubit) const {
  return lock_index == qubit ? Unitary1Q::identity() : Unitary1Q::hadamard();
}

StateVector bell_state(int index) {
  const double h = (1.0 / std::numbers::sqrt2);
  switch (index) {
    case 1:
      return StateVector({h, 0, 0, h});
    case 2:
      return StateVector({0, h, h, 0});
    case 3:
      return StateVector({0, h, -h, 0});
    case 4:
      return StateVector({h, 0, 0, -h});
    default:
      throw InputError("bell_state: index must be 1..4");
  }
}

double concurrence(const StateVector& s) {
  if (s.n_qubits() != 2) throw InputError("concurrence: expected a 2-qubit state");
  return 2.0 * std::abs(s[0] * s[3] - s[1] * s[2]);
}

DormantFamily build_psi_n(int n) {
  if (n < 2 || n > kMaxQubits) throw InputError("build_psi_n: n must be in 2..20");
  auto state = apply_1q(new_basis_state(n, std::string(n, '0')), Unitary1Q::hadamard(), 1);
  state = apply_cx(state, 1, 2);
  for (int k = 2; k < n; ++k) {
    state = apply_1q(state, Unitary1Q::hadamard(), k + 1);
    state = apply_cx(state, k + 1, k);
  }
  return {FamilyKind::kPsiN, n, std::nullopt, std::move(state)};
}

DormantFamily build_psi3() {
  auto family = build_psi_n(3);
  family.kind = FamilyKind::kPsi3;
  return family;
}

DormantFamily build_psi3L() {
  auto state = build_psi3().state.tensor(new_basis_state(1, "0"));
  state = apply_cx(state, 2, 4);
  return {FamilyKind::kPsi3L, 4, 4, std::move(state)};
}

namespace {

void check_endpoints(int n, QubitPair endpoints) {
  const auto [a, b] = endpoints;
  if (a < 1 || a > n || b < 1 || b > n) throw InputError("endpoint qubit out of range");
  if (a == b) throw InputError("endpoints must be distinct");
}

}  // namespace

std::optional<std::pair<double, StateVector>> conditional_endpoint_state(
    const StateVector& state, QubitPair endpoints, const std::vector<ControllerBasis>& controllers,
    const std::string& pattern) {
  const int n = state.n_qubits();
  check_endpoints(n, endpoints);
  if (pattern.size() != controllers.size()) throw InputError("pattern length mismatch");

  // Rotate each controller so its measurement basis becomes the computational one.
  StateVector rotated = state;
  std::size_t fixed = 0;
  for (std::size_t c = 0; c < controllers.size(); ++c) {
    const auto& [q, basis] = controllers[c];
    rotated = apply_1q(rotated, basis.inverse(), q);
    if (pattern[c] == '1') fixed |= qubit_mask(n, q);
  }

  std::vector<std::size_t> free_masks;
  for (int q = 1; q <= n; ++q) {
    if (q == endpoints.first || q == endpoints.second) continue;
    bool is_controller = false;
    for (const auto& c : controllers) is_controller |= (c.qubit == q);
    if (!is_controller) free_masks.push_back(qubit_mask(n, q));
  }
  if (!free_masks.empty()) throw InputError("every non-endpoint qubit needs a basis");

  const std::size_t m1 = qubit_mask(n, endpoints.first);
  const std::size_t m2 = qubit_mask(n, endpoints.second);
  std::vector<Complex> pair{rotated[fixed], rotated[fixed | m2], rotated[fixed | m1],
                            rotated[fixed | m1 | m2]};
  double p = 0.0;
  for (const auto& a : pair) p += std::norm(a);
  if (p < kProbTol) return std::nullopt;
  const double scale = 1.0 / std::sqrt(p);
  for (auto& a : pair) a *= scale;
  return std::make_pair(p, StateVector(std::move(pair)));
}

ActivationTable activation_table(const StateVector& state, QubitPair endpoints,
                                 const std::map<int, Unitary1Q>& controller_bases) {
  const int n = state.n_qubits();
  check_endpoints(n, endpoints);
  ActivationTable table{endpoints, {}, {}};
  for (const auto& [q, basis] : controller_bases) {
    if (q == endpoints.first || q == endpoints.second) {
      throw InputError("an endpoint cannot also be a controller");
    }
    if (q < 1 || q > n) throw InputError("controller qubit out of range");
    table.controllers.push_back({q, basis});
  }
  if (static_cast<int>(table.controllers.size()) != n - 2) {
    throw InputError("every non-endpoint qubit needs a basis");
  }

  const int c = n - 2;
  for (std::size_t k = 0; k < (std::size_t{1} << c); ++k) {
    const std::string pattern = c == 0 ? std::string{} : index_to_bits(k, c);
    auto branch = conditional_endpoint_state(state, endpoints, table.controllers, pattern);
    if (!branch) continue;
    const double conc = concurrence(branch->second);
    table.rows.push_back({pattern, branch->first, std::move(branch->second), conc});
  }
  return table;
}

ActivationTable activation_table(const DormantFamily& family, QubitPair endpoints,
                                 const std::map<int, Unitary1Q>& controller_bases) {
  return activation_table(family.state, endpoints, controller_bases);
}

std::map<int, Unitary1Q> activating_bases(const DormantFamily& family, QubitPair endpoints) {
  check_endpoints(family.n_qubits, endpoints);
  std::map<int, Unitary1Q> bases;
  for (int q = 1; q <= family.n_qubits; ++q) {
    if (q != endpoints.first && q != endpoints.second) bases.emplace(q, family.activating_basis(q));
  }
  return bases;
}

bool destruction_check(const DormantFamily& family, QubitPair endpoints, int deviant) {
  auto bases = activating_bases(family, endpoints);
  auto it = bases.find(deviant);
  if (it == bases.end()) throw InputError("deviant controller must be a non-endpoint qubit");
  it->second = family.deviant_basis(deviant);
  const auto table = activation_table(family, endpoints, bases);
  for (const auto& row : table.rows) {
    if (row.concurrence >= kProbTol) return false;
  }
  return true;
}

}  // namespace dormant
