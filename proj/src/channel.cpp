#include "dormant/channel.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dormant/error.hpp"

namespace dormant {

namespace {

/// Computational bit read by a measurement in a diagonal or anti-diagonal basis.
std::optional<int> computational_bit(const Unitary1Q& basis, int outcome) {
  if (basis.is_computational()) return outcome;
  if (std::abs(basis.a1()) < kAmpTol) return 1 - outcome;
  return std::nullopt;
}

}  // namespace

std::string to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::kDormant:
      return "dormant";
    case SessionStatus::kActivated:
      return "activated";
    case SessionStatus::kDestroyed:
      return "destroyed";
  }
  return "?";
}

ResourcePlan plan_resources(int n, int k) {
  if (n < 3) throw InputError("plan_resources: need at least 3 parties");
  if (k < 1) throw InputError("plan_resources: need at least one pair");
  const long long nn = n;
  return {n, k, nn * (nn - 1), static_cast<long long>(k) * nn};
}

ChannelSession::ChannelSession(int n, QubitPair endpoints, StateVector state)
    : n_(n), endpoints_(endpoints), initial_state_(state), shared_state_(std::move(state)) {
  for (int id = 1; id <= n; ++id) {
    const bool is_endpoint = id == endpoints.first || id == endpoints.second;
    parties_.push_back({id, id, is_endpoint ? PartyRole::kEndpoint : PartyRole::kController});
  }
}

std::vector<int> ChannelSession::controller_ids() const {
  std::vector<int> ids;
  for (const auto& p : parties_) {
    if (p.role == PartyRole::kController) ids.push_back(p.id);
  }
  return ids;
}

bool ChannelSession::has_measured(int controller) const {
  return std::any_of(transcript_.begin(), transcript_.end(),
                     [controller](const ClassicalMessage& m) { return m.from == controller; });
}

void ChannelSession::check_can_measure(int controller) const {
  if (status_ != SessionStatus::kDormant) {
    throw ProtocolError("controller_measure: session is already " + to_string(status_));
  }
  if (controller < 1 || controller > n_ || parties_[controller - 1].role != PartyRole::kController) {
    throw ProtocolError("controller_measure: party " + std::to_string(controller) +
                        " is not a controller");
  }
  if (has_measured(controller)) {
    throw ProtocolError("controller_measure: party " + std::to_string(controller) +
                        " has already measured");
  }
}

ClassicalMessage ChannelSession::record(int controller, const MeasurementRecord& rec,
                                        StateVector collapsed) {
  shared_state_ = std::move(collapsed);
  ClassicalMessage msg{controller, rec.basis, rec.outcome, false,
                       static_cast<int>(transcript_.size())};
  transcript_.push_back(msg);
  return msg;
}

ChannelSession setup_session(int n, QubitPair endpoints) {
  if (n < 3 || n > kMaxSessionParties) throw InputError("setup_session: n must be in 3..12");
  const auto [a, b] = endpoints;
  if (a < 1 || a > n || b < 1 || b > n) throw InputError("setup_session: endpoint out of range");
  if (a == b) throw InputError("setup_session: endpoints must be distinct");
  return ChannelSession(n, endpoints, build_psi_n(n).state);
}

ClassicalMessage controller_measure(ChannelSession& session, int controller,
                                    const Unitary1Q& basis, Rng& rng) {
  session.check_can_measure(controller);
  auto [rec, collapsed] = measure_qubit(session.shared_state_, controller, basis, rng);
  return session.record(controller, rec, std::move(collapsed));
}

ClassicalMessage controller_measure_forced(ChannelSession& session, int controller,
                                           const Unitary1Q& basis, int outcome) {
  session.check_can_measure(controller);
  auto [rec, collapsed] = postselect(session.shared_state_, controller, basis, outcome);
  return session.record(controller, rec, std::move(collapsed));
}

SessionStatus deliver_and_resolve(ChannelSession& session, const std::set<int>& lost) {
  if (session.status_ != SessionStatus::kDormant) {
    throw ProtocolError("deliver_and_resolve: session already resolved");
  }
  const auto controllers = session.controller_ids();
  for (int c : controllers) {
    if (!session.has_measured(c)) {
      throw ProtocolError("deliver_and_resolve: no consensus, controller " + std::to_string(c) +
                          " has not measured");
    }
  }
  for (auto& msg : session.transcript_) {
    if (!lost.contains(msg.from)) msg.delivered = true;
  }
  for (const auto& msg : session.transcript_) {
    if (!msg.delivered) {
      throw ProtocolError("deliver_and_resolve: no consensus, message from controller " +
                          std::to_string(msg.from) + " was not delivered");
    }
  }

  // Controllers in ascending order, matching the pattern convention of activation tables.
  std::map<int, const ClassicalMessage*> by_controller;
  for (const auto& msg : session.transcript_) by_controller[msg.from] = &msg;
  std::vector<ControllerBasis> bases;
  std::string pattern;
  bool all_computational = true;
  int parity = 0;
  for (const auto& [q, msg] : by_controller) {
    bases.push_back({q, msg->basis_declared});
    pattern.push_back(msg->outcome ? '1' : '0');
    if (auto bit = computational_bit(msg->basis_declared, msg->outcome)) {
      parity ^= *bit;
    } else {
      all_computational = false;
    }
  }

  auto branch = conditional_endpoint_state(session.shared_state_, session.endpoints_, bases, pattern);
  if (!branch) throw InternalError("deliver_and_resolve: recorded branch has zero probability");
  session.concurrence_ = concurrence(branch->second);
  session.endpoint_state_ = std::move(branch->second);

  if (all_computational) {
    session.status_ = SessionStatus::kActivated;
    session.bell_variant_ = parity == 0 ? 1 : 2;
  } else {
    session.status_ = SessionStatus::kDestroyed;
  }
  return session.status_;
}

double teleport_over(ChannelSession& session, const StateVector& payload, Rng& rng) {
  if (session.status_ != SessionStatus::kActivated) {
    throw ProtocolError("teleport_over: session is " + to_string(session.status_) +
                        "; an unactivated pair is not a quantum channel");
  }
  if (payload.n_qubits() != 1) throw InputError("teleport_over: payload must be one qubit");

  // Register: 1 = payload, 2 = sender half, 3 = receiver half.
  auto state = payload.tensor(*session.endpoint_state_);
  state = apply_cx(state, 1, 2);
  state = apply_1q(state, Unitary1Q::hadamard(), 1);
  const auto comp = Unitary1Q::identity();
  auto [r1, s1] = measure_qubit(state, 1, comp, rng);
  auto [r2, s2] = measure_qubit(s1, 2, comp, rng);
  state = std::move(s2);

  // (|01> + |10>)/sqrt2 is the other variant with an X on the receiver.
  if (*session.bell_variant_ == 2) state = apply_1q(state, Unitary1Q::pauli_x(), 3);
  if (r2.outcome == 1) state = apply_1q(state, Unitary1Q::pauli_x(), 3);
  if (r1.outcome == 1) state = apply_matrix(state, Mat2{1.0, 0.0, 0.0, -1.0}, 3);

  const std::size_t base = (static_cast<std::size_t>(r1.outcome) << 2) |
                           (static_cast<std::size_t>(r2.outcome) << 1);
  const StateVector received({state[base], state[base | 1]});
  const double f = fidelity(payload, received);
  session.teleport_fidelity_ = f;
  return f;
}

DensityMatrix endpoint_view(const ChannelSession& session) {
  std::map<int, Unitary1Q> bases;
  std::map<int, int> delivered;
  for (int c : session.controller_ids()) bases.emplace(c, Unitary1Q::identity());
  for (const auto& msg : session.transcript()) {
    bases.insert_or_assign(msg.from, msg.basis_declared);
    if (msg.delivered) delivered[msg.from] = msg.outcome;
  }
  const auto table = activation_table(session.initial_state(), session.endpoint_ids(), bases);

  std::vector<std::pair<double, StateVector>> ensemble;
  double total = 0.0;
  for (const auto& row : table.rows) {
    bool consistent = true;
    std::size_t pos = 0;
    for (const auto& [q, basis] : bases) {
      auto it = delivered.find(q);
      if (it != delivered.end() && row.pattern[pos] - '0' != it->second) consistent = false;
      ++pos;
    }
    if (!consistent) continue;
    ensemble.emplace_back(row.probability, row.state);
    total += row.probability;
  }
  for (auto& [w, psi] : ensemble) w /= total;
  return mixture(ensemble);
}

}  // namespace dormant
