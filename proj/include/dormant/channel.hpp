#pragma once

// n-party collective channel over a shared psi(n) copy.
//
// Protocol order: controller_measure (one call per controller, appends an
// undelivered message) -> deliver_and_resolve (marks messages delivered and
// decides the session status) -> teleport_over (activated sessions only).

#include <optional>
#include <set>
#include <vector>

#include "dormant/analysis.hpp"
#include "dormant/qsim.hpp"
#include "dormant/states.hpp"

namespace dormant {

inline constexpr int kMaxSessionParties = 12;

enum class PartyRole { kEndpoint, kController };

struct Party {
  int id;     // 1..n
  int qubit;  // equal to id
  PartyRole role;
};

struct ClassicalMessage {
  int from;
  Unitary1Q basis_declared;
  int outcome;
  bool delivered;
  int ordinal;  // position in the transcript
};

enum class SessionStatus { kDormant, kActivated, kDestroyed };

std::string to_string(SessionStatus status);

struct ResourcePlan {
  int n;
  int k;
  long long point_to_point_qubits;  // n(n-1)
  long long collective_qubits;      // k n
};

ResourcePlan plan_resources(int n, int k);

class ChannelSession {
 public:
  int n() const { return n_; }
  std::pair<const Party&, const Party&> endpoints() const {
    return {parties_[endpoints_.first - 1], parties_[endpoints_.second - 1]};
  }
  QubitPair endpoint_ids() const { return endpoints_; }
  const std::vector<Party>& parties() const { return parties_; }
  std::vector<int> controller_ids() const;

  const StateVector& initial_state() const { return initial_state_; }
  const StateVector& shared_state() const { return shared_state_; }
  const std::vector<ClassicalMessage>& transcript() const { return transcript_; }

  SessionStatus status() const { return status_; }
  /// 1 for (|00> + |11>)/sqrt2, 2 for (|01> + |10>)/sqrt2; set once activated.
  std::optional<int> bell_variant() const { return bell_variant_; }
  /// Endpoint pair state extracted at resolution.
  const std::optional<StateVector>& endpoint_state() const { return endpoint_state_; }
  std::optional<double> concurrence() const { return concurrence_; }
  std::optional<double> teleport_fidelity() const { return teleport_fidelity_; }

  bool has_measured(int controller) const;

 private:
  friend ChannelSession setup_session(int, QubitPair);
  friend ClassicalMessage controller_measure(ChannelSession&, int, const Unitary1Q&, Rng&);
  friend ClassicalMessage controller_measure_forced(ChannelSession&, int, const Unitary1Q&, int);
  friend SessionStatus deliver_and_resolve(ChannelSession&, const std::set<int>&);
  friend double teleport_over(ChannelSession&, const StateVector&, Rng&);

  ChannelSession(int n, QubitPair endpoints, StateVector state);

  ClassicalMessage record(int controller, const MeasurementRecord& rec, StateVector collapsed);
  void check_can_measure(int controller) const;

  int n_;
  QubitPair endpoints_;
  std::vector<Party> parties_;
  StateVector initial_state_;
  StateVector shared_state_;
  std::vector<ClassicalMessage> transcript_;
  SessionStatus status_ = SessionStatus::kDormant;
  std::optional<int> bell_variant_;
  std::optional<StateVector> endpoint_state_;
  std::optional<double> concurrence_;
  std::optional<double> teleport_fidelity_;
};

/// 3 <= n <= 12; all non-endpoint parties become controllers.
ChannelSession setup_session(int n, QubitPair endpoints);

ClassicalMessage controller_measure(ChannelSession& session, int controller,
                                    const Unitary1Q& basis, Rng& rng);
/// Same as controller_measure but forces the outcome (for branch enumeration).
/// Throws InternalError if that outcome has zero probability.
ClassicalMessage controller_measure_forced(ChannelSession& session, int controller,
                                           const Unitary1Q& basis, int outcome);

/// Delivers every message except those from controllers listed in `lost`, then
/// resolves. Throws ProtocolError (and leaves the session dormant) unless every
/// controller has measured and every message has been delivered.
SessionStatus deliver_and_resolve(ChannelSession& session, const std::set<int>& lost = {});

/// Teleports a 1-qubit payload from the first endpoint to the second over the
/// activated pair. The session's pair is not consumed, so trials can repeat.
double teleport_over(ChannelSession& session, const StateVector& payload, Rng& rng);

/// Endpoint density matrix conditioned only on delivered messages; undelivered
/// outcomes are averaged over.
DensityMatrix endpoint_view(const ChannelSession& session);

}  // namespace dormant
