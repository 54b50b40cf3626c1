#include "dormant/serialize.hpp"

#include <sstream>

namespace dormant {

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Unitary1Q& u) {
  return Json{{"a1", to_json(u.a1())}, {"a2", to_json(u.a2())}, {"alpha", u.phase()}};
}

Json to_json(const StateVector& s) {
  Json out = Json::array();
  for (const auto& a : s.amplitudes()) {
    out.push_back(a.real());
    out.push_back(a.imag());
  }
  return out;
}

Json to_json(const DensityMatrix& rho) {
  Json rows = Json::array();
  const auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return Json{{"n_qubits", rho.n_qubits()}, {"matrix", std::move(rows)}};
}

Json to_json(const ActivationTable& table) {
  Json controllers = Json::array();
  for (const auto& c : table.controllers) {
    controllers.push_back(Json{{"qubit", c.qubit}, {"basis", to_json(c.basis)}});
  }
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    rows.push_back(Json{{"pattern", r.pattern},
                        {"probability", r.probability},
                        {"state", to_json(r.state)},
                        {"concurrence", r.concurrence}});
  }
  return Json{{"endpoints", Json::array({table.endpoints.first, table.endpoints.second})},
              {"controllers", std::move(controllers)},
              {"rows", std::move(rows)}};
}

Json to_json(const CorrelationReport& report) {
  auto optional = [](const std::optional<double>& p) { return p ? Json(*p) : Json(nullptr); };
  return Json{{"pair", Json::array({report.pair.first, report.pair.second})},
              {"bases", Json::array({to_json(report.measured_basis), to_json(report.target_basis)})},
              {"p_marginal", report.p_marginal},
              {"p_conditional_given_0", optional(report.p_conditional_given_0)},
              {"p_conditional_given_1", optional(report.p_conditional_given_1)},
              {"correlated", report.correlated}};
}

Json to_json(const CHSHResult& result, const CHSHSetting& setting) {
  Json patterns = Json::array();
  for (const auto& p : result.patterns) patterns.push_back(p);
  return Json{{"correlators", result.correlators},
              {"patterns", std::move(patterns)},
              {"s_per_pattern", result.s_per_pattern},
              {"s_max", result.s_max},
              {"best_pattern", result.best_pattern},
              {"setting", Json{{"U", to_json(setting.u)}, {"V", to_json(setting.v)}}}};
}

Json to_json(const SweepSummary& summary) {
  return Json{{"trials", summary.trials},
              {"sup_s_max", summary.sup_s_max},
              {"sup_abs_correlator", summary.sup_abs_correlator}};
}

Json to_json(const ResourcePlan& plan) {
  return Json{{"n", plan.n},
              {"k", plan.k},
              {"point_to_point", plan.point_to_point_qubits},
              {"collective", plan.collective_qubits}};
}

Json to_json(const ClassicalMessage& msg) {
  return Json{{"from", msg.from},
              {"basis", to_json(msg.basis_declared)},
              {"outcome", msg.outcome},
              {"delivered", msg.delivered},
              {"timestamp_ordinal", msg.ordinal}};
}

Json transcript_records(const ChannelSession& session) {
  Json records = Json::array();
  for (const auto& msg : session.transcript()) records.push_back(to_json(msg));
  Json final_record{{"status", to_string(session.status())}};
  if (session.bell_variant()) final_record["bell_variant"] = *session.bell_variant();
  final_record["concurrence"] =
      session.concurrence() ? Json(*session.concurrence()) : Json(nullptr);
  if (session.teleport_fidelity()) final_record["teleport_fidelity"] = *session.teleport_fidelity();
  records.push_back(std::move(final_record));
  return records;
}

std::string transcript_jsonl(const ChannelSession& session) {
  std::string out;
  for (const auto& record : transcript_records(session)) {
    out += record.dump();
    out += '\n';
  }
  return out;
}

namespace {

void flatten_into(const Json& j, const std::string& prefix, Json& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten_into(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      flatten_into(j[i], prefix + "." + std::to_string(i), out);
    }
  } else {
    out[prefix] = j;
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

Json flatten(const Json& j) {
  Json out = Json::object();
  flatten_into(j, "", out);
  return out;
}

std::string to_csv(const Json& j) {
  const Json flat = flatten(j);
  std::ostringstream header, values;
  bool first = true;
  for (const auto& [key, value] : flat.items()) {
    if (!first) {
      header << ',';
      values << ',';
    }
    first = false;
    header << csv_field(key);
    values << csv_field(value.is_string() ? value.get<std::string>() : value.dump());
  }
  return header.str() + "\n" + values.str() + "\n";
}

}  // namespace dormant
