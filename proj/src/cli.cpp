#include "dormant/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "dormant/analysis.hpp"
#include "dormant/channel.hpp"
#include "dormant/chsh.hpp"
#include "dormant/error.hpp"
#include "dormant/serialize.hpp"
#include "dormant/states.hpp"

namespace dormant::cli {

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out_path;
  double tolerance = 1e-10;
};

struct Outcome {
  Json parameters = Json::object();
  Json results = Json::object();
  bool ok = true;
};

QubitPair parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InputError("expected a pair 'i,j', got '" + text + "'");
  try {
    return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw InputError("expected a pair 'i,j', got '" + text + "'");
  }
}

Unitary1Q parse_basis(const std::string& spec) {
  if (spec == "comp") return Unitary1Q::identity();
  if (spec == "hadamard") return Unitary1Q::hadamard();
  if (spec.rfind("u:", 0) == 0) {
    std::vector<double> v;
    std::stringstream ss(spec.substr(2));
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        v.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw InputError("bad number in basis spec '" + spec + "'");
      }
    }
    if (v.size() != 5) throw InputError("basis spec needs u:a1re,a1im,a2re,a2im,alpha");
    return {Complex{v[0], v[1]}, Complex{v[2], v[3]}, v[4]};
  }
  throw InputError("unknown basis spec '" + spec + "' (comp, hadamard, u:...)");
}

StateVector family_state(const std::string& family, std::optional<int> n) {
  if (family == "psi3") return build_psi3().state;
  if (family == "psi3L") return build_psi3L().state;
  if (family == "psiN") {
    if (!n) throw InputError("--family psiN requires --n");
    return build_psi_n(*n).state;
  }
  if (family.rfind("bell", 0) == 0 && family.size() == 5) return bell_state(family[4] - '0');
  throw InputError("unknown family '" + family + "' (psi3, psiN, psi3L, bell1..bell4)");
}

Json family_params(const std::string& family, std::optional<int> n) {
  Json p{{"family", family}};
  if (n) p["n"] = *n;
  return p;
}

Outcome cmd_build(const std::string& family, std::optional<int> n) {
  Outcome o;
  o.parameters = family_params(family, n);
  const auto state = family_state(family, n);
  Json amps = Json::array();
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (std::abs(state[i]) <= kAmpTol) continue;
    amps.push_back(Json{{"bits", index_to_bits(i, state.n_qubits())},
                        {"re", state[i].real()},
                        {"im", state[i].imag()}});
  }
  o.results = Json{{"n_qubits", state.n_qubits()}, {"nonzero", std::move(amps)},
                   {"norm", state.norm_squared()}};
  return o;
}

Outcome cmd_chsh(const std::string& family, std::optional<int> n, const std::string& pair_text,
                 int rotations, bool all_patterns, const GlobalOptions& g) {
  Outcome o;
  o.parameters = family_params(family, n);
  o.parameters["pair"] = pair_text;
  o.parameters["rotations"] = rotations;
  o.parameters["all_patterns"] = all_patterns;
  const auto state = family_state(family, n);
  const auto pair = parse_pair(pair_text);
  const auto setting = default_setting();
  const auto result = evaluate(state, pair, setting, all_patterns);
  o.results["default"] = to_json(result, setting);
  double sup = result.s_max;
  if (rotations > 0) {
    const auto sweep = rotation_sweep(state, pair, rotations, g.seed, all_patterns);
    o.results["sweep"] = to_json(sweep);
    sup = std::max(sup, sweep.sup_s_max);
  }
  o.ok = sup <= kTsirelson + g.tolerance;
  return o;
}

Outcome cmd_correlate(const std::string& family, std::optional<int> n, int measured, int target,
                      const std::string& basis_m, const std::string& basis_t) {
  Outcome o;
  o.parameters = family_params(family, n);
  o.parameters["measured"] = measured;
  o.parameters["target"] = target;
  o.parameters["basis_m"] = basis_m;
  o.parameters["basis_t"] = basis_t;
  const auto state = family_state(family, n);
  o.results = to_json(
      conditional_report(state, measured, parse_basis(basis_m), target, parse_basis(basis_t)));
  return o;
}

Outcome cmd_permtest(int n, int samples, const GlobalOptions& g) {
  Outcome o;
  o.parameters = Json{{"n", n}, {"samples", samples}};
  const auto psi = build_psi_n(n).state;
  std::vector<int> mapping(n);
  std::iota(mapping.begin(), mapping.end(), 1);
  double worst = 0.0;
  long long checked = 0;
  auto check = [&](const std::vector<int>& m) {
    const auto permuted = apply_permutation(psi, PermutationMap(m));
    for (std::size_t i = 0; i < psi.dim(); ++i) worst = std::max(worst, std::abs(permuted[i] - psi[i]));
    ++checked;
  };
  const bool exhaustive = n <= 6;
  if (exhaustive) {
    do {
      check(mapping);
    } while (std::next_permutation(mapping.begin(), mapping.end()));
  } else {
    Rng rng(g.seed);
    for (int s = 0; s < samples; ++s) {
      std::shuffle(mapping.begin(), mapping.end(), rng);
      check(mapping);
    }
  }
  o.ok = worst <= g.tolerance;
  o.results = Json{{"mode", exhaustive ? "exhaustive" : "sampled"},
                   {"permutations_checked", checked},
                   {"max_deviation", worst},
                   {"invariant", o.ok}};
  return o;
}

Outcome cmd_channel(int n, const std::string& endpoints_text, std::optional<int> deviant,
                    int teleport_trials, const GlobalOptions& g) {
  Outcome o;
  o.parameters = Json{{"n", n}, {"endpoints", endpoints_text}, {"teleport_trials", teleport_trials}};
  if (deviant) o.parameters["deviant"] = *deviant;
  auto session = setup_session(n, parse_pair(endpoints_text));
  Rng rng(g.seed);
  for (int c : session.controller_ids()) {
    const auto basis = (deviant && *deviant == c) ? Unitary1Q::hadamard() : Unitary1Q::identity();
    controller_measure(session, c, basis, rng);
  }
  if (deviant && !session.has_measured(*deviant)) {
    throw InputError("--deviant must name a controller");
  }
  const auto status = deliver_and_resolve(session);
  Json checks = Json::object();
  if (status == SessionStatus::kActivated) {
    const double f = fidelity(*session.endpoint_state(), bell_state(*session.bell_variant()));
    checks["variant_fidelity"] = f;
    o.ok = o.ok && std::abs(f - 1.0) <= g.tolerance;
    if (teleport_trials > 0) {
      double worst = 1.0;
      for (int t = 0; t < teleport_trials; ++t) {
        const auto payload =
            apply_1q(new_basis_state(1, "0"), Unitary1Q::random(rng), 1);
        worst = std::min(worst, teleport_over(session, payload, rng));
      }
      checks["teleport_min_fidelity"] = worst;
      o.ok = o.ok && std::abs(worst - 1.0) <= g.tolerance;
    }
  } else {
    checks["endpoint_concurrence"] = *session.concurrence();
    o.ok = o.ok && *session.concurrence() < g.tolerance;
  }
  o.results = Json{{"transcript", transcript_records(session)}, {"checks", std::move(checks)}};
  return o;
}

Outcome cmd_classify(const std::string& family, std::optional<int> n, const std::string& pair_text) {
  Outcome o;
  o.parameters = family_params(family, n);
  o.parameters["pair"] = pair_text;
  o.results = Json{{"level", to_string(classify(family_state(family, n), parse_pair(pair_text)))}};
  return o;
}

Outcome cmd_resources(int n, int k) {
  Outcome o;
  o.parameters = Json{{"n", n}, {"k", k}};
  o.results = to_json(plan_resources(n, k));
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dormant-entanglement simulator", "dormant"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--format", g.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", g.out_path, "write the report to this file instead of stdout");
  app.add_option("--tolerance", g.tolerance, "check tolerance")->capture_default_str();

  std::string family;
  std::optional<int> n;
  std::string pair_text;

  auto* build = app.add_subcommand("build", "dump nonzero amplitudes of a family state");
  build->add_option("--family", family)->required();
  build->add_option("--n", n);

  int rotations = 0;
  bool all_patterns = false;
  auto* chsh = app.add_subcommand("chsh", "CHSH values with optional random-rotation sweep");
  chsh->add_option("--family", family)->required();
  chsh->add_option("--n", n);
  chsh->add_option("--pair", pair_text)->required();
  chsh->add_option("--rotations", rotations)->check(CLI::NonNegativeNumber);
  chsh->add_flag("--all-patterns", all_patterns, "enumerate all 8 CHSH sign patterns");

  int measured = 0, target = 0;
  std::string basis_m = "comp", basis_t = "comp";
  auto* correlate = app.add_subcommand("correlate", "conditional-probability report");
  correlate->add_option("--family", family)->required();
  correlate->add_option("--n", n);
  correlate->add_option("--measured", measured)->required();
  correlate->add_option("--target", target)->required();
  correlate->add_option("--basis-m", basis_m);
  correlate->add_option("--basis-t", basis_t);

  int perm_n = 0, samples = 1000;
  auto* permtest = app.add_subcommand("permtest", "permutation invariance of psi(n)");
  permtest->add_option("--n", perm_n)->required();
  permtest->add_option("--samples", samples)->check(CLI::PositiveNumber);

  int chan_n = 0, teleport_trials = 0;
  std::string endpoints_text;
  std::optional<int> deviant;
  auto* channel = app.add_subcommand("channel", "run one collective-channel session");
  channel->add_option("--n", chan_n)->required();
  channel->add_option("--endpoints", endpoints_text)->required();
  channel->add_option("--deviant", deviant);
  channel->add_option("--teleport-trials", teleport_trials)->check(CLI::NonNegativeNumber);

  auto* classify_cmd = app.add_subcommand("classify", "Type1/Type2/Type3/Other");
  classify_cmd->add_option("--family", family)->required();
  classify_cmd->add_option("--n", n);
  classify_cmd->add_option("--pair", pair_text)->required();

  int res_n = 0, res_k = 0;
  auto* resources = app.add_subcommand("resources", "qubit counts: point-to-point vs collective");
  resources->add_option("--n", res_n)->required();
  resources->add_option("--k", res_k)->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Outcome outcome;
  std::string command;
  try {
    if (*build) {
      command = "build";
      outcome = cmd_build(family, n);
    } else if (*chsh) {
      command = "chsh";
      outcome = cmd_chsh(family, n, pair_text, rotations, all_patterns, g);
    } else if (*correlate) {
      command = "correlate";
      outcome = cmd_correlate(family, n, measured, target, basis_m, basis_t);
    } else if (*permtest) {
      command = "permtest";
      outcome = cmd_permtest(perm_n, samples, g);
    } else if (*channel) {
      command = "channel";
      outcome = cmd_channel(chan_n, endpoints_text, deviant, teleport_trials, g);
    } else if (*classify_cmd) {
      command = "classify";
      outcome = cmd_classify(family, n, pair_text);
    } else {
      command = "resources";
      outcome = cmd_resources(res_n, res_k);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ProtocolError& e) {
    err << "protocol error: " << e.what() << "\n";
    return kExitCheckFailed;
  }

  Json report{{"command", command},
              {"parameters", std::move(outcome.parameters)},
              {"results", std::move(outcome.results)},
              {"seed", g.seed},
              {"ok", outcome.ok}};
  const std::string text = g.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
  if (g.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(g.out_path);
    if (!file) {
      err << "error: cannot open " << g.out_path << "\n";
      return kExitUsage;
    }
    file << text;
  }
  if (!outcome.ok) err << "check failed\n";
  return outcome.ok ? kExitOk : kExitCheckFailed;
}

}  // namespace dormant::cli
