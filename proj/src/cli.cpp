#include "sqe/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sqe/bound_result.hpp"
#include "sqe/gaussian.hpp"
#include "sqe/pauli.hpp"
#include "sqe/squash.hpp"

namespace sqe::cli {
namespace {

using nlohmann::json;

// Probabilities typed on a command line rarely sum to 1 to 12 digits.
constexpr double kCliProbabilitySlack = 1e-3;

struct Rendered {
  BoundResult result;
  std::vector<std::pair<std::string, double>> lines;
  std::string note;
};

void emit(const Rendered& r, bool as_json, std::ostream& out) {
  if (as_json) {
    out << json(r.result).dump(2) << '\n';
    return;
  }
  if (!r.note.empty()) out << "note: " << r.note << '\n';
  for (const auto& [key, value] : r.lines) out << key << ": " << format_number(value) << '\n';
  if (!r.result.argmin.empty()) {
    out << "argmin:";
    for (double v : r.result.argmin) out << ' ' << format_number(v);
    out << '\n';
  }
  if (r.result.evaluations > 0) out << "evaluations: " << r.result.evaluations << '\n';
  if (!r.result.caveat.empty()) out << "caveat: " << r.result.caveat << '\n';
  if (r.result.budget_exhausted) out << "budget_exhausted: true\n";
}

PauliProbabilities cli_probabilities(const std::vector<double>& p, std::string& note) {
  double sum = 0.0;
  for (double v : p) sum += v;
  if (std::abs(sum - 1.0) > kCliProbabilitySlack) {
    std::ostringstream os;
    os << "probabilities sum to " << sum << ", not 1";
    throw ValidationError(os.str());
  }
  if (sum != 1.0 && std::abs(sum - 1.0) > 1e-12) {
    note = "probabilities renormalized from sum " + format_number(sum);
    return {p[0] / sum, p[1] / sum, p[2] / sum, p[3] / sum};
  }
  return {p[0], p[1], p[2], p[3]};
}

Rendered pauli_command(const std::vector<double>& probs, const std::vector<double>& phases, int grid) {
  Rendered r;
  const PauliProbabilities p = cli_probabilities(probs, r.note);
  if (!phases.empty()) {
    const SquashingPhases phi(phases[0], phases[1], phases[2]);
    r.result.name = "pauli_squashed_entanglement";
    r.result.value = pauli_bound_at(p, phi);
    r.result.params = {{"p0", p[0]}, {"p1", p[1]}, {"p2", p[2]}, {"p3", p[3]}};
    r.result.argmin.assign(phi.values().begin(), phi.values().end());
    r.result.evaluations = 1;
  } else {
    PhaseOptimizerConfig cfg;
    cfg.grid_points_per_axis = grid;
    r.result = minimize_pauli_bound(p, cfg);
  }
  const double lower = reverse_coherent_information(p);
  r.result.params["lower_bound"] = lower;
  r.result.params["gap"] = r.result.value - lower;
  r.lines = {{"upper_bound", r.result.value}, {"lower_bound", lower}, {"gap", r.result.value - lower}};
  return r;
}

Rendered closed_form(std::string name, double upper, std::optional<double> lower,
                     std::map<std::string, double> params) {
  Rendered r;
  r.result.name = std::move(name);
  r.result.value = upper;
  r.result.params = std::move(params);
  r.lines = {{"upper_bound", upper}};
  if (lower) {
    r.result.params["lower_bound"] = *lower;
    r.lines.emplace_back("lower_bound", *lower);
  }
  return r;
}

// Finite-energy bound of the pure-loss stage when --ns is given, else the limit.
double loss_stage_bound(double transmissivity, const std::optional<double>& ns) {
  return ns ? pure_loss_bound(transmissivity, *ns) : pure_loss_bound_limit(transmissivity);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

cplx read_entry(const json& pair, const std::string& where) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
    throw ValidationError(where + ": expected a [real, imaginary] pair");
  return {pair[0].get<double>(), pair[1].get<double>()};
}

struct Check {
  std::string name;
  std::function<bool()> run;
};

int selftest(std::ostream& out) {
  const std::vector<Check> checks = {
      {"identity Pauli channel bound is 1",
       [] { return std::abs(minimize_pauli_bound({1, 0, 0, 0}).value - 1.0) < 1e-9; }},
      {"dephasing optimizer matches closed form at p=0.9",
       [] {
         return std::abs(minimize_pauli_bound(PauliProbabilities::dephasing(0.9)).value -
                         dephasing_bound(0.9)) < 1e-6;
       }},
      {"pure-loss bound approaches log2 3 at eta=1/2",
       [] { return std::abs(pure_loss_bound(0.5, 1e6) - std::log2(3.0)) < 1e-3; }},
      {"thermal bound reduces to pure loss at N_B=0",
       [] { return thermal_bound(0.7, 0.0) == pure_loss_bound_limit(0.7); }},
      {"covariance pipeline reproduces H(BE')",
       [] {
         const auto s = pure_loss_squashed_state(0.3, 0.6, 2.0);
         const double h = gaussian_entropy(s.marginal({0, 1}).covariance());
         return std::abs(h - bosonic_g((0.3 + 0.7 * 0.6) * 2.0)) < 1e-9;
       }},
      {"generic estimator on identity channel is 1",
       [] {
         EstimatorConfig cfg;
         cfg.restarts = 1;
         cfg.max_alternations = 1;
         return std::abs(estimate_channel_bound(FiniteChannel::identity(2), cfg).value - 1.0) < 1e-6;
       }},
  };
  bool all = true;
  for (const auto& c : checks) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception&) {
      ok = false;
    }
    all = all && ok;
    out << (ok ? "PASS " : "FAIL ") << c.name << '\n';
  }
  return all ? kExitOk : 1;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return {buf, res.ptr};
}

FiniteChannel parse_channel_json(const json& j) {
  if (!j.is_object()) throw ValidationError("channel file: top level must be an object");
  for (const char* key : {"in_dim", "out_dim", "kraus"})
    if (!j.contains(key)) throw ValidationError(std::string("channel file: missing key '") + key + "'");
  if (!j["in_dim"].is_number_integer() || !j["out_dim"].is_number_integer())
    throw ValidationError("channel file: in_dim and out_dim must be integers");
  const int in = j["in_dim"].get<int>();
  const int out = j["out_dim"].get<int>();
  if (in < 1 || out < 1) throw ValidationError("channel file: dimensions must be positive");
  if (!j["kraus"].is_array() || j["kraus"].empty())
    throw ValidationError("channel file: 'kraus' must be a non-empty list");

  std::vector<CMatrix> kraus;
  for (std::size_t k = 0; k < j["kraus"].size(); ++k) {
    const json& m = j["kraus"][k];
    const std::string where = "channel file: kraus[" + std::to_string(k) + "]";
    if (!m.is_array()) throw ValidationError(where + ": expected a matrix");
    CMatrix op(out, in);
    const bool nested = !m.empty() && m[0].is_array() && !m[0].empty() && m[0][0].is_array();
    if (nested) {
      if (m.size() != static_cast<std::size_t>(out))
        throw ValidationError(where + ": expected " + std::to_string(out) + " rows");
      for (int r = 0; r < out; ++r) {
        const json& row = m[static_cast<std::size_t>(r)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(in))
          throw ValidationError(where + ", row " + std::to_string(r) + ": expected " +
                                std::to_string(in) + " entries");
        for (int c = 0; c < in; ++c)
          op(r, c) = read_entry(row[static_cast<std::size_t>(c)],
                                where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    } else {
      if (m.size() != static_cast<std::size_t>(out * in))
        throw ValidationError(where + ": expected " + std::to_string(out * in) + " row-major entries");
      for (int r = 0; r < out; ++r)
        for (int c = 0; c < in; ++c)
          op(r, c) = read_entry(m[static_cast<std::size_t>(r * in + c)],
                                where + "[" + std::to_string(r * in + c) + "]");
    }
    kraus.push_back(std::move(op));
  }
  return {std::move(kraus), in, out};
}

FiniteChannel load_channel_file(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("channel file '" + path + "': " + e.what());
  }
  return parse_channel_json(j);
}

json channel_to_json(const FiniteChannel& channel) {
  json kraus = json::array();
  for (const auto& k : channel.kraus()) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c) row.push_back({k(r, c).real(), k(r, c).imag()});
      rows.push_back(std::move(row));
    }
    kraus.push_back(std::move(rows));
  }
  return {{"in_dim", channel.in_dim()}, {"out_dim", channel.out_dim()}, {"kraus", kraus}};
}

SweepSpec default_sweep(const std::string& figure) {
  if (figure == "dephasing") return {"p", 0.0, 1.0, 101};
  if (figure == "depolarizing") return {"p", 0.0, 1.0, 101};
  if (figure == "pure-loss") return {"eta", 0.0, 0.99, 100};
  throw ValidationError("unknown figure '" + figure + "' (expected dephasing, depolarizing, pure-loss)");
}

std::vector<double> sweep_points(const SweepSpec& spec) {
  if (spec.points < 2) throw ValidationError("sweep needs at least 2 points");
  if (!(spec.start < spec.stop)) throw ValidationError("sweep needs start < stop");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(spec.points));
  for (int k = 0; k < spec.points; ++k)
    xs.push_back(k == spec.points - 1 ? spec.stop
                                      : spec.start + k * (spec.stop - spec.start) / (spec.points - 1));
  return xs;
}

std::string figure_csv(const std::string& figure, const SweepSpec& spec) {
  default_sweep(figure);  // validates the name
  std::ostringstream csv;
  csv << "param,upper_bound,lower_bound\n";
  for (double x : sweep_points(spec)) {
    double upper = 0.0;
    double lower = 0.0;
    if (figure == "dephasing") {
      upper = dephasing_bound(x);
      lower = reverse_coherent_information(PauliProbabilities::dephasing(x));
    } else if (figure == "depolarizing") {
      upper = depolarizing_bound(x).value;
      lower = reverse_coherent_information(PauliProbabilities::depolarizing(x));
    } else {
      upper = pure_loss_bound_limit(x);
      lower = pure_loss_lower_bound(x);
    }
    csv << format_number(x) << ',' << format_number(upper) << ',' << format_number(lower) << '\n';
  }
  return csv.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Squashed-entanglement bounds on two-way assisted quantum and private capacities"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  std::uint64_t seed = kDefaultSeed;
  app.add_flag("--json", as_json, "Emit the result as JSON");
  app.add_option("--seed", seed, "Random seed for the generic estimator");

  std::function<int()> action;

  std::vector<double> probs;
  std::vector<double> phases;
  int grid = PhaseOptimizerConfig{}.grid_points_per_axis;
  auto* pauli = app.add_subcommand("pauli", "Qubit Pauli channel p0 p1 p2 p3");
  pauli->add_option("probabilities", probs, "p0 p1 p2 p3")->expected(4)->required();
  pauli->add_option("--phases", phases, "Evaluate at fixed phases phi1 phi2 phi3")->expected(3);
  pauli->add_option("--grid", grid, "Grid points per phase axis")->check(CLI::Range(2, 1000));
  pauli->callback([&] {
    action = [&] {
      emit(pauli_command(probs, phases, grid), as_json, out);
      return kExitOk;
    };
  });

  double scalar = 0.0;
  auto* dephasing = app.add_subcommand("dephasing", "Qubit dephasing channel (p, 0, 0, 1-p)");
  dephasing->add_option("p", scalar)->required();
  dephasing->callback([&] {
    action = [&] {
      const double lower = reverse_coherent_information(PauliProbabilities::dephasing(scalar));
      emit(closed_form("dephasing_squashed_entanglement", dephasing_bound(scalar), lower, {{"p", scalar}}),
           as_json, out);
      return kExitOk;
    };
  });

  auto* depolarizing = app.add_subcommand("depolarizing", "Qubit depolarizing channel (1-p) rho + p I/2");
  depolarizing->add_option("p", scalar)->required();
  depolarizing->add_option("--grid", grid, "Grid points per phase axis")->check(CLI::Range(2, 1000));
  depolarizing->callback([&] {
    action = [&] {
      PhaseOptimizerConfig cfg;
      cfg.grid_points_per_axis = grid;
      Rendered r;
      r.result = depolarizing_bound(scalar, cfg);
      const double lower = reverse_coherent_information(PauliProbabilities::depolarizing(scalar));
      r.result.params["lower_bound"] = lower;
      r.lines = {{"upper_bound", r.result.value}, {"lower_bound", lower}};
      emit(r, as_json, out);
      return kExitOk;
    };
  });

  std::optional<double> ns;
  std::optional<double> eta1;
  double second = 0.0;
  auto* pure_loss = app.add_subcommand("pure-loss", "Pure-loss bosonic channel of transmissivity eta");
  pure_loss->add_option("eta", scalar)->required();
  pure_loss->add_option("--ns", ns, "Mean input photon number (finite-energy bound)");
  pure_loss->add_option("--eta1", eta1, "Squashing beamsplitter transmissivity (requires --ns)");
  pure_loss->callback([&] {
    action = [&] {
      if (eta1 && !ns) throw ValidationError("--eta1 requires --ns");
      std::map<std::string, double> params{{"eta", scalar}};
      double upper = 0.0;
      if (ns) {
        params["ns"] = *ns;
        if (eta1) params["eta1"] = *eta1;
        upper = eta1 ? pure_loss_bound_finite(scalar, *eta1, *ns) : pure_loss_bound(scalar, *ns);
      } else {
        upper = pure_loss_bound_limit(scalar);
      }
      emit(closed_form("pure_loss_squashed_entanglement", upper, pure_loss_lower_bound(scalar), params),
           as_json, out);
      return kExitOk;
    };
  });

  auto* thermal = app.add_subcommand("thermal", "Thermal channel: eta and environment photons N_B");
  thermal->add_option("eta", scalar)->required();
  thermal->add_option("nb", second)->required();
  thermal->add_option("--ns", ns, "Mean input photon number (finite-energy bound)");
  thermal->callback([&] {
    action = [&] {
      const auto params = thermal_channel_params(scalar, second);
      const double t = decompose_phase_insensitive(params).transmissivity;
      const double upper = ns ? loss_stage_bound(t, ns) : thermal_bound(scalar, second);
      std::map<std::string, double> p{{"eta", scalar}, {"nb", second}, {"T", t}};
      if (ns) p["ns"] = *ns;
      emit(closed_form("thermal_squashed_entanglement", upper, std::nullopt, p), as_json, out);
      return kExitOk;
    };
  });

  auto* additive = app.add_subcommand("additive", "Additive-noise channel with noise nbar");
  additive->add_option("nbar", scalar)->required();
  additive->add_option("--ns", ns, "Mean input photon number (finite-energy bound)");
  additive->callback([&] {
    action = [&] {
      // tau = 1, nu = 2 nbar in vacuum units
      const double t = decompose_phase_insensitive({1.0, 2.0 * scalar}).transmissivity;
      const double upper = ns ? loss_stage_bound(t, ns) : additive_noise_bound(scalar);
      std::map<std::string, double> p{{"nbar", scalar}, {"T", t}};
      if (ns) p["ns"] = *ns;
      emit(closed_form("additive_noise_squashed_entanglement", upper, std::nullopt, p), as_json, out);
      return kExitOk;
    };
  });

  auto* phase_insensitive =
      app.add_subcommand("phase-insensitive", "Phase-insensitive channel with gain tau and noise nu");
  phase_insensitive->add_option("tau", scalar)->required();
  phase_insensitive->add_option("nu", second)->required();
  phase_insensitive->add_option("--ns", ns, "Mean input photon number (finite-energy bound)");
  phase_insensitive->callback([&] {
    action = [&] {
      const auto d = decompose_phase_insensitive({scalar, second});
      const double upper = loss_stage_bound(d.transmissivity, ns);
      std::map<std::string, double> p{{"tau", scalar}, {"nu", second}, {"T", d.transmissivity}, {"G", d.gain}};
      if (ns) p["ns"] = *ns;
      Rendered r = closed_form("phase_insensitive_squashed_entanglement", upper, std::nullopt, p);
      r.lines.emplace_back("T", d.transmissivity);
      r.lines.emplace_back("G", d.gain);
      emit(r, as_json, out);
      return kExitOk;
    };
  });

  std::string figure_name;
  std::string out_path;
  std::optional<int> points;
  std::optional<double> start;
  std::optional<double> stop;
  auto* figure = app.add_subcommand("figure", "Emit figure data as CSV");
  figure->add_option("name", figure_name, "dephasing | depolarizing | pure-loss")->required();
  figure->add_option("--out", out_path, "Output CSV path (stdout when omitted)");
  figure->add_option("--points", points, "Number of sweep points");
  figure->add_option("--start", start, "Sweep start");
  figure->add_option("--stop", stop, "Sweep stop");
  figure->callback([&] {
    action = [&] {
      SweepSpec spec = default_sweep(figure_name);
      if (points) spec.points = *points;
      if (start) spec.start = *start;
      if (stop) spec.stop = *stop;
      const std::string csv = figure_csv(figure_name, spec);
      if (out_path.empty())
        out << csv;
      else
        write_file(out_path, csv);
      return kExitOk;
    };
  });

  std::string channel_path;
  EstimatorConfig estimator;
  auto* generic = app.add_subcommand("generic", "Variational estimate for a channel given as JSON Kraus operators");
  generic->add_option("channel", channel_path, "Channel JSON file")->required();
  generic->add_option("--restarts", estimator.restarts, "Random restarts per search")->check(CLI::NonNegativeNumber);
  generic->add_option("--alternations", estimator.max_alternations, "Maximum squasher/input alternations")
      ->check(CLI::PositiveNumber);
  generic->add_option("--iterations", estimator.inner_iterations, "Simplex iterations per search")
      ->check(CLI::PositiveNumber);
  generic->add_option("--eprime", estimator.eprime_dim, "Dimension of E' (default: environment)");
  generic->add_option("--fdim", estimator.f_dim, "Dimension of F (default: environment)");
  generic->callback([&] {
    action = [&] {
      const FiniteChannel channel = load_channel_file(channel_path);
      estimator.seed = seed;
      Rendered r;
      r.result = estimate_channel_bound(channel, estimator);
      r.lines = {{"upper_bound", r.result.value}};
      emit(r, as_json, out);
      return kExitOk;
    };
  });

  auto* self = app.add_subcommand("selftest", "Run built-in consistency checks");
  self->callback([&] { action = [&] { return selftest(out); }; });

  std::vector<const char*> argv{"sqe"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    return action ? action() : kExitInputError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace sqe::cli
