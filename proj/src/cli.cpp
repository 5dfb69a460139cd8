#include "packs/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "packs/config.hpp"
#include "packs/covering.hpp"
#include "packs/io.hpp"
#include "packs/stability.hpp"

namespace packs::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
};

class ConfigFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig load_config(const CommonOptions& o) {
  std::string text;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) throw ConfigFailure("cannot read config file " + o.config_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto parsed = parse_config(ss.str());
    if (!parsed.ok()) throw ConfigFailure(o.config_path + ":\n" + format_errors(parsed.errors));
    text = render_config(*parsed.config);
  } else {
    text = render_config(RunConfig{});
  }
  if (!o.overrides.empty()) {
    auto parsed = parse_config(apply_overrides(text, o.overrides));
    if (!parsed.ok()) throw ConfigFailure("after --set overrides:\n" + format_errors(parsed.errors));
    text = render_config(*parsed.config);
  }
  auto cfg = *parse_config(text).config;
  if (!o.out_dir.empty()) cfg.output.directory = o.out_dir;
  return cfg;
}

Field initial_state(const RunConfig& cfg, const std::string& init_path, const std::string& perturb, double amplitude) {
  if (!init_path.empty()) {
    std::ifstream in(init_path);
    if (!in) throw ConfigFailure("cannot read snapshot " + init_path);
    auto [p, f] = io::snapshot_from_json(nlohmann::json::parse(in));
    if (f.components() != cfg.model.N + 1) throw ConfigFailure("snapshot component count does not match model N");
    return f;
  }
  if (perturb == "none") return Field::broadcast(cfg.domain, constant_coexistence_state(cfg.model).expand());
  const auto kind = perturb == "noise" ? PerturbationKind::Noise : PerturbationKind::EigenDirection;
  return perturbed_constant(cfg.model, cfg.domain, kind, amplitude, derive_seed(cfg.solver.seed, "init", {}));
}

void write_manifest(const RunConfig& cfg, const std::string& sub) {
  io::write_text(fs::path(cfg.output.directory) / "manifest.json", io::manifest(cfg, sub).dump(2) + "\n");
}

int cmd_constant(const RunConfig& cfg, std::ostream& out) {
  const auto& p = cfg.model;
  const auto c = constant_coexistence_state(p);
  const auto state = c.expand();
  std::vector<double> r(state.size());
  reaction_terms(p, state, r);
  double res = 0.0;
  for (double x : r) res = std::max(res, std::abs(x));
  const auto pop = total_population(p, cfg.domain.volume());
  out << "N = " << p.N << "\n"
      << "w = " << io::fmt(c.w) << "\n"
      << "u = " << io::fmt(c.u) << "\n"
      << "residual = " << io::fmt(res) << "\n"
      << "W_N = " << io::fmt(pop.packs_total) << "\n"
      << "W_1 = " << io::fmt(pop.single_total) << "\n"
      << "ratio = " << io::fmt(pop.ratio) << "\n"
      << "stability = " << to_string(classify_constant_stability(p).label) << "\n";
  return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg, double nu, std::ostream& out) {
  const auto closed = nu > 0.0 ? mode_spectrum(cfg.model, nu) : spectrum_closed_form(cfg.model);
  const auto numeric = spectrum_numeric(mode_block(cfg.model, nu));
  std::ostringstream csv;
  io::write_spectrum_csv(csv, closed, numeric);
  out << csv.str();
  io::write_text(fs::path(cfg.output.directory) / "spectrum.csv", csv.str());
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, const std::string& init, const std::string& perturb, double amplitude,
               std::ostream& out, std::ostream& err) {
  EvolveOptions opt;
  opt.horizon = cfg.solver.T;
  opt.dt = cfg.solver.dt;
  opt.steady_tol = cfg.solver.steady_tol;
  const fs::path dir(cfg.output.directory);
  try {
    auto rep = evolve(cfg.model, initial_state(cfg, init, perturb, amplitude), opt);
    std::ostringstream hist;
    io::write_history_csv(hist, rep.residual_history);
    io::write_text(dir / "history.csv", hist.str());
    io::write_text(dir / "state.json", io::snapshot_to_json(cfg.model, rep.final).dump() + "\n");
    write_manifest(cfg, "evolve");
    const auto cls = classify_solution(rep.final, cfg.solver.flatness_tol, rep.converged);
    out << "steps = " << rep.steps << "\ntime = " << io::fmt(rep.time) << "\nconverged = " << rep.converged
        << "\nresidual = " << io::fmt(rep.final_residual) << "\nlabel = " << to_string(cls.label)
        << "\nflatness = " << io::fmt(cls.flatness) << "\nbound_violations = " << rep.bound_violations.size()
        << "\nclamp_events = " << rep.clamp_events << "\n";
    return kExitOk;
  } catch (const NonFiniteState& e) {
    io::write_text(dir / "state.json", io::snapshot_to_json(cfg.model, e.last_finite()).dump() + "\n");
    err << "evolve: " << e.what() << "\n";
    return kExitNoConvergence;
  }
}

int cmd_steady(const RunConfig& cfg, const std::string& init, const std::string& perturb, double amplitude,
               std::ostream& out, std::ostream& err) {
  NewtonOptions opt;
  opt.max_iters = cfg.solver.newton_max_iters;
  opt.tol = cfg.solver.steady_tol;
  const auto res = newton_steady(PackSystem(cfg.model), initial_state(cfg, init, perturb, amplitude), opt);
  const fs::path dir(cfg.output.directory);
  io::write_text(dir / "steady.json", io::snapshot_to_json(cfg.model, res.state).dump() + "\n");
  write_manifest(cfg, "steady");
  const auto cls = classify_solution(res.state, cfg.solver.flatness_tol, res.converged);
  out << "converged = " << res.converged << "\niterations = " << res.iterations
      << "\nresidual = " << io::fmt(res.residual) << "\nlabel = " << to_string(cls.label)
      << "\nflatness = " << io::fmt(cls.flatness) << "\n";
  if (cfg.model.beta > 0.0 && res.converged) {
    out << "ordering_violations = " << ordering_rigidity_probe(res.state, 1e-6).size() << "\n";
  }
  if (!res.converged) {
    err << "steady: no convergence: " << res.diagnostic << "\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, bool svg, bool timing, std::ostream& out) {
  const auto result = run_sweep(cfg.model, cfg.sweep.beta_grid, cfg.sweep.N_grid, cfg.domain, protocol_from(cfg),
                                cfg.solver.seed, cfg.sweep.threads);
  const auto thresholds = estimate_thresholds(result);
  const fs::path dir(cfg.output.directory);
  std::ostringstream csv, th;
  io::write_sweep_csv(csv, result, timing);
  io::write_thresholds_csv(th, result, thresholds);
  io::write_text(dir / "sweep.csv", csv.str());
  io::write_text(dir / "thresholds.csv", th.str());
  if (svg) {
    std::ostringstream s;
    io::write_sweep_svg(s, result);
    io::write_text(dir / "sweep.svg", s.str());
  }
  write_manifest(cfg, "sweep");
  out << csv.str() << th.str();
  return kExitOk;
}

int cmd_cover(const RunConfig& cfg, std::size_t n, std::size_t count, double radius, std::size_t trials,
              std::optional<std::uint64_t> seed, std::ostream& out) {
  const std::uint64_t master = seed.value_or(cfg.solver.seed);
  std::ostringstream csv;
  csv << "trial,m,bound,ok\n";
  bool all_ok = true;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(master, "cover", {t}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> pts(count, std::vector<double>(n));
    for (auto& p : pts) {
      for (auto& x : p) x = unit(rng);
    }
    const PointCloud cloud(n, std::move(pts));
    const auto best = max_overlap(cloud, radius, 20000, derive_seed(master, "cover-sample", {t}));
    const double bound = covering_lower_bound(count, radius, cloud.diam(), n);
    const bool ok = static_cast<double>(best.depth) >= std::ceil(bound);
    all_ok = all_ok && ok;
    csv << t << ',' << best.depth << ',' << io::fmt(bound) << ',' << (ok ? "true" : "false") << '\n';
  }
  out << csv.str();
  io::write_text(fs::path(cfg.output.directory) / "cover.csv", csv.str());
  return all_ok ? kExitOk : kExitNoConvergence;
}

int cmd_identity(const RunConfig& cfg, double beta_eff, const std::string& pairing, std::ostream& out,
                 std::ostream& err) {
  const ReducedSystem sys(cfg.model, beta_eff,
                          pairing == "matched" ? DiffusivityPairing::Matched : DiffusivityPairing::Crossed);
  const auto star = sys.coexistence();
  const Grid& g = cfg.domain;
  Field guess(g, 2);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.center(0, j % g.cells(0));
    guess.at(0, j) = star.H * (1.0 + 0.1 * std::cos(std::numbers::pi * x / g.length(0)));
    guess.at(1, j) = star.u;
  }
  NewtonOptions opt;
  opt.max_iters = cfg.solver.newton_max_iters;
  opt.tol = cfg.solver.steady_tol;
  const auto res = newton_steady(sys, guess, opt);
  out << "h = " << io::fmt(star.H) << "\nu_star = " << io::fmt(star.u) << "\nconverged = " << res.converged
      << "\niterations = " << res.iterations << "\nresidual = " << io::fmt(res.residual) << "\n";
  if (!res.converged) {
    err << "identity: no convergence: " << res.diagnostic << "\n";
    return kExitNoConvergence;
  }
  const auto iv = mimura_identity_check(sys, res.state);
  out << "I_reaction = " << io::fmt(iv.reaction) << "\nI_dirichlet = " << io::fmt(iv.dirichlet)
      << "\ndifference = " << io::fmt(std::abs(iv.reaction - iv.dirichlet)) << "\n";
  return kExitOk;
}

}  // namespace

std::string apply_overrides(const std::string& text, const std::vector<std::string>& assignments) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
  }
  for (const auto& a : assignments) {
    const auto dot = a.find('.');
    const auto eq = a.find('=');
    if (dot == std::string::npos || eq == std::string::npos || dot > eq) {
      throw ConfigFailure("--set expects section.key=value, got '" + a + "'");
    }
    const std::string section = a.substr(0, dot);
    const std::string key = a.substr(dot + 1, eq - dot - 1);
    const std::string value = a.substr(eq + 1);
    std::string current;
    std::size_t header = lines.size();
    bool replaced = false;
    for (std::size_t i = 0; i < lines.size() && !replaced; ++i) {
      const auto& l = lines[i];
      if (!l.empty() && l.front() == '[') {
        current = l.substr(1, l.find(']') - 1);
        if (current == section) header = i;
        continue;
      }
      if (current != section) continue;
      const auto e = l.find('=');
      if (e == std::string::npos) continue;
      std::string k = l.substr(0, e);
      k.erase(k.find_last_not_of(" \t") + 1);
      if (k == key) {
        lines[i] = key + " = " + value;
        replaced = true;
      }
    }
    if (!replaced) {
      if (header == lines.size()) {
        lines.push_back("[" + section + "]");
        lines.push_back(key + " = " + value);
      } else {
        lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(header) + 1, key + " = " + value);
      }
    }
  }
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for N competing predator packs sharing one prey", "packlab"};
  app.require_subcommand(1);
  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", common.config_path, "INI config file");
    sub->add_option("--set", common.overrides, "Override section.key=value (repeatable)");
    sub->add_option("-o,--out", common.out_dir, "Output directory");
  };

  auto* constant = app.add_subcommand("constant", "Constant coexistence state, residual and population ratio");
  auto* spectrum = app.add_subcommand("spectrum", "Closed-form and numeric linearization spectrum as CSV");
  auto* evolve_cmd = app.add_subcommand("evolve", "Time-march the parabolic system");
  auto* steady = app.add_subcommand("steady", "Newton solve for a steady state");
  auto* sweep = app.add_subcommand("sweep", "Classify steady states over the (beta, N) plane");
  auto* cover = app.add_subcommand("cover", "Randomised check of the ball-covering bound");
  auto* identity = app.add_subcommand("identity", "Energy identity diagnostic on the reduced (H, u) system");
  for (auto* s : {constant, spectrum, evolve_cmd, steady, sweep, cover, identity}) add_common(s);

  double nu = 0.0;
  spectrum->add_option("--nu", nu, "Neumann Laplacian eigenvalue of the spatial mode")->check(CLI::NonNegativeNumber);

  std::string init, perturb = "eigen";
  double amplitude = 1e-3;
  for (auto* s : {evolve_cmd, steady}) {
    s->add_option("--init", init, "Initial state snapshot (JSON)");
    s->add_option("--perturb", perturb, "Start perturbation when no snapshot is given")
        ->check(CLI::IsMember({"eigen", "noise", "none"}));
    s->add_option("--amplitude", amplitude, "Relative perturbation amplitude");
  }

  bool svg = false, timing = false;
  sweep->add_flag("--svg", svg, "Also write sweep.svg");
  sweep->add_flag("--timing", timing, "Record wall-clock runtime_s (breaks byte-reproducibility)");

  std::size_t cn = 2, ccount = 100, ctrials = 10;
  double cradius = 0.1;
  std::optional<std::uint64_t> cseed;
  cover->add_option("--n", cn, "Ambient dimension")->check(CLI::Range(1, 16));
  cover->add_option("--count", ccount, "Number of balls")->check(CLI::PositiveNumber);
  cover->add_option("--radius", cradius, "Ball radius")->check(CLI::PositiveNumber);
  cover->add_option("--trials", ctrials, "Number of random clouds");
  cover->add_option("--seed", cseed, "Master seed (defaults to solver.seed)");

  double beta_eff = 1.0;
  std::string pairing = "crossed";
  identity->add_option("--beta-eff", beta_eff, "Competition coefficient of the reduced system")
      ->check(CLI::NonNegativeNumber);
  identity->add_option("--pairing", pairing, "Diffusivity pairing")->check(CLI::IsMember({"crossed", "matched"}));

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitConfigError;
  }

  try {
    const RunConfig cfg = load_config(common);
    if (constant->parsed()) return cmd_constant(cfg, out);
    if (spectrum->parsed()) return cmd_spectrum(cfg, nu, out);
    if (evolve_cmd->parsed()) return cmd_evolve(cfg, init, perturb, amplitude, out, err);
    if (steady->parsed()) return cmd_steady(cfg, init, perturb, amplitude, out, err);
    if (sweep->parsed()) return cmd_sweep(cfg, svg, timing, out);
    if (cover->parsed()) return cmd_cover(cfg, cn, ccount, cradius, ctrials, cseed, out);
    if (identity->parsed()) return cmd_identity(cfg, beta_eff, pairing, out, err);
  } catch (const ConfigFailure& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "bad snapshot: " << e.what() << "\n";
    return kExitConfigError;
  }
  err << app.help();
  return kExitConfigError;
}

}  // namespace packs::cli
