#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "uamo/determinants.hpp"
#include "uamo/green.hpp"
#include "uamo/harness.hpp"
#include "uamo/spectral.hpp"

namespace uamo {

namespace {

const std::vector<std::string> kCommands = {"spectrum", "lyapunov", "detpoly", "cocycle-check", "green",
                                            "localize", "certificate", "evolve", "arith", "sweep"};
const std::vector<std::string> kSweepParams = {"l1", "l2", "theta", "omega", "epsilon", "N", "T", "n", "z_phase"};
const std::vector<std::string> kKinds = {"all", "szego1", "szego2", "gz", "gz2", "standard"};
const std::vector<std::string> kRoutes = {"lu", "cmv", "sze1", "sze2"};
const std::vector<std::string> kMethods = {"dense", "roots"};

bool member(const std::vector<std::string>& set, const std::string& s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

CLI::App& build_app(CLI::App& app, ExperimentConfig& c) {
  app.add_option("command", c.command, "One of: " + join(kCommands))->required();
  app.add_option("--l1", c.lambda1, "lambda1 in [0, 1]")->check(CLI::Range(0.0, 1.0));
  app.add_option("--l2", c.lambda2, "lambda2 in [0, 1]")->check(CLI::Range(0.0, 1.0));
  app.add_option("--omega", c.omega_spec, "golden, silver, p/q or a decimal");
  app.add_option("--theta", c.theta, "phase");
  app.add_option("--N", c.N, "window size or iteration count");
  app.add_option("--T", c.T, "evolution steps")->check(CLI::NonNegativeNumber);
  app.add_option("--record-every", c.record_every, "evolution sampling stride");
  app.add_option("--n", c.n, "degree index for detpoly");
  app.add_option("--grid", c.grid, "quadrature or DFT grid, 0 for default");
  app.add_option("--samples", c.samples, "theta samples for lyapunov");
  app.add_option("--trials", c.trials, "random draws for check commands");
  app.add_option("--depth", c.depth, "continued fraction depth");
  app.add_option("--epsilon", c.epsilon, "scheme epsilon");
  app.add_option("--y-lo", c.y_lo, "first probed y");
  app.add_option("--y-hi", c.y_hi, "last probed y");
  app.add_option("--y-step", c.y_step, "y stride");
  app.add_option("--z-phase", c.z_phase, "z = exp(2 pi i phase); negative picks a spectral point");
  app.add_option("--kind", c.kind, "cocycle kind: " + join(kKinds));
  app.add_option("--route", c.route, "determinant route: " + join(kRoutes));
  app.add_option("--method", c.method, "spectrum method: " + join(kMethods));
  app.add_option("--seed", c.seed, "64-bit base seed");
  app.add_option("--sweep-command", c.sweep_command, "command mapped over the grid");
  app.add_option("--sweep-param", c.sweep_param, "swept parameter: " + join(kSweepParams));
  app.add_option("--sweep-values", c.sweep_values, "comma separated grid")->delimiter(',');
  app.add_option("--threads", c.threads, "worker count, 0 for available parallelism");
  app.add_option("-o,--output", c.output, "output file");
  app.add_option("--format", c.format, "csv or json")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"csv", OutputFormat::Csv},
                                                                              {"json", OutputFormat::Json}}));
  app.set_config("--config", "", "TOML or INI file; flags on the command line win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  return app;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e = {
      {"command", command},
      {"lambda1", fmt(lambda1)},
      {"lambda2", fmt(lambda2)},
      {"lambda1p", fmt(std::sqrt(1.0 - lambda1 * lambda1))},
      {"lambda2p", fmt(std::sqrt(1.0 - lambda2 * lambda2))},
      {"omega_spec", omega_spec},
      {"omega", fmt(omega)},
      {"theta", fmt(theta)},
      {"N", std::to_string(N)},
      {"T", std::to_string(T)},
      {"record_every", std::to_string(record_every)},
      {"n", std::to_string(n)},
      {"grid", std::to_string(grid)},
      {"samples", std::to_string(samples)},
      {"trials", std::to_string(trials)},
      {"depth", std::to_string(depth)},
      {"epsilon", fmt(epsilon)},
      {"y_lo", std::to_string(y_lo)},
      {"y_hi", std::to_string(y_hi)},
      {"y_step", std::to_string(y_step)},
      {"z_phase", fmt(z_phase)},
      {"kind", kind},
      {"route", route},
      {"method", method},
      {"seed", std::to_string(seed)},
      {"format", format == OutputFormat::Csv ? "csv" : "json"},
  };
  if (command == "sweep") {
    std::string vals;
    for (double v : sweep_values) vals += (vals.empty() ? "" : ";") + fmt(v);
    e.emplace_back("sweep_command", sweep_command);
    e.emplace_back("sweep_param", sweep_param);
    e.emplace_back("sweep_values", vals);
  }
  return e;
}

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(member(kCommands, command), "unknown command '" + command + "'; use one of: " + join(kCommands));
  need(lambda1 >= 0.0 && lambda1 <= 1.0, "--l1 out of range; pass a value in [0, 1]");
  need(lambda2 >= 0.0 && lambda2 <= 1.0, "--l2 out of range; pass a value in [0, 1]");
  need(omega >= 0.0 && omega < 1.0, "--omega must reduce to [0, 1); pass a fractional frequency");
  need(std::isfinite(theta), "--theta must be finite");
  need(N >= 2, "--N must be at least 2");
  need(T >= 0, "--T must be non-negative");
  need(record_every >= 1, "--record-every must be at least 1");
  need(n >= 1, "--n must be at least 1");
  need(grid >= 0, "--grid must be non-negative; 0 selects the default");
  need(samples >= 1, "--samples must be at least 1");
  need(trials >= 1, "--trials must be at least 1");
  need(depth >= 1 && depth <= 90, "--depth must lie in [1, 90]");
  need(epsilon > 0.0 && epsilon < 1.0, "--epsilon must lie in (0, 1)");
  need(y_lo >= 1 && y_lo <= y_hi, "--y-lo must be positive and not exceed --y-hi");
  need(y_step >= 1, "--y-step must be at least 1");
  need(member(kKinds, kind), "unknown --kind; use one of: " + join(kKinds));
  need(member(kRoutes, route), "unknown --route; use one of: " + join(kRoutes));
  need(member(kMethods, method), "unknown --method; use one of: " + join(kMethods));
  if (command == "spectrum" && method == "dense") need(N <= 4096, "dense spectrum needs --N <= 4096; use --method roots");
  const bool sweep_given = !sweep_command.empty() || !sweep_param.empty() || !sweep_values.empty();
  if (command == "sweep") {
    need(member(kCommands, sweep_command) && sweep_command != "sweep",
         "sweep needs --sweep-command naming a non-sweep command");
    need(member(kSweepParams, sweep_param), "sweep needs --sweep-param, one of: " + join(kSweepParams));
    need(!sweep_values.empty(), "sweep needs --sweep-values, e.g. 0.6,0.7,0.8");
  } else {
    need(!sweep_given, "--sweep-* options conflict with command '" + command + "'; use the sweep command");
  }
}

ExperimentConfig parse_config(int argc, const char* const* argv) {
  ExperimentConfig c;
  CLI::App app{"uamo-lab"};
  build_app(app, c);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw ConfigError(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string(e.what()) + "; run with --help for accepted values");
  }
  try {
    c.omega = parse_frequency(c.omega_spec);
  } catch (const Error& e) {
    throw ConfigError(std::string("--omega: ") + e.what() + "; use golden, silver, p/q or a decimal");
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"uamo-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_config(static_cast<int>(argv.size()), argv.data());
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t x = seed + (counter + 1) * 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

ModelParams params_of(const ExperimentConfig& c) { return ModelParams::make(c.lambda1, c.lambda2, c.omega, c.theta); }

double uniform(std::mt19937_64& g) { return std::uniform_real_distribution<double>(0.0, 1.0)(g); }

Complex spectral_or_fixed_z(const ExperimentConfig& c, const ModelParams& p) {
  if (c.z_phase >= 0.0) return on_circle(c.z_phase);
  const Spectrum s = truncated_spectrum(p, 500);
  return s.z[s.z.size() / 3];
}

ResultTable cmd_spectrum(const ExperimentConfig& c) {
  const auto method = c.method == "dense" ? SpectrumMethod::Dense : SpectrumMethod::RootIsolation;
  const Spectrum s = truncated_spectrum(params_of(c), c.N, Boundary::fixed(1.0, 1.0), method);
  ResultTable t;
  t.add_column("index");
  t.add_column("phase", "turn");
  t.add_column("re_z");
  t.add_column("im_z");
  t.add_column("circle_deviation");
  for (size_t i = 0; i < s.phases.size(); ++i)
    t.add_row({static_cast<double>(i), s.phases[i], s.z[i].real(), s.z[i].imag(), std::abs(std::abs(s.z[i]) - 1.0)});
  t.set_meta("count", static_cast<double>(s.phases.size()));
  t.set_meta("complete", s.complete ? "true" : "false");
  t.set_meta("method_used", s.method == SpectrumMethod::Dense ? "dense" : "roots");
  if (!s.complete) ++t.violations;
  return t;
}

ResultTable cmd_lyapunov(const ExperimentConfig& c) {
  const ModelParams p = params_of(c);
  const Complex z = spectral_or_fixed_z(c, p);
  std::vector<CocycleKind> kinds;
  if (c.kind == "all")
    kinds = {CocycleKind::Szego1, CocycleKind::Szego2, CocycleKind::GZ, CocycleKind::GZ2, CocycleKind::Standard};
  else
    kinds = {cocycle_kind_from_string(c.kind)};
  ResultTable t;
  t.add_column("kind");
  t.add_column("steps");
  t.add_column("mean");
  t.add_column("stderr");
  t.add_column("per_two_sites");
  t.add_column("closed_form");
  const double closed = lyapunov_closed_form(p);
  for (CocycleKind k : kinds) {
    // Same site count for every kind.
    const long steps = c.N * 2 / sites_per_step(k);
    const LyapunovEstimate e = lyapunov_estimate(p, k, z, steps, static_cast<int>(c.samples));
    t.add_row({static_cast<double>(static_cast<int>(k)), static_cast<double>(steps), e.mean, e.stderr_,
               e.mean * 2.0 / e.sites_per_step, closed});
  }
  t.set_meta("kind_codes", "0=szego1;1=szego2;2=gz;3=gz2;4=standard");
  t.set_meta("z_re", z.real());
  t.set_meta("z_im", z.imag());
  return t;
}

ResultTable cmd_detpoly(const ExperimentConfig& c) {
  const ModelParams p = params_of(c);
  ResultTable t;
  t.add_column("trial");
  t.add_column("z_phase", "turn");
  t.add_column("tail_mass");
  t.add_column("evenness_residual");
  for (long k = 0; k < c.trials; ++k) {
    std::mt19937_64 g(sub_seed(c.seed, static_cast<std::uint64_t>(k)));
    const double ph = uniform(g);
    const SinePolynomialReport r = sine_polynomial_check(p, c.n, on_circle(ph), c.grid);
    t.add_row({static_cast<double>(k), ph, r.tail_mass, r.evenness_residual});
    if (r.tail_mass > 1e-8 || r.evenness_residual > 1e-10) ++t.violations;
  }
  return t;
}

ResultTable cmd_cocycle_check(const ExperimentConfig& c) {
  ResultTable t;
  t.add_column("trial");
  t.add_column("lambda1");
  t.add_column("lambda2");
  t.add_column("theta", "turn");
  t.add_column("z_phase", "turn");
  t.add_column("r_ss");
  t.add_column("r_a");
  for (long k = 0; k < c.trials; ++k) {
    std::mt19937_64 g(sub_seed(c.seed, static_cast<std::uint64_t>(k)));
    const double l1 = 0.05 + 0.9 * uniform(g), l2 = 0.05 + 0.9 * uniform(g);
    const double th = uniform(g), ph = uniform(g);
    const ModelParams p = ModelParams::make(l1, l2, c.omega, th);
    const ConjugacyResiduals r = conjugacy_residuals(p, th, on_circle(ph));
    t.add_row({static_cast<double>(k), l1, l2, th, ph, r.r1, r.r2});
    if (std::max(r.r1, r.r2) > 1e-12) ++t.violations;
  }
  return t;
}

ResultTable cmd_green(const ExperimentConfig& c) {
  const ModelParams p = params_of(c);
  const Complex z = on_circle(c.z_phase >= 0.0 ? c.z_phase : 0.25);
  ResultTable t;
  t.add_column("y");
  t.add_column("edge");
  t.add_column("direct_abs");
  t.add_column("cramer_abs");
  t.add_column("literal_abs");
  t.add_column("relative_error");
  const long stride = std::max(1L, c.N / 40);
  for (long y = 1; y <= c.N; y += stride) {
    for (Edge e : {Edge::Left, Edge::Right}) {
      double d = NAN, cr = NAN, lit = NAN, rel = NAN;
      try {
        const GreenEntry g = green_entry(p, 1, c.N, z, y, e);
        d = std::abs(g.direct);
        cr = g.cramer_abs;
        lit = g.literal_abs;
        rel = std::abs(cr - d) / std::max(d, 1e-300);
        if (rel > 1e-10) ++t.violations;
      } catch (const SingularWindow&) {
      } catch (const IdentityInapplicable&) {
      }
      t.add_row({static_cast<double>(y), e == Edge::Left ? 0.0 : 1.0, d, cr, lit, rel});
    }
  }
  t.set_meta("edge_codes", "0=left;1=right");
  return t;
}

EigenPair central_pair(const ExperimentConfig& c, const ModelParams& p) {
  const double ph = central_eigenphase(p, c.N / 2);
  return eigenpair_extract(p, c.N, ph);
}

ResultTable cmd_localize(const ExperimentConfig& c) {
  const ModelParams p = params_of(c);
  const EigenPair e = central_pair(c, p);
  ResultTable t;
  t.add_column("y");
  t.add_column("log_abs");
  t.add_column("log_pair");
  for (long y = e.a; y <= e.b; ++y)
    t.add_row({static_cast<double>(y), e.log_abs_at(y), y < e.b ? e.log_pair_amplitude(y) : NAN});
  t.set_meta("phase", e.phase);
  t.set_meta("residual", e.residual);
  t.set_meta("center", static_cast<double>(e.center));
  t.set_meta("target_slope", -lyapunov_closed_form(p) / 2.0);
  try {
    const DecayFit f = decay_rate_fit(e);
    t.set_meta("slope", f.slope);
    t.set_meta("r2", f.r2);
    t.set_meta("flagged_no_decay", f.flagged_no_decay ? "true" : "false");
  } catch (const UninformativeFit& ex) {
    t.set_meta("fit", ex.what());
  }
  if (e.residual > 1e-9) ++t.violations;
  return t;
}

ResultTable cmd_certificate(const ExperimentConfig& c) {
  const ModelParams p = params_of(c);
  const EigenPair e = central_pair(c, p);
  ResultTable t;
  for (const char* col : {"y", "h", "x1", "x2", "margin_P", "margin_nu1", "margin_nu2", "margin_nu3", "contraction",
                          "contraction_reference", "I2_margin_P", "passed"})
    t.add_column(col);
  std::string unavailable;
  for (long y = c.y_lo; y <= c.y_hi; y += c.y_step) {
    try {
      const LocalizationCertificate r = certificate_replay(p, e, y, c.epsilon);
      t.add_row({static_cast<double>(y), static_cast<double>(r.scheme.h), static_cast<double>(r.x1),
                 static_cast<double>(r.x2), r.margin_P, r.margin_nu1, r.margin_nu2, r.margin_nu3, r.contraction,
                 r.contraction_reference, r.I2_margin_P, r.passed ? 1.0 : 0.0});
      t.set_meta("L", r.L);
      t.set_meta("translation", static_cast<double>(r.translation));
      if (r.hypothesis && !r.passed) ++t.violations;
    } catch (const SchemeUnavailable& ex) {
      unavailable += (unavailable.empty() ? "" : ";") + std::to_string(y) + "->" + std::to_string(ex.nearest_valid_y);
    }
  }
  t.set_meta("phase", e.phase);
  t.set_meta("center", static_cast<double>(e.center));
  t.set_meta("translation_convention", "x_abs = 2 floor(center / 2) + x_rel");
  if (!unavailable.empty()) t.set_meta("unavailable_y", unavailable);
  return t;
}

ResultTable cmd_evolve(const ExperimentConfig& c) {
  const SpreadSeries s = evolve_moments(params_of(c), c.N, c.T, c.record_every);
  ResultTable t;
  t.add_column("t", "step");
  t.add_column("x2", "site^2");
  for (size_t i = 0; i < s.times.size(); ++i) t.add_row({static_cast<double>(s.times[i]), s.x2[i]});
  t.set_meta("truncated", s.truncated ? "true" : "false");
  if (s.truncated) ++t.violations;
  if (s.times.size() >= 30) {
    const SpreadTrend tr = spread_trend(s);
    t.set_meta("slope_raw", tr.raw.slope);
    t.set_meta("r2_raw", tr.raw.r2);
    t.set_meta("slope_time_average", tr.cesaro.slope);
  }
  return t;
}

ResultTable cmd_arith(const ExperimentConfig& c) {
  const ContinuedFraction cf = continued_fraction(c.omega, static_cast<int>(c.depth));
  ResultTable t;
  t.add_column("k");
  t.add_column("a_k");
  t.add_column("p_k");
  t.add_column("q_k");
  t.add_column("q_norm");
  for (size_t k = 0; k < cf.a.size(); ++k)
    t.add_row({static_cast<double>(k), static_cast<double>(cf.a[k]), static_cast<double>(cf.p[k]),
               static_cast<double>(cf.q[k]), orbit_torus_norm(static_cast<long>(cf.q[k]), c.omega)});
  t.set_meta("rational", cf.rational ? "true" : "false");
  t.set_meta("precision_limited", cf.precision_limited ? "true" : "false");
  const ResonanceReport r = resonance_exponent(c.omega, c.theta, c.grid > 0 ? c.grid : 720);
  t.set_meta("resonance_partial_sup", r.partial_sup);
  t.set_meta("resonance_infinite", r.infinite ? "true" : "false");
  std::int64_t q = 0;
  for (auto qk : cf.q)
    if (qk >= 3 && qk <= 10000) q = qk;
  if (q > 0) {
    const TrigProductBound b = trig_product_bound(c.omega, c.theta, q);
    t.set_meta("trig_q", static_cast<double>(q));
    t.set_meta("trig_sum", b.sum);
    t.set_meta("trig_ratio", b.ratio);
  }
  try {
    const LocalizationScheme sc = localization_scheme(c.y_lo, c.omega, c.epsilon);
    const long n = sc.h / 2;
    std::vector<double> nodes;
    for (const OddInterval& I : {sc.I1, sc.I2})
      for (long x : I.odd())
        if (static_cast<long>(nodes.size()) <= n) nodes.push_back(frac(c.theta + static_cast<double>((x - 1) / 2) * c.omega));
    if (static_cast<long>(nodes.size()) == n + 1) {
      UniformityOptions half;
      half.z_lo = 0.0;
      t.set_meta("kappa_n", static_cast<double>(n));
      t.set_meta("kappa_hat", kappa_uniformity(nodes, n, c.omega).kappa_hat);
      t.set_meta("kappa_hat_z01", kappa_uniformity(nodes, n, c.omega, half).kappa_hat);
    }
  } catch (const SchemeUnavailable&) {
    t.set_meta("kappa_n", "unavailable");
  } catch (const DegenerateNodes&) {
    t.set_meta("kappa_n", "degenerate");
  }
  return t;
}

ResultTable run_single(const ExperimentConfig& c) {
  const std::string& k = c.command;
  if (k == "spectrum") return cmd_spectrum(c);
  if (k == "lyapunov") return cmd_lyapunov(c);
  if (k == "detpoly") return cmd_detpoly(c);
  if (k == "cocycle-check") return cmd_cocycle_check(c);
  if (k == "green") return cmd_green(c);
  if (k == "localize") return cmd_localize(c);
  if (k == "certificate") return cmd_certificate(c);
  if (k == "evolve") return cmd_evolve(c);
  if (k == "arith") return cmd_arith(c);
  throw ConfigError("unknown command '" + k + "'");
}

ExperimentConfig with_param(ExperimentConfig c, const std::string& name, double v) {
  if (name == "l1") c.lambda1 = v;
  else if (name == "l2") c.lambda2 = v;
  else if (name == "theta") c.theta = v;
  else if (name == "omega") {
    c.omega = v;
    c.omega_spec = fmt(v);
  } else if (name == "epsilon") c.epsilon = v;
  else if (name == "N") c.N = std::lround(v);
  else if (name == "T") c.T = std::lround(v);
  else if (name == "n") c.n = std::lround(v);
  else if (name == "z_phase") c.z_phase = v;
  return c;
}

ResultTable cmd_sweep(const ExperimentConfig& c) {
  const size_t jobs = c.sweep_values.size();
  std::vector<ExperimentConfig> cfgs;
  for (size_t i = 0; i < jobs; ++i) {
    ExperimentConfig s = with_param(c, c.sweep_param, c.sweep_values[i]);
    s.command = c.sweep_command;
    s.sweep_command.clear();
    s.sweep_param.clear();
    s.sweep_values.clear();
    s.seed = sub_seed(c.seed, i);
    s.validate();
    cfgs.push_back(std::move(s));
  }
  std::vector<ResultTable> out(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < jobs;) {
      try {
        out[i] = run_single(cfgs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned n = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<size_t>(n, jobs));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  ResultTable t;
  t.add_column("grid_index");
  t.add_column(c.sweep_param);
  for (const auto& col : out.front().columns) t.columns.push_back(col);
  for (size_t i = 0; i < jobs; ++i) {
    for (const auto& r : out[i].rows) {
      std::vector<double> row = {static_cast<double>(i), c.sweep_values[i]};
      row.insert(row.end(), r.begin(), r.end());
      t.add_row(std::move(row));
    }
    for (const auto& [k, v] : out[i].metadata) t.set_meta("job" + std::to_string(i) + "." + k, v);
    t.violations += out[i].violations;
  }
  return t;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultTable body = cfg.command == "sweep" ? cmd_sweep(cfg) : run_single(cfg);
  ResultTable t;
  t.set_meta("version", kVersion);
  for (const auto& [k, v] : cfg.echo()) t.set_meta("config." + k, v);
  for (const auto& [k, v] : body.metadata) t.set_meta(k, v);
  t.columns = std::move(body.columns);
  t.rows = std::move(body.rows);
  t.violations = body.violations;
  t.set_meta("violations", static_cast<double>(t.violations));
  return t;
}

std::string write_table(const ResultTable& t, const ExperimentConfig& cfg) {
  const std::string text = cfg.format == OutputFormat::Csv ? emit_csv(t) : emit_json(t);
  std::string path = cfg.output;
  if (path.empty()) {
    if (const char* dir = std::getenv("UAMO_OUTPUT_DIR"); dir && *dir)
      path = (std::filesystem::path(dir) / (cfg.command + (cfg.format == OutputFormat::Csv ? ".csv" : ".json"))).string();
  }
  if (path.empty() || path == "-") {
    std::cout << text;
    return "-";
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open output file " + path);
  f << text;
  return path;
}

int run_cli(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "-h" || a == "--help") {
      ExperimentConfig c;
      CLI::App app{"uamo-lab"};
      std::cout << build_app(app, c).help();
      return 0;
    }
  }
  ExperimentConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "uamo-lab: " << e.what() << '\n';
    return 2;
  }
  try {
    const ResultTable t = run_experiment(cfg);
    const std::string where = write_table(t, cfg);
    if (where != "-") std::cerr << "wrote " << where << '\n';
    if (t.violations > 0) {
      std::cerr << "uamo-lab " << cfg.command << ": " << t.violations << " inequality violation(s)\n";
      return 3;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "uamo-lab " << cfg.command << ": " << e.what() << '\n';
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "uamo-lab " << cfg.command << ": " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "uamo-lab " << cfg.command << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "uamo-lab " << cfg.command << ": internal error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace uamo
