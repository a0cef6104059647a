// gpw: spectra, Poincare inequality checks and sampling/reconstruction
// experiments on weighted graphs.
//
// Exit codes: 0 ok, 1 a contract or inequality failed, 2 usage or input
// error, 3 invalid cover, 4 bandwidth outside the admissible range.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpw/error.hpp"
#include "gpw/frame.hpp"
#include "gpw/io.hpp"
#include "gpw/kernels.hpp"
#include "gpw/lattice.hpp"
#include "gpw/random.hpp"
#include "gpw/spline.hpp"

namespace {

using gpw::io::json;

enum class Level { debug, info, warn, error, off };

Level log_level() {
  const char* env = std::getenv("GPW_LOG");
  const std::string v = env ? env : "warn";
  if (v == "debug") return Level::debug;
  if (v == "info") return Level::info;
  if (v == "error") return Level::error;
  if (v == "off" || v == "quiet") return Level::off;
  return Level::warn;
}

void log(Level lvl, const std::string& msg) {
  static const Level threshold = log_level();
  static const char* names[] = {"debug", "info", "warn", "error"};
  if (lvl >= threshold && lvl != Level::off) std::cerr << "[gpw " << names[static_cast<int>(lvl)] << "] " << msg << "\n";
}

struct Config {
  std::string graph;
  std::string cover = "triples";
  std::string functionals;
  std::optional<double> omega;
  std::vector<double> epsilons;
  std::string method = "frame";
  std::vector<int> k_list;  // empty: command default
  std::string rho = "auto";
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  std::uint64_t seed = 0;
  std::string out;
  std::string signal;
  std::size_t trials = 0;  // 0: command default
  std::string csv;
  std::vector<std::size_t> j0;
  std::size_t n = 30;
  std::string kind = "cycle";
};

int exit_code(const gpw::Error& e) {
  switch (e.code()) {
    case gpw::Errc::parse:
    case gpw::Errc::invalid_argument: return 2;
    case gpw::Errc::invalid_cover: return 3;
    case gpw::Errc::inadmissible: return 4;
    default: return 1;
  }
}

void emit(const Config& cfg, const json& report) {
  const std::string text = gpw::io::dump(report);
  if (cfg.out.empty())
    std::cout << text;
  else
    gpw::io::write_text(cfg.out, text);
}

std::optional<gpw::FunctionalKind> kind_flag(const Config& cfg) {
  if (cfg.functionals.empty()) return std::nullopt;
  return gpw::io::parse_functional_kind(cfg.functionals);
}

gpw::FunctionalSet load_functionals(const Config& cfg, const gpw::WeightedGraph& g) {
  if (cfg.cover == "triples")
    return gpw::io::triple_functionals(g, kind_flag(cfg).value_or(gpw::FunctionalKind::normalized));
  return gpw::io::load_cover(cfg.cover, g, kind_flag(cfg));
}

// ---------------------------------------------------------------------------

int cmd_spectrum(const Config& cfg) {
  const gpw::WeightedGraph g = gpw::io::resolve_graph(cfg.graph);
  log(Level::info, "decomposing N=" + std::to_string(g.size()) + " with " + gpw::kernels::active().name + " kernels");
  json report = gpw::io::to_json(gpw::decompose(g), cfg.omega);
  report["graph"] = cfg.graph;
  report["vertices"] = g.size();
  report["edges"] = g.edge_count();
  emit(cfg, report);
  return 0;
}

int cmd_verify(const Config& cfg) {
  const gpw::WeightedGraph g = gpw::io::resolve_graph(cfg.graph);
  const gpw::FunctionalSet fs = load_functionals(cfg, g);
  const std::vector<double> eps = cfg.epsilons.empty() ? gpw::kDefaultEpsilons : cfg.epsilons;
  std::optional<std::vector<std::size_t>> j0;
  if (!cfg.j0.empty()) j0 = cfg.j0;
  const gpw::CoverPoincare cover_check(fs, j0);

  std::vector<gpw::SingleSetPoincare> local;
  for (std::size_t j = 0; j < fs.count(); ++j)
    local.emplace_back(fs.cover.induced[j], fs.cover.restrict(j, fs.weights[j]), fs.cover.induced_spectra[j]);

  std::vector<gpw::Signal> signals;
  if (!cfg.signal.empty()) {
    signals.push_back(gpw::io::load_signal(cfg.signal, g));
  } else {
    gpw::Rng rng(cfg.seed);
    const std::size_t trials = cfg.trials ? cfg.trials : 100;
    for (std::size_t t = 0; t < trials; ++t) signals.push_back(gpw::random_signal(g.size(), rng));
  }

  gpw::InequalityReport all;
  all.cover_multiplicity = fs.cover.multiplicity;
  for (const auto& f : signals) {
    for (std::size_t j = 0; j < fs.count(); ++j) all.append(local[j].verify(fs.cover.restrict(j, f), eps));
    all.append(cover_check.verify(f, eps));
  }
  log(Level::info, std::to_string(all.checks.size()) + " inequality evaluations");

  json report;
  report["graph"] = cfg.graph;
  report["cover"] = cfg.cover;
  report["functionals"] = gpw::to_string(fs.kind);
  report["subsets"] = fs.count();
  report["seed"] = cfg.seed;
  report["signals"] = signals.size();
  report["epsilons"] = eps;
  report["j0"] = cover_check.j0();
  report["constants"] = gpw::io::to_json(cover_check.constants());
  report["result"] = gpw::io::to_json(all);
  emit(cfg, report);
  if (!all.all_hold()) log(Level::error, "an inequality failed; worst margin " + std::to_string(all.worst_margin()));
  return all.all_hold() ? 0 : 1;
}

double single_epsilon(const Config& cfg, double fallback) {
  if (cfg.epsilons.size() > 1) throw gpw::Error(gpw::Errc::invalid_argument, "give a single --epsilon");
  return cfg.epsilons.empty() ? fallback : cfg.epsilons.front();
}

std::optional<double> rho_flag(const Config& cfg) {
  if (cfg.rho == "auto") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double r = std::stod(cfg.rho, &pos);
    if (pos == cfg.rho.size()) return r;
  } catch (const std::exception&) {
  }
  throw gpw::Error(gpw::Errc::invalid_argument, "--rho must be 'auto' or a number");
}

int cmd_reconstruct(const Config& cfg) {
  if (!cfg.omega) throw gpw::Error(gpw::Errc::invalid_argument, "--omega is required");
  const double omega = *cfg.omega;
  const double eps = single_epsilon(cfg, 0.1);
  if (cfg.method != "frame" && cfg.method != "spline")
    throw gpw::Error(gpw::Errc::invalid_argument, "--method must be frame or spline");
  const gpw::WeightedGraph g = gpw::io::resolve_graph(cfg.graph);
  const gpw::FunctionalSet fs = load_functionals(cfg, g);
  const gpw::SpectralDecomposition d = gpw::decompose(g);
  const gpw::PoincareConstants k = gpw::poincare_constants(fs);
  const double upper = k.lambda_min / ((1.0 + eps) * k.theta_max);
  if (!(omega > 0.0 && omega < upper)) throw gpw::AdmissibilityError(omega, upper);

  std::vector<gpw::Signal> signals;
  if (!cfg.signal.empty()) {
    gpw::Signal f = gpw::io::load_signal(cfg.signal, g);
    if ((f - gpw::pw_project(d, f, omega)).norm() > 1e-9 * std::max(f.norm(), 1e-300))
      throw gpw::Error(gpw::Errc::invalid_argument, "signal is not in PW_omega");
    signals.push_back(std::move(f));
  } else {
    gpw::Rng rng(cfg.seed);
    const std::size_t trials = cfg.trials ? cfg.trials : 1;
    for (std::size_t t = 0; t < trials; ++t) signals.push_back(gpw::random_bandlimited(d, omega, rng));
  }

  json report;
  report["graph"] = cfg.graph;
  report["cover"] = cfg.cover;
  report["functionals"] = gpw::to_string(fs.kind);
  report["method"] = cfg.method;
  report["omega"] = omega;
  report["epsilon"] = eps;
  report["admissible_range"] = {0.0, upper};
  report["seed"] = cfg.seed;
  report["pw_dimension"] = d.band_dimension(omega);
  report["sample_count"] = fs.count();

  bool ok = true;
  std::ostringstream csv;
  json runs = json::array();
  if (cfg.method == "frame") {
    const gpw::FrameSystem sys = gpw::build_frame(fs, d, omega, eps);
    report["A"] = sys.A;
    report["B"] = sys.B;
    report["certificate"] = gpw::io::to_json(*sys.certificate);
    gpw::IterativeOptions io;
    io.rho = rho_flag(cfg);
    io.tol = cfg.tol;
    io.max_iter = cfg.max_iter;
    csv << "trial,iteration,error,bound\n";
    csv.precision(17);
    for (std::size_t t = 0; t < signals.size(); ++t) {
      const gpw::Signal& f = signals[t];
      io.truth = f;
      const gpw::IterativeResult r = gpw::reconstruct_iterative(sys, gpw::analyze(fs, f), io);
      const double fn = f.norm();
      bool trace_ok = r.converged;
      for (std::size_t n = 0; n < r.errors.size(); ++n) {
        const double b = std::pow(r.eta, static_cast<double>(n)) * fn;
        if (r.errors[n] > b + 1e-9) trace_ok = false;
        csv << t << "," << n << "," << r.errors[n] << "," << b << "\n";
      }
      const double dual_error = (gpw::reconstruct_dual(sys, gpw::analyze(fs, f)) - f).norm();
      ok = ok && trace_ok;
      runs.push_back({{"method", "frame"},
                      {"iterations", r.iterations},
                      {"converged", r.converged},
                      {"rho", r.rho},
                      {"eta", r.eta},
                      {"norm_f", fn},
                      {"final_error", r.errors.back()},
                      {"eta_bound", std::pow(r.eta, static_cast<double>(r.iterations)) * fn},
                      {"dual_error", dual_error},
                      {"within_contract", trace_ok}});
    }
  } else {
    const std::vector<int> k_list = cfg.k_list.empty() ? std::vector<int>{1, 2, 4, 8} : cfg.k_list;
    csv << "trial,k,error,bound\n";
    csv.precision(17);
    for (std::size_t t = 0; t < signals.size(); ++t) {
      const gpw::Signal& f = signals[t];
      const gpw::SplineReconstruction r = gpw::spline_reconstruct(fs, d, f, omega, k_list);
      const double fn = f.norm();
      bool bound_ok = true;
      for (const auto& s : r.steps) {
        if (s.bound && s.error > *s.bound + 1e-9 * fn) bound_ok = false;
        csv << t << "," << s.k << "," << s.error << ",";
        if (s.bound) csv << *s.bound;
        csv << "\n";
      }
      ok = ok && bound_ok;
      json run = gpw::io::to_json(r);
      run["norm_f"] = fn;
      run["within_contract"] = bound_ok;
      runs.push_back(std::move(run));
    }
  }
  report["trials"] = std::move(runs);
  report["within_contract"] = ok;
  if (!cfg.csv.empty()) gpw::io::write_text(cfg.csv, csv.str());
  emit(cfg, report);
  return ok ? 0 : 1;
}

int cmd_lattice_demo(const Config& cfg) {
  std::size_t n = cfg.n;
  gpw::LatticeKind kind = cfg.kind == "path" ? gpw::LatticeKind::path : gpw::LatticeKind::cycle;
  if (cfg.kind != "path" && cfg.kind != "cycle") throw gpw::Error(gpw::Errc::invalid_argument, "--kind must be path or cycle");
  if (!cfg.graph.empty()) {
    const auto b = gpw::io::builtin_graph(cfg.graph);
    if (!b) throw gpw::Error(gpw::Errc::invalid_argument, "lattice-demo takes --graph path:N or cycle:N");
    kind = b->first;
    n = b->second;
  }
  const double eps = single_epsilon(cfg, 0.1);
  const gpw::LatticeFixture fix = gpw::triple_cover_fixture(n, kind);
  const double omega = cfg.omega.value_or(0.9 * fix.admissible_upper(eps));

  std::vector<gpw::ReconMethod> methods;
  if (cfg.method == "frame" || cfg.method == "both") methods.push_back(gpw::ReconMethod::frame);
  if (cfg.method == "spline" || cfg.method == "both") methods.push_back(gpw::ReconMethod::spline);
  if (methods.empty()) throw gpw::Error(gpw::Errc::invalid_argument, "--method must be frame, spline or both");

  json experiments = json::array();
  bool ok = true;
  for (auto m : methods) {
    gpw::LatticeOptions opts;
    opts.omega = omega;
    opts.epsilon = eps;
    opts.method = m;
    opts.rho = rho_flag(cfg);
    opts.tol = cfg.tol;
    opts.max_iter = cfg.max_iter;
    opts.trials = cfg.trials ? cfg.trials : 5;
    opts.seed = cfg.seed;
    if (!cfg.k_list.empty()) opts.k_list = cfg.k_list;
    const gpw::LatticeReport r = gpw::run_lattice_experiment(fix, opts);
    ok = ok && r.within_contract;
    json e = gpw::io::to_json(r);
    e.erase("discrepancies");
    experiments.push_back(std::move(e));
  }

  json disc = json::array();
  for (const auto& d : gpw::lattice_discrepancies(fix)) disc.push_back(gpw::io::to_json(d));
  json report;
  report["N"] = n;
  report["kind"] = gpw::to_string(kind);
  report["omega"] = omega;
  report["epsilon"] = eps;
  report["admissible_range"] = {0.0, fix.admissible_upper(eps)};
  report["omega_threshold"] = fix.omega_threshold();
  report["seed"] = cfg.seed;
  report["constants"] = gpw::io::to_json(fix.constants);
  report["induced_triple_spectrum"] = fix.induced_spectrum;
  report["discrepancies"] = std::move(disc);
  report["experiments"] = std::move(experiments);
  report["within_contract"] = ok;
  emit(cfg, report);
  return ok ? 0 : 1;
}

void add_common(CLI::App* sub, Config& cfg, bool need_graph) {
  auto* g = sub->add_option("--graph", cfg.graph, "Edge-list file, path:N or cycle:N");
  if (need_graph) g->required();
  sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  sub->add_option("--out", cfg.out, "Write the JSON report here instead of stdout");
}

void add_cover(CLI::App* sub, Config& cfg) {
  sub->add_option("--cover", cfg.cover, "Cover JSON file, or 'triples'")->capture_default_str();
  sub->add_option("--functionals", cfg.functionals, "characteristic | normalized | dirac | explicit")
      ->check(CLI::IsMember({"characteristic", "normalized", "dirac", "explicit"}));
}

void add_epsilon(CLI::App* sub, Config& cfg, const std::string& help) {
  sub->add_option("--epsilon", cfg.epsilons, help)->delimiter(',')->check(CLI::PositiveNumber);
}

void add_method(CLI::App* sub, Config& cfg) {
  sub->add_option("--k", cfg.k_list, "Spline orders, comma separated (reconstruct default 1,2,4,8; lattice-demo 1..64)")->delimiter(',')->check(CLI::PositiveNumber);
  sub->add_option("--rho", cfg.rho, "Frame relaxation: auto (2/(A+B)) or a value")->capture_default_str();
  sub->add_option("--tol", cfg.tol, "Frame iteration stops when the update norm is below this")->capture_default_str();
  sub->add_option("--max-iter", cfg.max_iter, "Frame iteration cap")->capture_default_str();
  sub->add_option("--trials", cfg.trials, "Number of random signals");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling and reconstruction of band-limited signals on weighted graphs"};
  app.require_subcommand(1);
  Config cfg;

  auto* spectrum = app.add_subcommand("spectrum", "Laplacian eigenvalues and PW_omega dimension");
  add_common(spectrum, cfg, true);
  spectrum->add_option("--omega", cfg.omega, "Bandwidth")->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "Poincare inequality suite over seeded random signals");
  add_common(verify, cfg, true);
  add_cover(verify, cfg);
  add_epsilon(verify, cfg, "Epsilon values, comma separated (default 0.1,0.5,1,2,10)");
  verify->add_option("--signal", cfg.signal, "Verify on this signal (JSON or CSV) instead");
  verify->add_option("--trials", cfg.trials, "Number of random signals (default 100)");
  verify->add_option("--j0", cfg.j0, "Subset indices of the sub-family J0")->delimiter(',');

  auto* recon = app.add_subcommand("reconstruct", "Sample a band-limited signal and reconstruct it");
  add_common(recon, cfg, true);
  add_cover(recon, cfg);
  recon->add_option("--omega", cfg.omega, "Bandwidth")->required()->check(CLI::NonNegativeNumber);
  add_epsilon(recon, cfg, "Epsilon for the admissible range (default 0.1)");
  recon->add_option("--method", cfg.method, "frame | spline")->check(CLI::IsMember({"frame", "spline"}));
  add_method(recon, cfg);
  recon->add_option("--signal", cfg.signal, "Reconstruct this signal (JSON or CSV) instead");
  recon->add_option("--csv", cfg.csv, "Write the error table as CSV");

  auto* demo = app.add_subcommand("lattice-demo", "Triple-cover experiment on a path or cycle");
  add_common(demo, cfg, false);
  demo->add_option("--n", cfg.n, "Number of vertices (divisible by 3)")->capture_default_str();
  demo->add_option("--kind", cfg.kind, "cycle | path")->capture_default_str();
  demo->add_option("--omega", cfg.omega, "Bandwidth (default 0.9 of the admissible range)")
      ->check(CLI::NonNegativeNumber);
  add_epsilon(demo, cfg, "Epsilon for the admissible range (default 0.1)");
  demo->add_option("--method", cfg.method, "frame | spline | both")->check(CLI::IsMember({"frame", "spline", "both"}));
  add_method(demo, cfg);
  demo->callback([&] {
    if (demo->count("--method") == 0) cfg.method = "both";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*spectrum) return cmd_spectrum(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*recon) return cmd_reconstruct(cfg);
    if (*demo) return cmd_lattice_demo(cfg);
  } catch (const gpw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
