// Command line front end: deterministic experiment orchestration around the
// core library. Every output embeds the tool version, the fully resolved
// parameter set and the seed; files are written atomically.

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dslt/chaos.hpp"
#include "dslt/estimator.hpp"
#include "dslt/fbm.hpp"
#include "dslt/gaussian_moments.hpp"
#include "dslt/path_io.hpp"
#include "dslt/regularity.hpp"
#include "dslt/rng.hpp"
#include "dslt/second_moment.hpp"
#include "dslt/version.hpp"

using nlohmann::json;

namespace {

int resolved_threads = 1;

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
  resolved_threads = (threads > 0) ? threads : omp_get_max_threads();
#else
  resolved_threads = 1;
#endif
}

// atomic file write: temp file in the target directory, then rename
void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os) throw std::runtime_error("failed while writing " + tmp.string());
  }
  fs::rename(tmp, target);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
  } else {
    write_file_atomic(out_path, content);
  }
}

json provenance(const std::string& subcommand, const json& spec, std::uint64_t seed) {
  json j;
  j["version"] = dslt::kVersion;
  j["subcommand"] = subcommand;
  j["spec"] = spec;
  j["seed"] = seed;
  j["threads"] = resolved_threads;
  return j;
}

std::string csv_provenance(const std::string& subcommand, const json& spec,
                           std::uint64_t seed) {
  std::ostringstream os;
  os << "# version=" << dslt::kVersion << "\n";
  os << "# subcommand=" << subcommand << "\n";
  os << "# seed=" << seed << "\n";
  os << "# spec=" << spec.dump() << "\n";
  return os.str();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<int> parse_multi_index(const std::string& s) {
  std::vector<int> k;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) k.push_back(std::stoi(item));
  return k;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  return v;
}

json regime_json(const dslt::RegimeVerdict& r) {
  return json{{"l2_exists", r.l2_exists},
              {"lp_exists", r.lp_exists},
              {"l2_threshold", r.l2_threshold},
              {"lp_threshold", r.lp_threshold}};
}

json quad_json(const dslt::QuadResult& q) {
  return json{{"region", q.region},
              {"value", q.value},
              {"abs_error_estimate", q.abs_error_estimate},
              {"n_evals", q.n_evals}};
}

void warn_if_outside_regime(const dslt::ModelConfig& cfg) {
  const auto regime = dslt::existence_regime(cfg.H, cfg.k, cfg.d);
  if (!regime.l2_exists)
    std::cerr << "warning: H=" << cfg.H << " is outside the L2 existence regime"
              << " (threshold " << regime.l2_threshold
              << "); finite-epsilon values remain well defined\n";
}

struct CommonModelFlags {
  double H = 0.5;
  int d = 1;
  std::string k = "1";
  double t = 1.0;
  double eps = 0.1;

  void attach(CLI::App* app) {
    app->add_option("--H", H, "Hurst index in (0,1)");
    app->add_option("--d", d, "dimension");
    app->add_option("--k", k, "derivative multi-index, comma separated");
    app->add_option("--t", t, "time horizon");
    app->add_option("--eps", eps, "mollification parameter");
  }
  dslt::ModelConfig config() const {
    dslt::ModelConfig cfg;
    cfg.H = H;
    cfg.d = d;
    cfg.k = parse_multi_index(k);
    cfg.t = t;
    cfg.epsilon = eps;
    cfg.validate();
    return cfg;
  }
  json spec() const {
    return json{{"H", H}, {"d", d}, {"k", k}, {"t", t}, {"eps", eps}};
  }
};

// ---------------------------------------------------------------- simulate

int run_simulate(const CommonModelFlags& model, int n_steps, int n_paths,
                 std::uint64_t seed, const std::string& method_name,
                 const std::string& out_bin, const std::string& out_csv) {
  dslt::ModelConfig cfg = model.config();
  dslt::SamplerMethod method = dslt::SamplerMethod::Auto;
  if (method_name == "circulant") method = dslt::SamplerMethod::Circulant;
  else if (method_name == "cholesky") method = dslt::SamplerMethod::Cholesky;
  else if (method_name != "auto")
    throw CLI::ValidationError("--method", "must be auto, circulant or cholesky");

  const dslt::PathBatch batch = dslt::sample_paths(cfg, n_steps, n_paths, seed, method);

  json spec = model.spec();
  spec["n_steps"] = n_steps;
  spec["n_paths"] = n_paths;
  spec["method"] = method_name;

  if (!out_bin.empty()) {
    // the FBMP header itself carries the provenance fields
    std::ostringstream os(std::ios::binary);
    dslt::write_fbmp(os, batch);
    write_file_atomic(out_bin, os.str());
  }
  if (!out_csv.empty()) {
    std::ostringstream os;
    os << csv_provenance("simulate", spec, seed);
    dslt::write_paths_csv(os, batch);
    write_file_atomic(out_csv, os.str());
  }

  json summary = provenance("simulate", spec, seed);
  summary["result"] = {{"n_values", batch.values.size()},
                       {"dt", batch.dt},
                       {"binary", out_bin},
                       {"csv", out_csv}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- estimate

int run_estimate(const CommonModelFlags& model, const std::string& y_str, int order,
                 int n_paths, int n_steps, std::uint64_t seed, bool antithetic,
                 const std::string& out, const std::string& out_csv) {
  dslt::ModelConfig cfg = model.config();
  std::vector<double> y = parse_doubles(y_str);
  if (y.size() == 1 && cfg.d > 1) y.assign(cfg.d, y[0]);
  warn_if_outside_regime(cfg);

  dslt::McMomentOptions mopt;
  mopt.antithetic = antithetic;
  const dslt::McEstimate est = dslt::mc_moment(cfg, y, order, n_paths, n_steps, seed, mopt);

  json spec = model.spec();
  spec["y"] = y_str;
  spec["order"] = order;
  spec["n_paths"] = n_paths;
  spec["n_steps"] = n_steps;
  spec["antithetic"] = antithetic;

  json j = provenance("estimate", spec, seed);
  j["result"] = {{"mean", est.mean},
                 {"variance", est.variance},
                 {"std_error", est.std_error},
                 {"n_samples", est.n_samples},
                 {"regime", regime_json(dslt::existence_regime(cfg.H, cfg.k, cfg.d))}};
  emit(out, j.dump(2));

  if (!out_csv.empty()) {
    const int n_samples = antithetic ? n_paths / 2 : n_paths;
    const std::vector<double> vals = dslt::dslt_samples(cfg, y, n_samples, n_steps, seed);
    std::ostringstream os;
    os << csv_provenance("estimate", spec, seed);
    os << "path_id,value\n";
    for (std::size_t i = 0; i < vals.size(); ++i)
      os << i << "," << fmt(vals[i]) << "\n";
    write_file_atomic(out_csv, os.str());
  }
  return 0;
}

// ------------------------------------------------------------ second-moment

int run_second_moment(const CommonModelFlags& model, double eta, double rel_tol,
                      std::size_t max_evals, const std::string& out) {
  dslt::ModelConfig cfg = model.config();
  warn_if_outside_regime(cfg);
  dslt::SecondMomentOptions opt;
  opt.rel_tol = rel_tol;
  opt.max_evals = max_evals;
  const dslt::SecondMomentResult res = dslt::second_moment_quadrature(cfg, eta, opt);

  json spec = model.spec();
  spec["eta"] = eta;
  spec["rel_tol"] = rel_tol;
  spec["max_evals"] = max_evals;

  json j = provenance("second-moment", spec, /*seed=*/0);
  j["result"] = {{"value", res.total.value},
                 {"error", res.total.abs_error_estimate},
                 {"n_evals", res.total.n_evals},
                 {"per_region", json{{"D1", quad_json(res.d1)},
                                     {"D2", quad_json(res.d2)},
                                     {"D3", quad_json(res.d3)}}},
                 {"regime", regime_json(res.regime)},
                 {"converged", res.converged},
                 {"diverging", res.diverging}};
  emit(out, j.dump(2));
  return 0;
}

// ------------------------------------------------------------------- clt

int run_clt(double t, const std::string& ladder_str, int n_paths, int n_steps,
            std::uint64_t seed, const std::string& out, const std::string& out_csv) {
  const std::vector<double> ladder = parse_doubles(ladder_str);
  const dslt::CltReport rep = dslt::clt_experiment(t, ladder, n_paths, n_steps, seed);

  json spec = {{"t", t},
               {"eps_ladder", ladder_str},
               {"n_paths", n_paths},
               {"n_steps", n_steps},
               {"H", 2.0 / 3.0},
               {"d", 1},
               {"k", "1"}};

  json j = provenance("clt", spec, seed);
  j["result"] = {{"eps_ladder", rep.eps_ladder},
                 {"variance_ratios", rep.variance_ratios},
                 {"first_chaos_ratios", rep.first_chaos_ratios},
                 {"sigma_sq_target", rep.sigma_sq_target},
                 {"mc_eps", rep.mc_eps},
                 {"mc_mean", rep.mc_mean},
                 {"mc_variance", rep.mc_variance},
                 {"mc_variance_se", rep.mc_variance_se},
                 {"mc_skewness", rep.mc_skewness},
                 {"mc_kurtosis_excess", rep.mc_kurtosis_excess},
                 {"ks_statistic", rep.ks_statistic}};
  emit(out, j.dump(2));

  if (!out_csv.empty()) {
    std::ostringstream os;
    os << csv_provenance("clt", spec, seed);
    os << "path_id,normalized_value\n";
    for (std::size_t i = 0; i < rep.normalized_samples.size(); ++i)
      os << i << "," << fmt(rep.normalized_samples[i]) << "\n";
    write_file_atomic(out_csv, os.str());
  }
  return 0;
}

// ------------------------------------------------------------------ holder

int run_holder(const CommonModelFlags& model, const std::string& variable,
               const std::string& lags_str, int order, int n_paths, int n_steps,
               std::uint64_t seed, const std::string& out) {
  dslt::ModelConfig cfg = model.config();
  warn_if_outside_regime(cfg);
  const std::vector<double> lags = parse_doubles(lags_str);
  dslt::IncrementVariable var;
  if (variable == "time") var = dslt::IncrementVariable::Time;
  else if (variable == "space") var = dslt::IncrementVariable::Space;
  else throw CLI::ValidationError("--variable", "must be time or space");

  std::vector<double> snapped;
  const auto samples =
      dslt::increment_samples(cfg, var, lags, n_paths, n_steps, seed, &snapped);
  const dslt::HolderFit fit = dslt::holder_fit(samples, snapped, order, var);

  json spec = model.spec();
  spec["variable"] = variable;
  spec["lags"] = lags_str;
  spec["order"] = order;
  spec["n_paths"] = n_paths;
  spec["n_steps"] = n_steps;

  json j = provenance("holder", spec, seed);
  j["result"] = {{"variable", fit.variable},
                 {"lags", fit.lags},
                 {"moment_order", fit.moment_order},
                 {"moments", fit.moments},
                 {"exponent", fit.slope},
                 {"r_squared", fit.r_squared},
                 {"finite_eps_caveat",
                  "exponents are measured at fixed eps, not in the eps->0 limit"}};
  emit(out, j.dump(2));
  return 0;
}

// ------------------------------------------------------------- bounds-check

int run_bounds_check(const std::string& h_list_str, int n_samples, double t,
                     std::uint64_t seed, const std::string& out) {
  const std::vector<double> h_list = parse_doubles(h_list_str);
  json spec = {{"H_list", h_list_str}, {"n_samples", n_samples}, {"t", t}};

  std::ostringstream os;
  os << csv_provenance("bounds-check", spec, seed);
  os << "kind,case,H,m,p1,p2,p3,exact,bound,ratio\n";

  std::mt19937_64 rng(dslt::splitmix64(seed));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> m_dist(0, 5);

  // pair-integral bound rows: p1,p2,p3 = lambda,rho,mu
  for (int i = 0; i < n_samples; ++i) {
    const double lam = 0.1 + 9.9 * unif(rng);
    const double rho = 0.1 + 9.9 * unif(rng);
    const double mu_max = std::sqrt(lam * rho);
    const double mu = (2.0 * unif(rng) - 1.0) * mu_max;
    if (lam * rho - mu * mu <= 0.01) continue;
    const int m = m_dist(rng);
    const double exact = std::abs(dslt::pair_integral_exact(m, lam, rho, mu));
    const double bound = dslt::lemma_bound(m, lam, rho, mu);
    const double ratio = (bound > 0.0) ? exact / bound : 0.0;
    os << "pair," << ((m % 2) ? "odd" : "even") << ",," << m << "," << fmt(lam) << ","
       << fmt(rho) << "," << fmt(mu) << "," << fmt(exact) << "," << fmt(bound) << ","
       << fmt(ratio) << "\n";
  }

  // region lower-bound rows: p1,p2,p3 = a,b,c
  for (double H : h_list) {
    for (dslt::RegionCase rc :
         {dslt::RegionCase::D1, dslt::RegionCase::D2, dslt::RegionCase::D3}) {
      for (int i = 0; i < n_samples; ++i) {
        dslt::GapCoords g{rc, t * unif(rng), t * unif(rng), t * unif(rng)};
        const dslt::CovTriple ct = dslt::cov_triple_from_gaps(g, H);
        const double exact = ct.det();
        const double bound = dslt::region_lower_bound(g, H);
        const double ratio = (bound > 0.0) ? exact / bound : 0.0;
        os << "region," << dslt::to_string(rc) << "," << fmt(H) << ",," << fmt(g.a) << ","
           << fmt(g.b) << "," << fmt(g.c) << "," << fmt(exact) << "," << fmt(bound) << ","
           << fmt(ratio) << "\n";
      }
    }
  }
  emit(out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for derivatives of fBm self-intersection local time"};
  app.set_version_flag("--version", std::string(dslt::kVersion));
  app.set_config("--config", "", "flat key=value config file (section per subcommand)");
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker thread count (0 = hardware default)")
      ->envname("DSLT_THREADS");

  // simulate
  auto* sim = app.add_subcommand("simulate", "sample fBm paths and write them out");
  CommonModelFlags sim_model;
  sim_model.attach(sim);
  int sim_steps = 1024, sim_paths = 16;
  std::uint64_t sim_seed = 1;
  std::string sim_method = "auto", sim_out, sim_csv;
  sim->add_option("--n-steps", sim_steps, "grid steps");
  sim->add_option("--n-paths", sim_paths, "number of paths");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--method", sim_method, "auto | circulant | cholesky");
  sim->add_option("--out", sim_out, "binary FBMP output path");
  sim->add_option("--csv", sim_csv, "CSV output path");

  // estimate
  auto* est = app.add_subcommand("estimate", "Monte Carlo moments of the pathwise DSLT");
  CommonModelFlags est_model;
  est_model.attach(est);
  std::string est_y = "0";
  int est_order = 2, est_paths = 2000, est_steps = 1024;
  std::uint64_t est_seed = 1;
  bool est_antithetic = true;
  std::string est_out = "-", est_csv;
  est->add_option("--y", est_y, "offset point, comma separated");
  est->add_option("--order", est_order, "moment order (1..6)");
  est->add_option("--n-paths", est_paths, "number of paths (antithetic pairs count twice)");
  est->add_option("--n-steps", est_steps, "grid steps");
  est->add_option("--seed", est_seed, "RNG seed");
  est->add_flag("--antithetic,!--no-antithetic", est_antithetic, "antithetic pairing");
  est->add_option("--out", est_out, "JSON output path (- for stdout)");
  est->add_option("--csv", est_csv, "per-path CSV output path");

  // second-moment
  auto* sm = app.add_subcommand("second-moment",
                                "quadrature for E[ahat_eps ahat_eta] with regime gate");
  CommonModelFlags sm_model;
  sm_model.attach(sm);
  double sm_eta = -1.0, sm_rel_tol = 1e-5;
  std::size_t sm_max_evals = 10'000'000;
  std::string sm_out = "-";
  sm->add_option("--eta", sm_eta, "second mollification parameter (defaults to eps)");
  sm->add_option("--rel-tol", sm_rel_tol, "relative tolerance");
  sm->add_option("--max-evals", sm_max_evals, "evaluation budget");
  sm->add_option("--out", sm_out, "JSON output path (- for stdout)");

  // clt
  auto* clt = app.add_subcommand("clt", "critical-case (H=2/3) variance and sampling check");
  double clt_t = 1.0;
  std::string clt_ladder = "1e-2,1e-3";
  int clt_paths = 2000, clt_steps = 2048;
  std::uint64_t clt_seed = 1;
  std::string clt_out = "-", clt_csv;
  clt->add_option("--t", clt_t, "time horizon");
  clt->add_option("--eps-ladder", clt_ladder, "decreasing epsilon ladder, comma separated");
  clt->add_option("--n-paths", clt_paths, "number of paths (antithetic)");
  clt->add_option("--n-steps", clt_steps, "grid steps");
  clt->add_option("--seed", clt_seed, "RNG seed");
  clt->add_option("--out", clt_out, "JSON output path (- for stdout)");
  clt->add_option("--csv", clt_csv, "per-path normalized statistics CSV");

  // holder
  auto* hol = app.add_subcommand("holder", "Hölder exponent fits in time or space");
  CommonModelFlags hol_model;
  hol_model.eps = 1e-3;
  hol_model.attach(hol);
  std::string hol_var = "time", hol_lags = "0.05,0.1,0.2,0.4";
  int hol_order = 2, hol_paths = 400, hol_steps = 512;
  std::uint64_t hol_seed = 1;
  std::string hol_out = "-";
  hol->add_option("--variable", hol_var, "time | space");
  hol->add_option("--lags", hol_lags, "strictly increasing lags, comma separated");
  hol->add_option("--order", hol_order, "moment order for the fit");
  hol->add_option("--n-paths", hol_paths, "number of paths");
  hol->add_option("--n-steps", hol_steps, "grid steps over the base horizon");
  hol->add_option("--seed", hol_seed, "RNG seed");
  hol->add_option("--out", hol_out, "JSON output path (- for stdout)");

  // bounds-check
  auto* bc = app.add_subcommand("bounds-check",
                                "CSV of exact values vs lemma bound expressions");
  std::string bc_h = "0.25,0.5,0.6666666666666666,0.75";
  int bc_samples = 1000;
  double bc_t = 1.0;
  std::uint64_t bc_seed = 1;
  std::string bc_out = "-";
  bc->add_option("--H-list", bc_h, "Hurst values, comma separated");
  bc->add_option("--n-samples", bc_samples, "draws per (kind, case, H)");
  bc->add_option("--t", bc_t, "gap scale");
  bc->add_option("--seed", bc_seed, "RNG seed");
  bc->add_option("--out", bc_out, "CSV output path (- for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    json err = {{"error", {{"type", "cli"}, {"message", e.what()}}}};
    std::cout << err.dump() << "\n";
    return 2;
  }

  apply_threads(threads);

  try {
    if (sim->parsed())
      return run_simulate(sim_model, sim_steps, sim_paths, sim_seed, sim_method, sim_out,
                          sim_csv);
    if (est->parsed())
      return run_estimate(est_model, est_y, est_order, est_paths, est_steps, est_seed,
                          est_antithetic, est_out, est_csv);
    if (sm->parsed())
      return run_second_moment(sm_model, sm_eta < 0 ? sm_model.eps : sm_eta, sm_rel_tol,
                               sm_max_evals, sm_out);
    if (clt->parsed())
      return run_clt(clt_t, clt_ladder, clt_paths, clt_steps, clt_seed, clt_out, clt_csv);
    if (hol->parsed())
      return run_holder(hol_model, hol_var, hol_lags, hol_order, hol_paths, hol_steps,
                        hol_seed, hol_out);
    if (bc->parsed()) return run_bounds_check(bc_h, bc_samples, bc_t, bc_seed, bc_out);
  } catch (const std::invalid_argument& e) {
    json err = {{"error", {{"type", "validation"}, {"message", e.what()}}}};
    std::cout << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json err = {{"error", {{"type", "runtime"}, {"message", e.what()}}}};
    std::cout << err.dump() << "\n";
    return 1;
  }
  return 0;
}
