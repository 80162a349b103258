#include "latbound/cli/commands.hpp"

#include "latbound/matrix_io.hpp"
#include "latbound/spectral_stats.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace latbound::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json read_json_file(const fs::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("cannot open " + p.string());
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(p.string() + ": " + e.what());
  }
}

std::string csv_header(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "# latbound version=" << kVersion << " schema=" << kCsvSchema << " config_hash=" << config_hash(c) << "\n";
  return os.str();
}

json metadata(const ExperimentConfig& c, const std::string& command) {
  json j;
  j["tool"] = "latbound";
  j["version"] = kVersion;
  j["csv_schema"] = kCsvSchema;
  j["command"] = command;
  j["config_hash"] = config_hash(c);
  j["config"] = config_to_json(c);
  j["modules"] = {{"core-linalg", kVersion},     {"lattice-opt", kVersion},     {"complexity-engine", kVersion},
                  {"syk-models", kVersion},      {"resonant-models", kVersion}, {"spectral-statistics", kVersion}};
  return j;
}

fs::path out_path(const ExperimentConfig& c, const std::string& name) { return fs::path(c.output_dir) / name; }

void write_json(const fs::path& p, const json& j, std::vector<fs::path>& files) {
  write_atomic(p, j.dump(2) + "\n");
  files.push_back(p);
}

ComplexityMetricSpec metric_spec(const ExperimentConfig& c, Eigen::Index d) {
  ComplexityMetricSpec s;
  s.mu = c.mu.value_or(double(d));
  s.su_restriction = c.su_restriction;
  s.nu = c.nu;
  return s;
}

QMatrix model_q(const ExperimentConfig& c, const BuiltModel& bm, const ComplexityMetricSpec& spec) {
  if (!bm.classifier) {
    if (spec.mu != 1.0)
      throw std::invalid_argument("the levels family has no eigenvectors, so only mu = 1 is available");
    return QMatrix(Eigen::MatrixXd::Zero(bm.normalized.size(), bm.normalized.size()));
  }
  return build_q_matrix(bm.spectrum, *bm.classifier, c.threads);
}

struct SweepRun {
  ComplexityTrace trace;
  std::optional<BoundContext> ctx;
};

SweepRun run_sweep(const ExperimentConfig& c, const BuiltModel& bm, const std::vector<double>& times) {
  SweepRun run;
  SolverChain chain = parse_method(c.solver);
  if (chain == SolverChain::BiInvariant) {
    run.trace = sweep_bi_invariant(bm.normalized, times);
    return run;
  }
  auto spec = metric_spec(c, bm.normalized.size());
  QMatrix q = model_q(c, bm, spec);
  bool lll = chain == SolverChain::LllBabai || chain == SolverChain::LllBabaiGreedy;
  run.ctx = prepare_bound(q, bm.normalized, spec, lll);
  run.trace = sweep(*run.ctx, times, chain, {c.threads, c.keep_minimizers});
  return run;
}

std::string trace_csv(const ExperimentConfig& c, const ComplexityTrace& tr) {
  std::ostringstream os;
  os << csv_header(c) << "t,c_bound,method\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    os << format_double(tr.times[i]) << "," << format_double(tr.values[i]) << "," << tr.method << "\n";
  return os.str();
}

json int_vector_json(const IntegerVector& k) { return std::vector<std::int64_t>(k.data(), k.data() + k.size()); }

}  // namespace

ExperimentConfig resolve_config(const Overrides& o) {
  json j = json::object();
  if (o.preset) j = preset_json(*o.preset);
  if (o.config) {
    json file = read_json_file(*o.config);
    if (file.contains("preset") && file["preset"].is_string() && !o.preset) {
      j = preset_json(file["preset"].get<std::string>());
    }
    j.merge_patch(file);
  }
  if (j.empty()) throw std::invalid_argument("no configuration: pass --config and/or --preset");
  if (o.out) j["output_dir"] = *o.out;
  if (o.seed) {
    j["seed"] = *o.seed;
    j["model"]["seed"] = *o.seed;
  }
  if (o.threads) j["threads"] = *o.threads;
  return config_from_json(j);
}

CommandResult cmd_gen(const ExperimentConfig& c) {
  CommandResult r;
  BuiltModel bm = build_model(c, true);
  const auto d = bm.spectrum.dim();
  if (bm.hamiltonian) {
    auto p = out_path(c, "hamiltonian.lbmx");
    if (bm.hamiltonian->is_real())
      write_matrix(p, Eigen::MatrixXd(bm.hamiltonian->matrix().real()));
    else
      write_matrix(p, bm.hamiltonian->matrix());
    r.files.push_back(p);
  }
  auto sp = out_path(c, "spectrum.json");
  write_atomic(sp, spectrum_to_json(bm.spectrum, bm.spectrum.vectors.size() > 0 && d <= 2048) + "\n");
  r.files.push_back(sp);
  if (bm.block) {
    auto pp = out_path(c, "partitions.csv");
    write_atomic(pp, csv_header(c) + partitions_csv(*bm.block));
    r.files.push_back(pp);
  }
  json meta = metadata(c, "gen");
  meta["model_info"] = bm.metadata;
  write_json(out_path(c, "metadata.json"), meta, r.files);
  r.summary = {{"dimension", d}};
  return r;
}

CommandResult cmd_bound(const ExperimentConfig& c) {
  CommandResult r;
  BuiltModel bm = build_model(c, parse_method(c.solver) != SolverChain::BiInvariant);
  auto times = linspace_times(c.time.start, c.time.stop, c.time.stride);
  SweepRun run = run_sweep(c, bm, times);
  auto tp = out_path(c, "trace.csv");
  write_atomic(tp, trace_csv(c, run.trace));
  r.files.push_back(tp);
  json meta = metadata(c, "bound");
  meta["model_info"] = bm.metadata;
  meta["samples"] = times.size();
  if (run.ctx) {
    meta["mu"] = run.ctx->spec.mu;
    meta["nu"] = run.ctx->spec.effective_nu();
    if (run.ctx->reduced) meta["lll_swaps"] = run.ctx->lll.swaps;
  }
  write_json(out_path(c, "metadata.json"), meta, r.files);
  if (c.keep_minimizers && !run.trace.minimizers.empty()) {
    json ks = json::array();
    for (std::size_t i = 0; i < times.size(); ++i)
      ks.push_back({{"t", times[i]}, {"k", int_vector_json(run.trace.minimizers[i])}});
    write_json(out_path(c, "minimizers.json"), ks, r.files);
  }
  double maxv = 0.0;
  for (double v : run.trace.values) maxv = std::max(maxv, v);
  r.summary = {{"samples", times.size()}, {"max_value", maxv}};
  return r;
}

CommandResult cmd_qspec(const ExperimentConfig& c) {
  CommandResult r;
  BuiltModel bm = build_model(c, true);
  if (!bm.classifier) throw std::invalid_argument("qspec needs a model with eigenvectors (syk or resonant)");
  QMatrix q = build_q_matrix(bm.spectrum, *bm.classifier, c.threads);
  Eigen::VectorXd ev = q.eigenvalues();
  std::ostringstream os;
  os << csv_header(c) << "index,eigenvalue\n";
  std::size_t zeros = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    os << i << "," << format_double(ev(i)) << "\n";
    if (ev(i) < 1e-8) ++zeros;
  }
  auto p = out_path(c, "q_spectrum.csv");
  write_atomic(p, os.str());
  r.files.push_back(p);
  double qe = (q.matrix() * bm.normalized).norm();
  json meta = metadata(c, "qspec");
  meta["model_info"] = bm.metadata;
  meta["local_generators"] = bm.classifier->local_count();
  meta["near_zero_eigenvalues"] = zeros;
  meta["q_times_energy_norm"] = qe;
  write_json(out_path(c, "metadata.json"), meta, r.files);
  r.summary = {{"near_zero_eigenvalues", zeros}, {"q_times_energy_norm", qe}};
  return r;
}

CommandResult cmd_stats(const ExperimentConfig& c) {
  CommandResult r;
  BuiltModel bm = build_model(c, false);
  Eigen::VectorXd e = bm.spectrum.energies;
  std::sort(e.data(), e.data() + e.size());
  SpacingSample s = unfold(e);
  auto h = spacing_histogram(s);
  auto p = out_path(c, "spacing.csv");
  write_atomic(p, csv_header(c) + histogram_csv(h));
  r.files.push_back(p);
  double kw = ks_distance(s, Reference::Wigner), kp = ks_distance(s, Reference::Poisson);
  json summary = metadata(c, "stats");
  summary["model_info"] = bm.metadata;
  summary["delta"] = s.delta;
  summary["spacings"] = s.s.size();
  summary["ks_wigner"] = kw;
  summary["ks_poisson"] = kp;
  summary["closer_to"] = kw < kp ? "wigner" : "poisson";
  write_json(out_path(c, "ks_summary.json"), summary, r.files);
  r.summary = {{"ks_wigner", kw}, {"ks_poisson", kp}};
  return r;
}

CommandResult cmd_plateau(const ExperimentConfig& c) {
  CommandResult r;
  if (!c.plateau_window) throw std::invalid_argument("plateau needs a plateau_window in the config or preset");
  const auto& w = *c.plateau_window;
  SolverChain chain = parse_method(c.solver);
  BuiltModel bm = build_model(c, chain != SolverChain::BiInvariant);
  const auto d = bm.normalized.size();
  SweepRun run = run_sweep(c, bm, window_times(w));
  PlateauStats st = plateau_stats(run.trace, w);

  json out = metadata(c, "plateau");
  out["model_info"] = bm.metadata;
  out["window"] = {{"t_start", w.t_start}, {"t_end", w.t_end}, {"stride", w.stride}};
  out["measured"] = {{"mean", st.mean}, {"variance", st.variance}, {"samples", st.samples},
                     {"min", st.min},   {"max", st.max}};
  if (run.ctx && run.ctx->reduced) {
    const auto& gs = run.ctx->reduced_gs;
    double est = plateau_estimate(gs);
    out["estimate"] = est;
    out["covering_radius_bound"] = 2.0 * std::numbers::pi * covering_radius_bound(gs);
    out["estimate_unreduced"] = plateau_estimate(run.ctx->basis_gs);
    out["measured_over_estimate"] = st.mean / est;
    out["lll_swaps"] = run.ctx->lll.swaps;
    auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    out["gs_lengths_sq_before"] = vec(run.ctx->basis_gs.star_sq);
    out["gs_lengths_sq_after"] = vec(gs.star_sq);
  } else {
    double mu = c.mu.value_or(chain == SolverChain::BiInvariant ? 1.0 : double(d));
    out["estimate"] = std::numbers::pi * std::sqrt(mu * double(d) / 3.0);
    out["variance_estimate"] = std::numbers::pi * std::numbers::pi / 15.0;
  }
  out["ceiling"] = std::numbers::pi * std::sqrt(c.mu.value_or(chain == SolverChain::BiInvariant ? 1.0 : double(d)) * double(d));
  write_json(out_path(c, "plateau.json"), out, r.files);
  auto tp = out_path(c, "trace.csv");
  write_atomic(tp, trace_csv(c, run.trace));
  r.files.push_back(tp);
  r.summary = {{"mean", st.mean}, {"variance", st.variance}, {"estimate", out["estimate"]}};
  return r;
}

CvpInstance<double> cvp_from_json(const json& j) {
  auto cols = j.at("basis").get<std::vector<std::vector<double>>>();
  auto target = j.at("target").get<std::vector<double>>();
  const auto d = Eigen::Index(cols.size());
  Eigen::MatrixXd b(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    if (Eigen::Index(cols[std::size_t(c)].size()) != d) throw std::invalid_argument("cvp instance: basis must be square");
    for (Eigen::Index i = 0; i < d; ++i) b(i, c) = cols[std::size_t(c)][std::size_t(i)];
  }
  return CvpInstance<double>(LatticeBasis<double>(b),
                             Eigen::Map<Eigen::VectorXd>(target.data(), Eigen::Index(target.size())));
}

json cvp_to_json(const CvpInstance<double>& inst) {
  std::vector<std::vector<double>> cols;
  const auto& b = inst.basis.columns();
  for (Eigen::Index c = 0; c < b.cols(); ++c) cols.emplace_back(b.col(c).data(), b.col(c).data() + b.rows());
  return {{"basis", cols}, {"target", std::vector<double>(inst.target.data(), inst.target.data() + inst.target.size())}};
}

json compare_cvp_solvers(const CvpInstance<double>& inst, int radius) {
  using clock = std::chrono::steady_clock;
  json methods = json::array();
  auto record = [&](const std::string& name, const IntegerVector& k, clock::time_point t0) {
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    methods.push_back({{"method", name}, {"coeffs", int_vector_json(k)}, {"distance", lattice_distance(inst, k)},
                       {"wall_time_s", secs}});
  };
  auto t0 = clock::now();
  record("naive", naive_round(inst), t0);
  t0 = clock::now();
  record("babai", babai_nearest_plane(inst, gram_schmidt(inst.basis)), t0);

  t0 = clock::now();
  auto lll = lll_reduce(inst.basis);
  CvpInstance<double> red(lll.basis, inst.target);
  IntegerVector kb = babai_nearest_plane(red, gram_schmidt(red.basis));
  record("babai+lll", lll.transform * kb, t0);
  t0 = clock::now();
  IntegerVector kb2 = babai_nearest_plane(red, gram_schmidt(red.basis));
  record("babai+lll+greedy", lll.transform * greedy_descent(red, kb2), t0);

  json out;
  out["dimension"] = inst.basis.dim();
  out["lll_swaps"] = lll.swaps;
  if (inst.basis.dim() <= kMaxBruteForceDim) {
    t0 = clock::now();
    int rad = radius;
    auto ex = brute_force_cvp(inst, rad);
    for (int widen = 0; ex.boundary_hit && widen < 3; ++widen) {
      rad *= 2;
      ex = brute_force_cvp(inst, rad);
    }
    record("brute_force", ex.coeffs, t0);
    methods.back()["radius"] = rad;
    if (ex.boundary_hit) out["warning"] = "brute-force minimizer touches the search box; widen the radius";
  } else {
    out["warning"] = "brute force skipped: dimension above " + std::to_string(kMaxBruteForceDim);
  }
  out["methods"] = methods;
  return out;
}

CommandResult cmd_cvp(const fs::path& instance, const fs::path& out_dir) {
  CommandResult r;
  json j = read_json_file(instance);
  int radius = j.value("radius", 4);
  json out = compare_cvp_solvers(cvp_from_json(j), radius);
  out["tool"] = "latbound";
  out["version"] = kVersion;
  out["instance"] = instance.string();
  write_json(out_dir / "cvp_comparison.json", out, r.files);
  r.summary = out;
  return r;
}

}  // namespace latbound::cli
