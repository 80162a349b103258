#include "latbound/cli/config.hpp"

#include <cstdio>
#include <random>
#include <stdexcept>

namespace latbound::cli {

using nlohmann::json;

namespace {

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
  static const std::vector<std::string> known = {"model",  "threshold_k", "su_restriction", "mu",
                                                 "nu",     "time",        "plateau_window", "solver",
                                                 "output_dir", "seed",    "threads",        "keep_minimizers",
                                                 "preset", "long_running", "description"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw std::invalid_argument("config: unknown key '" + it.key() + "'");

  ExperimentConfig c;
  if (!j.contains("model")) throw std::invalid_argument("config: missing 'model'");
  const json& m = j.at("model");
  read_opt(m, "family", c.model.family);
  read_opt(m, "seed", c.model.seed);
  if (c.model.family == "syk") {
    read_opt(m, "variant", c.model.variant);
    read_opt(m, "N", c.model.n);
    read_opt(m, "epsilon", c.model.epsilon);
    parse_variant(c.model.variant);
    // the SYK model spec may carry the locality settings itself
    read_opt(m, "threshold_k", c.threshold_k);
    read_opt(m, "su_restriction", c.su_restriction);
  } else if (c.model.family == "resonant") {
    read_opt(m, "kind", c.model.kind);
    read_opt(m, "N", c.model.particles);
    read_opt(m, "M", c.model.energy);
    auto kind = parse_coupling(c.model.kind);
    if (m.contains("params")) {
      const json& p = m.at("params");
      if (kind == CouplingKind::Alpha) read_opt(p, "alpha", c.model.param);
      if (kind == CouplingKind::Delta) read_opt(p, "delta", c.model.param);
    }
  } else if (c.model.family == "levels") {
    read_opt(m, "kind", c.model.kind);
    read_opt(m, "D", c.model.dim);
    if (c.model.kind != "uniform" && c.model.kind != "goe")
      throw std::invalid_argument("config: levels kind must be 'uniform' or 'goe'");
    if (c.model.dim < 4) throw std::invalid_argument("config: levels family needs D >= 4");
  } else {
    throw std::invalid_argument("config: unknown model family '" + c.model.family + "' (syk, resonant, levels)");
  }

  read_opt(j, "threshold_k", c.threshold_k);
  read_opt(j, "su_restriction", c.su_restriction);
  if (j.contains("mu") && !j.at("mu").is_null()) c.mu = j.at("mu").get<double>();
  if (j.contains("nu") && !j.at("nu").is_null()) c.nu = j.at("nu").get<double>();
  if (j.contains("time")) {
    const json& t = j.at("time");
    read_opt(t, "start", c.time.start);
    read_opt(t, "stop", c.time.stop);
    read_opt(t, "stride", c.time.stride);
  }
  if (j.contains("plateau_window") && !j.at("plateau_window").is_null()) {
    const json& w = j.at("plateau_window");
    PlateauWindow pw;
    pw.t_start = w.at("t_start").get<double>();
    pw.t_end = w.at("t_end").get<double>();
    pw.stride = w.at("stride").get<double>();
    c.plateau_window = pw;
  }
  read_opt(j, "solver", c.solver);
  parse_method(c.solver);
  read_opt(j, "output_dir", c.output_dir);
  read_opt(j, "seed", c.seed);
  read_opt(j, "threads", c.threads);
  read_opt(j, "keep_minimizers", c.keep_minimizers);
  read_opt(j, "preset", c.preset);
  read_opt(j, "long_running", c.long_running);
  if (c.threshold_k < 0) throw std::invalid_argument("config: threshold_k must be >= 0");
  if (c.mu && *c.mu < 1.0) throw std::invalid_argument("config: mu must be >= 1");
  if (!(c.time.stride > 0.0) || c.time.stop < c.time.start)
    throw std::invalid_argument("config: time grid needs stride > 0 and stop >= start");
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json m;
  m["family"] = c.model.family;
  m["seed"] = c.model.seed;
  if (c.model.family == "syk") {
    m["variant"] = c.model.variant;
    m["N"] = c.model.n;
    m["epsilon"] = c.model.epsilon;
  } else if (c.model.family == "resonant") {
    m["kind"] = c.model.kind;
    m["N"] = c.model.particles;
    m["M"] = c.model.energy;
    auto kind = parse_coupling(c.model.kind);
    if (kind == CouplingKind::Alpha) m["params"] = {{"alpha", c.model.param}};
    if (kind == CouplingKind::Delta) m["params"] = {{"delta", c.model.param}};
  } else {
    m["kind"] = c.model.kind;
    m["D"] = c.model.dim;
  }
  json j;
  j["model"] = m;
  j["threshold_k"] = c.threshold_k;
  j["su_restriction"] = c.su_restriction;
  j["mu"] = c.mu ? json(*c.mu) : json(nullptr);
  j["nu"] = c.nu ? json(*c.nu) : json(nullptr);
  j["time"] = {{"start", c.time.start}, {"stop", c.time.stop}, {"stride", c.time.stride}};
  if (c.plateau_window)
    j["plateau_window"] = {{"t_start", c.plateau_window->t_start},
                           {"t_end", c.plateau_window->t_end},
                           {"stride", c.plateau_window->stride}};
  else
    j["plateau_window"] = nullptr;
  j["solver"] = c.solver;
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["keep_minimizers"] = c.keep_minimizers;
  j["preset"] = c.preset;
  j["long_running"] = c.long_running;
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  json j = config_to_json(c);
  // execution-only settings do not change results
  j.erase("threads");
  j.erase("output_dir");
  std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BuiltModel build_model(const ExperimentConfig& c, bool with_vectors) {
  BuiltModel bm;
  const auto& m = c.model;
  bm.metadata["model"] = config_to_json(c)["model"];
  if (m.family == "syk") {
    bm.rep = std::make_unique<CliffordRep>(build_clifford(m.n));
    auto couplings = sample_couplings(parse_variant(m.variant), m.n, m.epsilon, m.seed);
    bm.hamiltonian = build_syk(*bm.rep, couplings);
    bm.classifier = std::make_unique<SykClassifier>(*bm.rep, c.threshold_k, c.su_restriction);
  } else if (m.family == "resonant") {
    bm.block = std::make_unique<Block>(m.particles, m.energy);
    CouplingScheme scheme{parse_coupling(m.kind), m.param, m.seed};
    bm.hamiltonian = build_resonant(*bm.block, scheme);
    bm.classifier = std::make_unique<ResonantClassifier>(*bm.block, c.threshold_k);
  } else {
    std::mt19937_64 rng(m.seed);
    Eigen::VectorXd e(m.dim);
    if (m.kind == "uniform") {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (auto& v : e) v = u(rng);
      std::sort(e.data(), e.data() + e.size());
    } else {
      std::normal_distribution<double> g(0.0, 1.0);
      Eigen::MatrixXd a(m.dim, m.dim);
      for (Eigen::Index j = 0; j < m.dim; ++j)
        for (Eigen::Index i = 0; i < m.dim; ++i) a(i, j) = g(rng);
      e = eigenvalues(HermitianMatrix(Eigen::MatrixXd(0.5 * (a + a.transpose()))));
    }
    bm.spectrum.energies = e;
    bm.normalized = normalize_spectrum(e);
    bm.metadata["dimension"] = m.dim;
    return bm;
  }
  if (with_vectors) {
    bm.spectrum = eigendecompose(*bm.hamiltonian);
  } else {
    bm.spectrum.energies = eigenvalues(*bm.hamiltonian);
  }
  bm.normalized = normalize_spectrum(bm.spectrum.energies);
  bm.metadata["dimension"] = bm.spectrum.dim();
  return bm;
}

}  // namespace latbound::cli
