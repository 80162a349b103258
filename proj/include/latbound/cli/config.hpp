#pragma once

#include "latbound/complexity.hpp"
#include "latbound/resonant.hpp"
#include "latbound/syk.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace latbound::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchema = 1;

// family "syk":      variant, N, epsilon
// family "resonant": kind, N, M, alpha | delta
// family "levels":   kind (uniform | goe), D   -- synthetic spectra, no eigenvectors
struct ModelSpec {
  std::string family = "syk";
  std::string variant = "free";
  int n = 8;
  double epsilon = 1.0;
  std::string kind = "gg";
  int particles = 0;
  int energy = 0;
  double param = 0.0;
  int dim = 0;
  std::uint64_t seed = 1;
};

struct TimeGrid {
  double start = 0.0;
  double stop = 100.0;
  double stride = 1.0;
};

struct ExperimentConfig {
  ModelSpec model;
  int threshold_k = 2;
  bool su_restriction = false;
  std::optional<double> mu;  // default D
  std::optional<double> nu;
  TimeGrid time;
  std::optional<PlateauWindow> plateau_window;
  std::string solver = "babai+lll+greedy";
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  bool keep_minimizers = false;
  std::string preset;
  bool long_running = false;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
// FNV-1a of the canonical JSON form, hex.
std::string config_hash(const ExperimentConfig& c);

std::vector<std::string> preset_names();
// Throws for unknown names.
nlohmann::json preset_json(const std::string& name);

// A model built from a config. Owns the representation or block the
// classifier points into.
struct BuiltModel {
  std::unique_ptr<CliffordRep> rep;
  std::unique_ptr<Block> block;
  std::optional<HermitianMatrix> hamiltonian;
  Spectrum spectrum;           // raw energies; vectors empty for the levels family
  Eigen::VectorXd normalized;  // zero mean, unit sum of squares
  std::unique_ptr<LocalityClassifier> classifier;
  nlohmann::json metadata;
};

BuiltModel build_model(const ExperimentConfig& c, bool with_vectors = true);

}  // namespace latbound::cli
