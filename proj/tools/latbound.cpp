#include "latbound/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_common(CLI::App* sub, std::string& config, std::string& preset, std::string& out, std::uint64_t& seed,
                int& threads) {
  sub->add_option("--config", config, "JSON experiment config");
  sub->add_option("--preset", preset, "named preset, e.g. paper-fig-7-desk");
  sub->add_option("--out", out, "output directory");
  sub->add_option("--seed", seed, "seed for sampled couplings or levels");
  sub->add_option("--threads", threads, "worker threads for sweeps and Q construction");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace latbound::cli;
  CLI::App app{"Upper bounds on Nielsen complexity via lattice closest-vector heuristics"};
  app.require_subcommand(1);

  Overrides o;
  std::string config, preset, out, instance;
  std::uint64_t seed = 0;
  int threads = 0;

  const char* names[] = {"gen", "bound", "qspec", "stats", "plateau"};
  const char* help[] = {"build a Hamiltonian and its spectrum", "complexity bound trace over a time grid",
                        "eigenvalues of the Q matrix", "unfolded level-spacing statistics",
                        "plateau statistics against the Gram-Schmidt estimate"};
  std::vector<CLI::App*> subs;
  for (int i = 0; i < 5; ++i) {
    auto* s = app.add_subcommand(names[i], help[i]);
    add_common(s, config, preset, out, seed, threads);
    subs.push_back(s);
  }
  auto* cvp = app.add_subcommand("cvp", "compare closest-vector solvers on an instance file");
  cvp->add_option("--config,instance", instance, "instance JSON {basis, target}")->required();
  cvp->add_option("--out", out, "output directory");
  app.add_subcommand("presets", "list preset names");

  CLI11_PARSE(app, argc, argv);

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "presets") {
      for (const auto& p : preset_names()) std::cout << p << "\n";
      return 0;
    }
    CommandResult r;
    if (name == "cvp") {
      r = cmd_cvp(instance, out.empty() ? "out" : out);
    } else {
      if (!config.empty()) o.config = config;
      if (!preset.empty()) o.preset = preset;
      if (!out.empty()) o.out = out;
      if (sub->count("--seed")) o.seed = seed;
      if (sub->count("--threads")) o.threads = threads;
      ExperimentConfig c = resolve_config(o);
      if (c.long_running) std::cerr << "note: preset '" << c.preset << "' is long-running\n";
      if (name == "gen") r = cmd_gen(c);
      else if (name == "bound") r = cmd_bound(c);
      else if (name == "qspec") r = cmd_qspec(c);
      else if (name == "stats") r = cmd_stats(c);
      else r = cmd_plateau(c);
    }
    for (const auto& f : r.files) std::cout << f.string() << "\n";
    std::cerr << r.summary.dump() << "\n";
    return 0;
  } catch (const std::exception& e) {
    nlohmann::json err = {{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
