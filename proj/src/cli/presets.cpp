#include "latbound/cli/config.hpp"

#include <map>
#include <stdexcept>

namespace latbound::cli {

using nlohmann::json;

namespace {

// Desk presets shrink the figure parameters so a run takes seconds to a few
// minutes on one core. Full presets use the full-scale sizes.
const std::map<std::string, json>& presets() {
  static const std::map<std::string, json> table = [] {
    std::map<std::string, json> t;
    auto plateau = [](double a, double b, double s) { return json{{"t_start", a}, {"t_end", b}, {"stride", s}}; };

    t["paper-fig-1-desk"] = {
        {"description", "bi-invariant complexity of a uniform random spectrum"},
        {"model", {{"family", "levels"}, {"kind", "uniform"}, {"D", 1000}, {"seed", 1}}},
        {"mu", 1.0},
        {"solver", "biinvariant"},
        {"time", {{"start", 0}, {"stop", 200000}, {"stride", 100}}},
        {"plateau_window", plateau(100000, 200000, 100)}};
    t["paper-fig-1-full"] = t["paper-fig-1-desk"];
    t["paper-fig-1-full"]["model"]["D"] = 3000;
    t["paper-fig-1-full"]["long_running"] = true;

    t["paper-fig-2-desk"] = {{"description", "Q spectrum of a quartic chaotic SYK deformation"},
                             {"model", {{"family", "syk"}, {"variant", "chaotic4"}, {"N", 10}, {"epsilon", 5.0}, {"seed", 1}}},
                             {"threshold_k", 4}};
    t["paper-fig-2-full"] = t["paper-fig-2-desk"];
    t["paper-fig-2-full"]["model"]["N"] = 20;
    t["paper-fig-2-full"]["long_running"] = true;

    t["paper-fig-3-desk"] = {{"description", "complexity bound for the integrable SYK model"},
                             {"model", {{"family", "syk"}, {"variant", "integrable"}, {"N", 10}, {"epsilon", 1.0}, {"seed", 1}}},
                             {"threshold_k", 4},
                             {"time", {{"start", 0}, {"stop", 4000}, {"stride", 10}}},
                             {"plateau_window", plateau(2000, 4000, 10)}};
    t["paper-fig-3-full"] = t["paper-fig-3-desk"];
    t["paper-fig-3-full"]["model"]["N"] = 20;
    t["paper-fig-3-full"]["long_running"] = true;

    t["paper-fig-4-desk"] = {{"description", "plateau of a quartic chaotic SYK model"},
                             {"model", {{"family", "syk"}, {"variant", "chaotic4"}, {"N", 10}, {"epsilon", 1.0}, {"seed", 1}}},
                             {"threshold_k", 4},
                             {"time", {{"start", 0}, {"stop", 4000}, {"stride", 10}}},
                             {"plateau_window", plateau(2000, 4000, 10)}};
    t["paper-fig-4-full"] = t["paper-fig-4-desk"];
    t["paper-fig-4-full"]["model"]["N"] = 24;
    t["paper-fig-4-full"]["long_running"] = true;

    t["paper-fig-5-desk"] = {{"description", "level spacings of the truncated Szego block"},
                             {"model", {{"family", "resonant"}, {"kind", "truncated"}, {"N", 20}, {"M", 20}, {"seed", 1}}}};
    t["paper-fig-5-full"] = t["paper-fig-5-desk"];
    t["paper-fig-5-full"]["model"]["N"] = 30;
    t["paper-fig-5-full"]["model"]["M"] = 30;
    t["paper-fig-5-full"]["long_running"] = true;

    t["paper-fig-6-desk"] = {{"description", "Q spectrum of a random resonant Hamiltonian"},
                             {"model", {{"family", "resonant"}, {"kind", "random"}, {"N", 12}, {"M", 12}, {"seed", 1}}},
                             {"threshold_k", 4}};
    t["paper-fig-6-full"] = t["paper-fig-6-desk"];
    t["paper-fig-6-full"]["model"]["N"] = 30;
    t["paper-fig-6-full"]["model"]["M"] = 30;
    t["paper-fig-6-full"]["long_running"] = true;

    t["paper-fig-7-desk"] = {{"description", "complexity bound of the truncated Szego block"},
                             {"model", {{"family", "resonant"}, {"kind", "truncated"}, {"N", 12}, {"M", 12}, {"seed", 1}}},
                             {"threshold_k", 2},
                             {"time", {{"start", 0}, {"stop", 6000}, {"stride", 10}}},
                             {"plateau_window", plateau(4000, 6000, 10)}};
    t["paper-fig-7-full"] = t["paper-fig-7-desk"];
    t["paper-fig-7-full"]["model"]["N"] = 30;
    t["paper-fig-7-full"]["model"]["M"] = 30;
    t["paper-fig-7-full"]["time"] = {{"start", 0}, {"stop", 54000}, {"stride", 100}};
    t["paper-fig-7-full"]["plateau_window"] = plateau(50000, 54000, 100);
    t["paper-fig-7-full"]["long_running"] = true;

    t["paper-fig-8-desk"] = {{"description", "plateau of a random resonant block"},
                             {"model", {{"family", "resonant"}, {"kind", "random"}, {"N", 12}, {"M", 12}, {"seed", 1}}},
                             {"threshold_k", 4},
                             {"time", {{"start", 4000}, {"stop", 6000}, {"stride", 10}}},
                             {"plateau_window", plateau(4000, 6000, 10)}};
    t["paper-fig-8-full"] = t["paper-fig-8-desk"];
    t["paper-fig-8-full"]["model"]["N"] = 25;
    t["paper-fig-8-full"]["model"]["M"] = 25;
    t["paper-fig-8-full"]["time"] = {{"start", 50000}, {"stop", 54000}, {"stride", 100}};
    t["paper-fig-8-full"]["plateau_window"] = plateau(50000, 54000, 100);
    t["paper-fig-8-full"]["long_running"] = true;

    t["paper-fig-9-desk"] = {{"description", "solver ladder on the truncated Szego block"},
                             {"model", {{"family", "resonant"}, {"kind", "truncated"}, {"N", 12}, {"M", 12}, {"seed", 1}}},
                             {"threshold_k", 6},
                             {"solver", "naive"},
                             {"time", {{"start", 0}, {"stop", 6000}, {"stride", 10}}},
                             {"plateau_window", plateau(4000, 6000, 10)}};
    t["paper-fig-9-full"] = t["paper-fig-9-desk"];
    t["paper-fig-9-full"]["model"]["N"] = 30;
    t["paper-fig-9-full"]["model"]["M"] = 30;
    t["paper-fig-9-full"]["long_running"] = true;

    t["paper-fig-10-desk"] = {{"description", "measured plateau against the Gram-Schmidt estimate"},
                              {"model", {{"family", "resonant"}, {"kind", "truncated"}, {"N", 12}, {"M", 12}, {"seed", 1}}},
                              {"threshold_k", 4},
                              {"time", {{"start", 4000}, {"stop", 6000}, {"stride", 10}}},
                              {"plateau_window", plateau(4000, 6000, 10)}};
    t["paper-fig-10-full"] = t["paper-fig-10-desk"];
    t["paper-fig-10-full"]["model"]["N"] = 30;
    t["paper-fig-10-full"]["model"]["M"] = 30;
    t["paper-fig-10-full"]["time"] = {{"start", 50000}, {"stop", 54000}, {"stride", 100}};
    t["paper-fig-10-full"]["plateau_window"] = plateau(50000, 54000, 100);
    t["paper-fig-10-full"]["long_running"] = true;

    t["paper-fig-11-desk"] = {{"description", "Gram-Schmidt lengths before and after reduction"},
                              {"model", {{"family", "resonant"}, {"kind", "truncated"}, {"N", 12}, {"M", 12}, {"seed", 1}}},
                              {"threshold_k", 6},
                              {"time", {{"start", 4000}, {"stop", 6000}, {"stride", 10}}},
                              {"plateau_window", plateau(4000, 6000, 10)}};
    t["paper-fig-11-full"] = t["paper-fig-11-desk"];
    t["paper-fig-11-full"]["model"]["N"] = 25;
    t["paper-fig-11-full"]["model"]["M"] = 25;
    t["paper-fig-11-full"]["long_running"] = true;

    for (auto& [name, j] : t) j["preset"] = name;
    return t;
  }();
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : presets()) out.push_back(name);
  return out;
}

json preset_json(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) throw std::invalid_argument("unknown preset '" + name + "'");
  return it->second;
}

}  // namespace latbound::cli
