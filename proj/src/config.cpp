#include "qbnet/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace qbnet {

namespace {

struct Cursor {
  const std::string& path;
  int line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(path + ":" + std::to_string(line) + ": " + what);
  }
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const Cursor& at, const std::string& field, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    at.fail("field \"" + field + "\": cannot parse number \"" + value + "\"");
  }
}

long long parse_integer(const Cursor& at, const std::string& field, const std::string& value) {
  try {
    size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    at.fail("field \"" + field + "\": cannot parse integer \"" + value + "\"");
  }
}

// "j-k: weight" or "j-k" (weight defaults to 1).
WeightedEdge parse_edge(const Cursor& at, const std::string& value) {
  const auto dash = value.find('-');
  if (dash == std::string::npos) at.fail("field \"edge\": expected \"j-k: weight\"");
  const auto colon = value.find(':', dash);
  WeightedEdge edge;
  edge.j = static_cast<int>(parse_integer(at, "edge", trim(value.substr(0, dash))));
  const std::string second = colon == std::string::npos
                                 ? trim(value.substr(dash + 1))
                                 : trim(value.substr(dash + 1, colon - dash - 1));
  edge.k = static_cast<int>(parse_integer(at, "edge", second));
  edge.weight =
      colon == std::string::npos ? 1.0 : parse_number(at, "edge", trim(value.substr(colon + 1)));
  return edge;
}

}  // namespace

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);

  ExperimentConfig cfg;
  bool saw_n = false, saw_model = false;
  std::string section;
  std::string line;
  Cursor at{path, 0};
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  while (std::getline(in, line)) {
    ++at.line;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') at.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "simulation") at.fail("unknown section \"" + section + "\"");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) at.fail("expected \"key = value\"");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) at.fail("missing key");
    if (value.empty()) at.fail("field \"" + key + "\": missing value");

    if (section == "simulation") {
      if (key == "steps") {
        cfg.simulation.steps = static_cast<int>(parse_integer(at, key, value));
        if (cfg.simulation.steps < 1) at.fail("field \"steps\": must be >= 1");
      } else if (key == "trajectories") {
        cfg.simulation.trajectories = static_cast<int>(parse_integer(at, key, value));
        if (cfg.simulation.trajectories < 1) at.fail("field \"trajectories\": must be >= 1");
      } else if (key == "seed") {
        cfg.simulation.seed = static_cast<std::uint64_t>(parse_integer(at, key, value));
      } else if (key == "initial") {
        cfg.simulation.initial = value;
      } else {
        at.fail("unknown simulation field \"" + key + "\"");
      }
      continue;
    }

    if (key == "n") {
      cfg.n = static_cast<int>(parse_integer(at, key, value));
      saw_n = true;
    } else if (key == "model") {
      saw_model = true;
      if (value == "consensus") {
        cfg.model = ModelKind::kConsensus;
      } else if (value == "amplitude_damping") {
        cfg.model = ModelKind::kAmplitudeDamping;
      } else if (value == "depolarizing") {
        cfg.model = ModelKind::kDepolarizing;
      } else if (value == "lindblad") {
        cfg.model = ModelKind::kLindbladFiles;
      } else {
        at.fail("field \"model\": unknown model \"" + value + "\"");
      }
    } else if (key == "edge") {
      cfg.edges.push_back(parse_edge(at, value));
    } else if (key == "gamma") {
      cfg.gamma = parse_number(at, key, value);
      if (!(cfg.gamma > 0.0)) at.fail("field \"gamma\": must be positive");
    } else if (key == "hamiltonian") {
      cfg.hamiltonian_path = (base / value).string();
    } else if (key == "dissipator") {
      cfg.dissipator_paths.push_back((base / value).string());
    } else if (key == "theta") {
      cfg.theta = parse_number(at, key, value);
    } else if (key == "phi") {
      cfg.phi = parse_number(at, key, value);
    } else if (key == "tau") {
      cfg.tau = parse_number(at, key, value);
      if (*cfg.tau < 0.0) at.fail("field \"tau\": must be nonnegative");
    } else if (key == "tau_grid") {
      std::istringstream grid(value);
      std::string item;
      while (std::getline(grid, item, ',')) {
        cfg.tau_grid.push_back(parse_number(at, key, trim(item)));
      }
    } else if (key == "epsilon") {
      cfg.epsilon = parse_number(at, key, value);
      if (!(*cfg.epsilon > 0.0)) at.fail("field \"epsilon\": must be positive");
    } else {
      at.fail("unknown field \"" + key + "\"");
    }
  }

  at.line = 0;
  if (!saw_n) at.fail("field \"n\": missing (qubit count required)");
  if (cfg.n < 1 || cfg.n > kMaxQubits) {
    at.fail("field \"n\": " + std::to_string(cfg.n) + " outside [1, " +
            std::to_string(kMaxQubits) + "]");
  }
  if (!saw_model) at.fail("field \"model\": missing");
  if (cfg.model == ModelKind::kLindbladFiles) {
    if (cfg.hamiltonian_path.empty() && cfg.dissipator_paths.empty()) {
      at.fail("model \"lindblad\" needs a \"hamiltonian\" or \"dissipator\" file");
    }
    for (const auto& p : cfg.dissipator_paths) {
      if (!std::filesystem::exists(p)) at.fail("field \"dissipator\": file not found: " + p);
    }
    if (!cfg.hamiltonian_path.empty() && !std::filesystem::exists(cfg.hamiltonian_path)) {
      at.fail("field \"hamiltonian\": file not found: " + cfg.hamiltonian_path);
    }
  }
  if (cfg.model != ModelKind::kConsensus && !cfg.edges.empty()) {
    at.fail("field \"edge\": only valid for model \"consensus\"");
  }
  if (!cfg.simulation.initial.empty() &&
      static_cast<int>(cfg.simulation.initial.size()) != cfg.n) {
    at.fail("field \"initial\": bit string length does not match n");
  }
  return cfg;
}

}  // namespace qbnet
