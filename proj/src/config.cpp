#include "ringbumps/config.hpp"

#include <fstream>
#include <sstream>

namespace ringbumps {

std::string RunConfig::to_text() const {
  std::ostringstream out;
  out << "[model]\n";
  out << "n=" << n << "\n";
  out << "kappa=" << format_number(kappa) << "\n";
  out << "rho_threshold=" << format_number(rho_threshold) << "\n";
  out << "firing_kind=" << firing_kind << "\n";
  out << "[init]\n";
  out << "kind=" << init_kind << "\n";
  out << "path=" << init_path << "\n";
  out << "[sim]\n";
  out << "t_end=" << format_number(t_end) << "\n";
  out << "snapshot_dt=" << format_number(snapshot_dt) << "\n";
  out << "seed=" << seed << "\n";
  out << "[sweep]\n";
  out << "n_replicas=" << n_replicas << "\n";
  out << "parallelism=" << parallelism << "\n";
  out << "[output]\n";
  out << "directory=" << directory << "\n";
  out << "emit_svg=" << (emit_svg ? "true" : "false") << "\n";
  return out.str();
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("bad config line: " + line);
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto full = section + "." + key;
    if (full == "model.n") cfg.n = std::stoi(val);
    else if (full == "model.kappa") cfg.kappa = std::stod(val);
    else if (full == "model.rho_threshold") cfg.rho_threshold = std::stod(val);
    else if (full == "model.firing_kind") cfg.firing_kind = val;
    else if (full == "init.kind") cfg.init_kind = val;
    else if (full == "init.path") cfg.init_path = val;
    else if (full == "sim.t_end") cfg.t_end = std::stod(val);
    else if (full == "sim.snapshot_dt") cfg.snapshot_dt = std::stod(val);
    else if (full == "sim.seed") cfg.seed = std::stoull(val);
    else if (full == "sweep.n_replicas") cfg.n_replicas = std::stoi(val);
    else if (full == "sweep.parallelism") cfg.parallelism = std::stoi(val);
    else if (full == "output.directory") cfg.directory = val;
    else if (full == "output.emit_svg") cfg.emit_svg = (val == "true" || val == "1");
    else throw ConfigError("unknown config key: " + full);
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

void RunConfig::validate() const {
  if (n < 1) throw ConfigError("n must be >= 1");
  if (firing_kind != "sigmoid" && firing_kind != "heaviside")
    throw ConfigError("firing_kind must be sigmoid or heaviside");
  if (firing_kind == "sigmoid" && !(kappa > 0.0))
    throw ConfigError("kappa must be positive");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(snapshot_dt > 0.0)) throw ConfigError("snapshot_dt must be positive");
  if (n_replicas < 1) throw ConfigError("n_replicas must be >= 1");
  if (parallelism < 0) throw ConfigError("parallelism must be >= 0");
  if (init_kind != "bump" && init_kind != "bump-plus-mode2" &&
      init_kind != "quarter-bump" && init_kind != "zero" && init_kind != "file")
    throw ConfigError("unknown init kind: " + init_kind);
  if (init_kind == "file") {
    std::ifstream probe(init_path);
    if (!probe) throw ConfigError("init file not readable: " + init_path);
  }
}

FiringFunction RunConfig::firing() const {
  return firing_kind == "heaviside" ? FiringFunction::heaviside(rho_threshold)
                                    : FiringFunction::sigmoid(kappa, rho_threshold);
}

}  // namespace ringbumps
