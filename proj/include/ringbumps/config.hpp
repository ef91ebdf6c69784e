#pragma once

#include <cstdint>
#include <string>

#include "ringbumps/firing.hpp"
#include "ringbumps/io.hpp"

namespace ringbumps {

// Run configuration shared by all subcommands. Serializes to an ini-style
// text block (the same format the CLI accepts via --config); the canonical
// serialization is also what gets hashed into the manifest.
struct RunConfig {
  // model
  int n = 500;
  double kappa = 0.05;
  double rho_threshold = 0.5;
  std::string firing_kind = "sigmoid";  // sigmoid | heaviside
  // init
  std::string init_kind = "bump";  // bump | bump-plus-mode2 | quarter-bump | zero | file
  std::string init_path;
  // sim
  double t_end = 500.0;
  double snapshot_dt = 0.5;
  std::uint64_t seed = 1;
  // sweep
  int n_replicas = 100;
  int parallelism = 0;  // 0: all available (capped by RINGBUMPS_THREADS)
  // output
  std::string directory = "out";
  bool emit_svg = false;

  std::string to_text() const;
  static RunConfig from_text(const std::string& text);
  static RunConfig from_file(const std::string& path);

  void validate() const;  // throws ConfigError
  // hash of the run parameters; the [output] section is excluded so the same
  // run written to two directories is recognizably identical
  std::uint64_t hash() const {
    std::string text = to_text();
    return fnv1a64(text.substr(0, text.find("[output]")));
  }
  FiringFunction firing() const;
};

}  // namespace ringbumps
