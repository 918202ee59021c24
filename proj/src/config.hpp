#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergodic.hpp"

namespace ergolab {

// Flat sectioned key=value config. Sections and keys keep insertion order
// so resolved echoes are stable.
class Config {
 public:
  struct Entry {
    std::string key, value;
    int line = 0;
  };
  struct Section {
    std::string name;
    std::vector<Entry> entries;
  };

  static Config parse(const std::string& text, const std::string& source_name = "<config>");
  static Config parse_file(const std::string& path);

  bool has_section(const std::string& name) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  const std::vector<Section>& sections() const { return sections_; }
  const std::string& source() const { return source_; }
  // Canonical re-parseable text.
  std::string to_text() const;

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const;

 private:
  std::vector<Section> sections_;
  std::string source_;
  const Entry* find(const std::string& section, const std::string& key) const;
};

struct ExperimentSetup {
  Problem problem;
  int grid_n = 0;
  SolveOptions solve;
  LadderOptions ladder;
  ErgodicOptions ergodic;
  BoundaryData boundary;
  std::optional<double> rate_window_lo, rate_window_hi;
  std::string rate_profile;      // optional profile to fit instead of solving
  std::string ergodic_path;      // "explosive" | "dirichlet"
  std::vector<double> verify_deltas;
  std::vector<std::string> verify_checks;
};

// Validates every key; unknown sections/keys fail with a line diagnostic.
ExperimentSetup load_setup(const Config& cfg, int grid_n_override = 0);

// The fully-resolved configuration (defaults filled in) as a Config.
Config resolved_config(const ExperimentSetup& setup);

}  // namespace ergolab
