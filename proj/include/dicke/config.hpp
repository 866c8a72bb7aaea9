#pragma once

#include <map>
#include <string>
#include <vector>

#include "dicke/lindblad.hpp"
#include "dicke/model.hpp"
#include "dicke/types.hpp"

namespace dicke {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key-value run configuration with optional [subcommand] sections.
/// All units are explicit in the key names (ordinary frequencies in kHz,
/// times in ms, rates in 1/s). Unknown keys are rejected.
class RunConfig {
 public:
  static RunConfig load(const std::string& path, const std::string& subcommand);
  static RunConfig parse(const std::string& text, const std::string& subcommand);
  static RunConfig from_map(const std::map<std::string, std::string>& values,
                            const std::string& subcommand);

  const std::string& subcommand() const { return subcommand_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  bool has(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> num_list(const std::string& key) const;
  std::vector<int> int_list(const std::string& key) const;

  /// Physical + numerical configuration in internal units (rad/ms, ms).
  DickeConfig dicke() const;
  LindbladConfig lindblad_oracle() const;

  /// FNV-1a hash of the canonical key=value serialization.
  uint64_t content_hash() const;

 private:
  std::string subcommand_;
  std::map<std::string, std::string> values_;
};

}  // namespace dicke
