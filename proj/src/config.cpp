#include "dicke/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace dicke {

namespace {

const std::set<std::string> kGlobalKeys = {
    "n",          "g0_khz",       "delta_khz",    "gamma_el_per_s",
    "nbar",       "bias_epsilon_khz", "ramp",     "b0_khz",
    "tau_ms",     "tau_ramp_ms",  "b_const_khz",  "t_final_ms",
    "n_max",      "eta",          "dt_max_ms",    "samples",
};

const std::map<std::string, std::set<std::string>> kSubcommandKeys = {
    {"quench", {}},
    {"lipkin", {}},
    {"spectrum", {"n_list", "b_points", "b_max_over_bc", "k_pairs"}},
    {"scan-detuning", {"delta_over_bc_list"}},
    {"disentangle", {"protocol", "ramp_scale"}},
    {"validate",
     {"oracle_n", "oracle_n_max", "corrupt_gamma_factor", "oracle_b_over_bc",
      "oracle_samples"}},
    {"sweep-nbar", {"nbar_list"}},
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void check_key(const std::string& section, const std::string& key,
               int line_no) {
  const auto where = " (line " + std::to_string(line_no) + ")";
  if (section.empty()) {
    if (!kGlobalKeys.count(key)) {
      // allow subcommand-specific keys without a section header
      for (const auto& [name, keys] : kSubcommandKeys) {
        if (keys.count(key)) return;
      }
      throw ConfigError("unknown config key '" + key + "'" + where);
    }
    return;
  }
  const auto it = kSubcommandKeys.find(section);
  if (it == kSubcommandKeys.end()) {
    throw ConfigError("unknown config section [" + section + "]" + where);
  }
  if (!it->second.count(key) && !kGlobalKeys.count(key)) {
    throw ConfigError("unknown config key '" + key + "' in section [" +
                      section + "]" + where);
  }
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text,
                           const std::string& subcommand) {
  if (!kSubcommandKeys.count(subcommand)) {
    throw ConfigError("unknown subcommand '" + subcommand + "'");
  }
  RunConfig cfg;
  cfg.subcommand_ = subcommand;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("malformed section header (line " +
                          std::to_string(line_no) + ")");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value (line " +
                        std::to_string(line_no) + ")");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("empty key or value (line " + std::to_string(line_no) +
                        ")");
    }
    check_key(section, key, line_no);
    if (section.empty() || section == subcommand) {
      cfg.values_[key] = value;
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path,
                          const std::string& subcommand) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), subcommand);
}

RunConfig RunConfig::from_map(const std::map<std::string, std::string>& values,
                              const std::string& subcommand) {
  std::ostringstream text;
  for (const auto& [k, v] : values) text << k << " = " << v << "\n";
  return parse(text.str(), subcommand);
}

bool RunConfig::has(const std::string& key) const {
  return values_.count(key) > 0;
}

std::string RunConfig::str(const std::string& key,
                           const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::num(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size()) {
    throw ConfigError("bad numeric value for '" + key + "': " + it->second);
  }
  return v;
}

int RunConfig::integer(const std::string& key, int fallback) const {
  const double v = num(key, double(fallback));
  const int i = int(std::lround(v));
  if (std::abs(v - i) > 1e-9) {
    throw ConfigError("expected integer for '" + key + "'");
  }
  return i;
}

std::vector<double> RunConfig::num_list(const std::string& key) const {
  std::vector<double> out;
  const auto it = values_.find(key);
  if (it == values_.end()) return out;
  std::istringstream in(it->second);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw ConfigError("empty list for '" + key + "'");
  return out;
}

std::vector<int> RunConfig::int_list(const std::string& key) const {
  std::vector<int> out;
  for (double v : num_list(key)) out.push_back(int(std::lround(v)));
  return out;
}

DickeConfig RunConfig::dicke() const {
  DickeConfig c;
  c.n_spins = integer("n", 68);
  c.g0 = khz_to_angular(num("g0_khz", 1.32));
  c.delta = khz_to_angular(num("delta_khz", -1.0));
  c.gamma_el = num("gamma_el_per_s", 0.0);
  c.nbar = num("nbar", 0.0);
  c.bias_epsilon = khz_to_angular(num("bias_epsilon_khz", 0.0));
  const std::string ramp = str("ramp", "exp");
  if (ramp == "lin") {
    c.ramp = RampProfile::linear(khz_to_angular(num("b0_khz", 7.1)),
                                 num("tau_ramp_ms", 2.0));
  } else if (ramp == "exp") {
    c.ramp = RampProfile::exponential(khz_to_angular(num("b0_khz", 7.1)),
                                      num("tau_ms", 0.6));
  } else if (ramp == "const") {
    c.ramp = RampProfile::constant(khz_to_angular(num("b_const_khz", 0.0)));
  } else {
    throw ConfigError("ramp must be one of lin, exp, const");
  }
  c.t_final = num("t_final_ms", 2.0);
  c.n_max_override = integer("n_max", -1);
  c.eta = num("eta", 0.02);
  c.dt_max = num("dt_max_ms", 0.01);
  c.samples = integer("samples", 100);
  c.validate();
  return c;
}

LindbladConfig RunConfig::lindblad_oracle() const {
  const DickeConfig d = dicke();
  LindbladConfig c;
  c.n_spins = integer("oracle_n", 2);
  c.g0 = d.g0;
  c.delta = d.delta;
  c.gamma_el = d.gamma_el;
  c.bias_epsilon = d.bias_epsilon;
  c.ramp = d.ramp;
  c.n_max = integer("oracle_n_max", 12);
  return c;
}

uint64_t RunConfig::content_hash() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  mix(subcommand_);
  for (const auto& [k, v] : values_) {
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  return h;
}

}  // namespace dicke
