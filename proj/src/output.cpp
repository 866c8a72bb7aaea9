#include "dicke/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace dicke {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF on all hosts
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

nlohmann::ordered_json config_echo(const RunConfig& run) {
  nlohmann::ordered_json j;
  j["subcommand"] = run.subcommand();
  nlohmann::ordered_json vals;
  for (const auto& [k, v] : run.values()) vals[k] = v;
  j["values"] = vals;
  char hash[20];
  std::snprintf(hash, sizeof(hash), "%016llx",
                (unsigned long long)run.content_hash());
  j["content_hash"] = hash;
  return j;
}

void dump_json(const std::string& path, const nlohmann::ordered_json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_number(row[i]);
    }
    out << "\n";
  }
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec,
                          double gamma_el_per_s, double g0) {
  const int N = rec.n_spins;
  std::vector<std::string> header = {"t_ms", "B_kHz"};
  for (int j = 0; j <= N; ++j) {
    const int twice_m = 2 * j - N;  // 2M to keep half-integer labels exact
    std::string label = "P_M_";
    if (N % 2 == 0) {
      label += std::to_string(twice_m / 2);
    } else {
      label += std::to_string(twice_m) + "over2";
    }
    header.push_back(label);
  }
  for (const char* c : {"Sx", "Sx_dephased", "Sy", "abs_Sz_over_N", "n_phonon",
                        "orderparam_z", "corr_sy", "corr_sy_inferred",
                        "parity"}) {
    header.push_back(c);
  }

  const auto sx_deph = apply_dephasing(rec.times, rec.sx, gamma_el_per_s);
  // with the coupling off there is no correlator to reconstruct
  const auto inferred =
      g0 > 0.0 ? infer_spin_phonon(rec.times, sx_deph, gamma_el_per_s, N, g0)
               : std::vector<double>(rec.times.size(), 0.0);

  std::vector<std::vector<double>> rows;
  rows.reserve(rec.times.size());
  for (size_t i = 0; i < rec.times.size(); ++i) {
    std::vector<double> row = {rec.times[i], angular_to_khz(rec.field[i])};
    for (int j = 0; j <= N; ++j) row.push_back(rec.p_mz(Eigen::Index(i), j));
    row.push_back(rec.sx[i]);
    row.push_back(sx_deph[i]);
    row.push_back(rec.sy[i]);
    row.push_back(rec.abs_sz[i] / N);
    row.push_back(rec.n_phonon[i]);
    row.push_back(rec.corr_z[i]);
    row.push_back(rec.corr_y[i]);
    row.push_back(inferred[i]);
    row.push_back(rec.parity[i]);
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void write_quench_summary(const std::string& path, const RunConfig& run,
                          const TrajectoryRecord& rec) {
  const DickeConfig cfg = run.dicke();
  nlohmann::ordered_json j = config_echo(run);
  const double bc = critical_field(cfg);
  j["B_c_kHz"] = angular_to_khz(bc);
  const double tc = time_to_reach(cfg.ramp, bc, cfg.t_final);
  if (std::isnan(tc)) {
    j["t_crit_ms"] = nullptr;
  } else {
    j["t_crit_ms"] = tc;
  }
  j["n_max"] = rec.n_max;
  j["total_steps"] = rec.total_steps;
  nlohmann::ordered_json fin;
  const size_t k = rec.times.size() - 1;
  fin["t_ms"] = rec.times[k];
  fin["Sx"] = rec.sx[k];
  fin["Sy"] = rec.sy[k];
  fin["Sz"] = rec.sz[k];
  fin["abs_Sz_over_N"] = rec.abs_sz[k] / rec.n_spins;
  fin["n_phonon"] = rec.n_phonon[k];
  fin["orderparam_z"] = rec.corr_z[k];
  fin["parity"] = rec.parity[k];
  j["final"] = fin;
  dump_json(path, j);
}

void write_gap_scan_csv(const std::string& path,
                        const std::vector<GapPoint>& points) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : points) {
    rows.push_back({double(p.n_spins), angular_to_khz(p.b),
                    angular_to_khz(p.gap), p.order_param});
  }
  write_csv(path, {"N", "B_kHz", "gap_kHz", "orderparam"}, rows);
}

void write_detuning_scan_csv(const std::string& path,
                             const std::vector<DetuningPoint>& points) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : points) {
    rows.push_back({angular_to_khz(p.delta), angular_to_khz(p.gap_at_bc)});
  }
  write_csv(path, {"delta_kHz", "gap_at_Bc_kHz"}, rows);
}

void write_report_json(
    const std::string& path, const RunConfig& run,
    const std::vector<std::pair<std::string, double>>& fields) {
  nlohmann::ordered_json j = config_echo(run);
  for (const auto& [k, v] : fields) j[k] = v;
  dump_json(path, j);
}

}  // namespace dicke
