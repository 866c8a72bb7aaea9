#pragma once

#include <string>
#include <vector>

#include "dicke/config.hpp"
#include "dicke/propagate.hpp"
#include "dicke/spectrum.hpp"

namespace dicke {

/// One CSV cell, rendered with 12 significant digits for doubles.
std::string format_number(double v);

/// UTF-8, LF line endings, header row first.
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Trajectory CSV: t_ms, B_kHz, P(M) for M = -N/2..N/2, Sx, Sx_dephased, Sy,
/// abs_Sz_over_N, n_phonon, orderparam_z, corr_sy, corr_sy_inferred, parity.
void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec,
                          double gamma_el_per_s, double g0);

/// JSON run summary: echoed config, content hash, t_crit, final observables.
void write_quench_summary(const std::string& path, const RunConfig& run,
                          const TrajectoryRecord& rec);

void write_gap_scan_csv(const std::string& path,
                        const std::vector<GapPoint>& points);
void write_detuning_scan_csv(const std::string& path,
                             const std::vector<DetuningPoint>& points);

/// Generic JSON report (config echo + hash + named numeric fields).
void write_report_json(const std::string& path, const RunConfig& run,
                       const std::vector<std::pair<std::string, double>>& fields);

}  // namespace dicke
