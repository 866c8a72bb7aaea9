#pragma once

#include <utility>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/observables.hpp"
#include "dicke/types.hpp"

namespace dicke {

struct KrylovOptions {
  double tol = 1e-10;  // internal residual estimate for the step propagator
  int max_dim = 60;    // maximum Krylov subspace dimension
};

/// state <- exp(-i H dt) state via an adaptive Lanczos subspace exponential.
/// Throws ConvergenceError if max_dim is exhausted.
void krylov_step(Vec& state, const SparseMat& h, double dt,
                 const KrylovOptions& opt = {});

/// Geometric thermal weights p_n = nbar^n / (nbar+1)^(n+1), truncated at
/// cumulative weight >= 1 - tail_tol and renormalized.
struct ThermalEnsemble {
  double nbar = 0.0;
  std::vector<std::pair<int, double>> members;  // (initial Fock index, weight)

  static ThermalEnsemble build(double nbar, double tail_tol = 1e-4);
};

/// Ensemble-averaged observable time series.
struct TrajectoryRecord {
  std::vector<double> times;  // ms
  std::vector<double> field;  // B(t) at sample times (rad/ms)
  Eigen::MatrixXd p_mz;       // samples x (N+1)
  std::vector<double> sx, sy, sz, abs_sz, n_phonon, corr_z, corr_y, parity;
  int n_spins = 0;
  int n_max = 0;
  long total_steps = 0;

  void scale_and_accumulate(const TrajectoryRecord& member, double weight);
};

std::vector<double> sample_grid(const DickeConfig& cfg);

/// Propagate one pure state through the ramp with midpoint-sampled B(t) and
/// the step controls dt <= dt_max, |B(t+dt)-B(t)| <= eta B_c.
TrajectoryRecord evolve_ramp(const ProductSpace& space, const DickeConfig& cfg,
                             const DickePieces& pieces, Vec state, double t0,
                             double t1, const std::vector<double>& sample_times,
                             const ObservableSet& obs);

/// Final state after the ramp, with the same step controls but no sampling.
Vec ramp_final_state(const DickeConfig& cfg, const DickePieces& pieces,
                     Vec state, double t0, double t1);

/// Per-member quench trajectories (initial state |n> (x) |-N/2>_x for each
/// ensemble member), in ensemble order.
std::vector<TrajectoryRecord> run_quench_members(const DickeConfig& cfg,
                                                 const ThermalEnsemble& ens);

/// Weighted merge of member trajectories (fixed order, deterministic).
TrajectoryRecord combine_members(const std::vector<TrajectoryRecord>& members,
                                 const std::vector<double>& weights);

/// Thermal quench of the Dicke model through cfg.ramp.
TrajectoryRecord run_quench(const DickeConfig& cfg);

/// Same protocol on the spin sector only with the Lipkin Hamiltonian.
TrajectoryRecord run_lipkin_quench(const DickeConfig& cfg);

}  // namespace dicke
