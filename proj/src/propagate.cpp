#include "dicke/propagate.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace dicke {

void krylov_step(Vec& state, const SparseMat& h, double dt,
                 const KrylovOptions& opt) {
  if (dt == 0.0) return;
  const double nrm = state.norm();
  if (nrm == 0.0) return;
  const int mmax = std::min<int>(opt.max_dim, int(state.size()));

  std::vector<Vec> basis;
  basis.reserve(mmax);
  basis.push_back(state / nrm);
  std::vector<double> alpha, beta;

  for (int j = 0; j < mmax; ++j) {
    Vec w = h * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    const double a = std::real(basis[j].dot(w));
    w -= a * basis[j];
    alpha.push_back(a);
    // one full reorthogonalization pass
    for (int i = 0; i <= j; ++i) w -= basis[i].dot(w) * basis[i];
    const double b = w.norm();

    const int m = j + 1;
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    Vec phases(m);
    for (int i = 0; i < m; ++i) {
      phases[i] = std::exp(Complex(0.0, -es.eigenvalues()[i] * dt));
    }
    // col0 = U exp(-i T dt) U^T e_1
    Eigen::VectorXd u0 = es.eigenvectors().row(0);
    Vec col0 = es.eigenvectors() * (phases.array() * u0.array()).matrix();

    const double err = std::abs(dt) * b * std::abs(col0[m - 1]);
    if (err < opt.tol || b < 1e-12) {
      Vec out = Vec::Zero(state.size());
      for (int i = 0; i < m; ++i) out += (nrm * col0[i]) * basis[i];
      state = std::move(out);
      return;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  throw ConvergenceError(
      "krylov_step: no convergence at maximum subspace dimension");
}

ThermalEnsemble ThermalEnsemble::build(double nbar, double tail_tol) {
  ThermalEnsemble e;
  e.nbar = nbar;
  if (nbar <= 0.0) {
    e.members.emplace_back(0, 1.0);
    return e;
  }
  const double r = nbar / (nbar + 1.0);
  double w = 1.0 / (nbar + 1.0);
  double cum = 0.0;
  int n = 0;
  while (cum < 1.0 - tail_tol) {
    e.members.emplace_back(n, w);
    cum += w;
    w *= r;
    ++n;
  }
  for (auto& m : e.members) m.second /= cum;
  return e;
}

std::vector<double> sample_grid(const DickeConfig& cfg) {
  std::vector<double> t(cfg.samples);
  for (int i = 0; i < cfg.samples; ++i) {
    t[i] = cfg.t_final * double(i) / double(cfg.samples - 1);
  }
  return t;
}

namespace {

void init_record(TrajectoryRecord& r, const std::vector<double>& times,
                 int spin_dim) {
  const size_t n = times.size();
  r.times = times;
  r.field.assign(n, 0.0);
  r.p_mz = Eigen::MatrixXd::Zero(Eigen::Index(n), spin_dim);
  r.sx.assign(n, 0.0);
  r.sy.assign(n, 0.0);
  r.sz.assign(n, 0.0);
  r.abs_sz.assign(n, 0.0);
  r.n_phonon.assign(n, 0.0);
  r.corr_z.assign(n, 0.0);
  r.corr_y.assign(n, 0.0);
  r.parity.assign(n, 0.0);
}

void record_sample(TrajectoryRecord& r, size_t k, const ObservableSet& obs,
                   const Vec& state, double b) {
  const Expectations e = obs.evaluate(state);
  r.field[k] = b;
  r.p_mz.row(Eigen::Index(k)) = obs.sz_distribution(state);
  r.sx[k] = e.sx;
  r.sy[k] = e.sy;
  r.sz[k] = e.sz;
  r.abs_sz[k] = e.abs_sz;
  r.n_phonon[k] = e.n_phonon;
  r.corr_z[k] = e.corr_z;
  r.corr_y[k] = e.corr_y;
  r.parity[k] = e.parity;
}

void check_leakage(const Vec& state, int spin_dim, int fock_dim,
                   double threshold, double t) {
  double top = 0.0;
  for (int n = std::max(0, fock_dim - 5); n < fock_dim; ++n) {
    for (int m = 0; m < spin_dim; ++m) top += std::norm(state[n * spin_dim + m]);
  }
  if (top > threshold) {
    throw TruncationError(
        "evolve_ramp: top Fock levels hold population " + std::to_string(top) +
        " at t = " + std::to_string(t) +
        " ms; increase n_max (config key n_max)");
  }
}

// Shared stepping loop over a generic (piecewise-constant) Hamiltonian.
template <typename HamAt>
TrajectoryRecord evolve_generic(const DickeConfig& cfg, Vec state, double t0,
                                double t1, const std::vector<double>& times,
                                const ObservableSet& obs, HamAt&& ham_at,
                                int fock_dim) {
  if (t1 <= t0) throw std::invalid_argument("evolve_ramp: t1 must exceed t0");
  TrajectoryRecord rec;
  init_record(rec, times, obs.spin_dim());
  rec.n_spins = cfg.n_spins;
  rec.n_max = fock_dim - 1;
  const double bc = critical_field(cfg);
  const double db_max =
      cfg.eta * (bc > 0.0 ? bc : std::max(cfg.ramp.b0, 1.0));
  double t = t0;
  KrylovOptions kopt;
  for (size_t k = 0; k < times.size(); ++k) {
    const double target = times[k];
    if (target < t0 - 1e-12 || target > t1 + 1e-12) {
      throw std::invalid_argument("evolve_ramp: sample time outside [t0, t1]");
    }
    while (t < target - 1e-12) {
      double dt = std::min(cfg.dt_max, target - t);
      while (std::abs(cfg.ramp.at(t) - cfg.ramp.at(t + dt)) > db_max) {
        dt *= 0.5;
      }
      const SparseMat h = ham_at(cfg.ramp.at(t + 0.5 * dt));
      krylov_step(state, h, dt, kopt);
      t += dt;
      ++rec.total_steps;
    }
    record_sample(rec, k, obs, state, cfg.ramp.at(target));
    if (fock_dim > 1) {
      check_leakage(state, obs.spin_dim(), fock_dim, cfg.leak_threshold, t);
    }
  }
  return rec;
}

}  // namespace

TrajectoryRecord evolve_ramp(const ProductSpace& space, const DickeConfig& cfg,
                             const DickePieces& pieces, Vec state, double t0,
                             double t1, const std::vector<double>& sample_times,
                             const ObservableSet& obs) {
  return evolve_generic(
      cfg, std::move(state), t0, t1, sample_times, obs,
      [&](double b) { return pieces.at(b); }, space.fock().dim);
}

Vec ramp_final_state(const DickeConfig& cfg, const DickePieces& pieces,
                     Vec state, double t0, double t1) {
  if (t1 <= t0) throw std::invalid_argument("ramp_final_state: t1 <= t0");
  const double bc = critical_field(cfg);
  const double db_max = cfg.eta * (bc > 0.0 ? bc : std::max(cfg.ramp.b0, 1.0));
  double t = t0;
  while (t < t1 - 1e-12) {
    double dt = std::min(cfg.dt_max, t1 - t);
    while (std::abs(cfg.ramp.at(t) - cfg.ramp.at(t + dt)) > db_max) dt *= 0.5;
    krylov_step(state, pieces.at(cfg.ramp.at(t + 0.5 * dt)), dt);
    t += dt;
  }
  return state;
}

void TrajectoryRecord::scale_and_accumulate(const TrajectoryRecord& m,
                                            double w) {
  p_mz += w * m.p_mz;
  for (size_t k = 0; k < times.size(); ++k) {
    sx[k] += w * m.sx[k];
    sy[k] += w * m.sy[k];
    sz[k] += w * m.sz[k];
    abs_sz[k] += w * m.abs_sz[k];
    n_phonon[k] += w * m.n_phonon[k];
    corr_z[k] += w * m.corr_z[k];
    corr_y[k] += w * m.corr_y[k];
    parity[k] += w * m.parity[k];
  }
  total_steps += m.total_steps;
}

TrajectoryRecord combine_members(const std::vector<TrajectoryRecord>& members,
                                 const std::vector<double>& weights) {
  if (members.empty() || members.size() != weights.size()) {
    throw std::invalid_argument("combine_members: size mismatch");
  }
  TrajectoryRecord out;
  init_record(out, members[0].times, int(members[0].p_mz.cols()));
  out.n_spins = members[0].n_spins;
  out.n_max = members[0].n_max;
  out.field = members[0].field;
  for (size_t i = 0; i < members.size(); ++i) {
    out.scale_and_accumulate(members[i], weights[i]);
  }
  return out;
}

std::vector<TrajectoryRecord> run_quench_members(const DickeConfig& cfg,
                                                 const ThermalEnsemble& ens) {
  cfg.validate();
  const int n_max = cfg.n_max_override > 0 ? cfg.n_max_override
                                           : default_n_max(cfg);
  ProductSpace space(SpinSector::build(cfg.n_spins), FockSpace::build(n_max));
  const DickePieces pieces = dicke_pieces(space, cfg);
  const ObservableSet obs(space);
  const std::vector<double> times = sample_grid(cfg);
  const Vec spin0 = spin_x_eigenstate(space.spin(), -space.spin().spin());

  std::vector<TrajectoryRecord> members(ens.members.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      unsigned(ens.members.size())));
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= ens.members.size()) return;
      Vec boson = Vec::Zero(space.fock().dim);
      boson[ens.members[i].first] = 1.0;
      members[i] = evolve_ramp(space, cfg, pieces,
                               tensor_product(space, boson, spin0), 0.0,
                               cfg.t_final, times, obs);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return members;
}

TrajectoryRecord run_quench(const DickeConfig& cfg) {
  const ThermalEnsemble ens = ThermalEnsemble::build(cfg.nbar);
  if (cfg.n_max_override > 0 &&
      ens.members.back().first >= cfg.n_max_override) {
    throw std::invalid_argument("run_quench: n_max below thermal cutoff");
  }
  const auto members = run_quench_members(cfg, ens);
  std::vector<double> weights;
  weights.reserve(ens.members.size());
  for (const auto& m : ens.members) weights.push_back(m.second);
  return combine_members(members, weights);
}

TrajectoryRecord run_lipkin_quench(const DickeConfig& cfg) {
  cfg.validate();
  const SpinSector spin = SpinSector::build(cfg.n_spins);
  const ObservableSet obs(spin);
  const std::vector<double> times = sample_grid(cfg);
  const SparseMat h_const =
      SparseMat(lipkin_hamiltonian(spin, cfg, 0.0).sparseView());
  const SparseMat h_field = spin.sx;
  Vec state = spin_x_eigenstate(spin, -spin.spin());
  return evolve_generic(
      cfg, std::move(state), 0.0, cfg.t_final, times, obs,
      [&](double b) {
        SparseMat h = h_const + b * h_field;
        h.makeCompressed();
        return h;
      },
      1);
}

}  // namespace dicke
