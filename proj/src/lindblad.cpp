#include "dicke/lindblad.hpp"

#include <cmath>

#include "dicke/observables.hpp"

namespace dicke {

namespace {

DenseMat kron(const DenseMat& a, const DenseMat& b) {
  DenseMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

int popcount(unsigned x) {
  int c = 0;
  while (x) {
    c += x & 1u;
    x >>= 1;
  }
  return c;
}

}  // namespace

LindbladSystem::LindbladSystem(const LindbladConfig& cfg) : cfg_(cfg) {
  if (cfg.n_spins < 1 || cfg.n_spins > 4) {
    throw std::invalid_argument("LindbladSystem: N must be in 1..4");
  }
  if (cfg.n_max < 1 || cfg.n_max > 40) {
    throw std::invalid_argument("LindbladSystem: n_max must be in 1..40");
  }
  if (cfg.delta >= 0.0) {
    throw std::invalid_argument("LindbladSystem: delta must be negative");
  }
  const int N = cfg.n_spins;
  spin_dim_ = 1 << N;
  fock_dim_ = cfg.n_max + 1;
  dim_ = spin_dim_ * fock_dim_;
  gamma_ms_ = per_s_to_per_ms(cfg.gamma_el);

  // Single-spin Paulis; basis bit i = 1 means spin i up along z.
  DenseMat spin_x = DenseMat::Zero(spin_dim_, spin_dim_);
  DenseMat spin_y = DenseMat::Zero(spin_dim_, spin_dim_);
  DenseMat spin_z = DenseMat::Zero(spin_dim_, spin_dim_);
  for (int s = 0; s < spin_dim_; ++s) {
    for (int i = 0; i < N; ++i) {
      const int flipped = s ^ (1 << i);
      const double zi = (s >> i) & 1 ? 1.0 : -1.0;
      spin_x(flipped, s) += 0.5;
      // <down|sigma_y|up> = +i, <up|sigma_y|down> = -i
      spin_y(flipped, s) += Complex(0.0, 0.5) * zi;
      spin_z(s, s) += 0.5 * zi;
    }
  }
  DenseMat s2 = spin_x * spin_x + spin_y * spin_y + spin_z * spin_z;

  DenseMat a = DenseMat::Zero(fock_dim_, fock_dim_);
  DenseMat num = DenseMat::Zero(fock_dim_, fock_dim_);
  for (int n = 1; n < fock_dim_; ++n) a(n - 1, n) = std::sqrt(double(n));
  for (int n = 0; n < fock_dim_; ++n) num(n, n) = n;
  DenseMat x = a + a.adjoint();
  DenseMat eye_f = DenseMat::Identity(fock_dim_, fock_dim_);
  DenseMat eye_s = DenseMat::Identity(spin_dim_, spin_dim_);

  const double root_n = std::sqrt(double(N));
  h_const_ = (-cfg.g0 / root_n) * kron(x, spin_z) - cfg.delta * kron(num, eye_s);
  if (cfg.bias_epsilon != 0.0) h_const_ += cfg.bias_epsilon * kron(eye_f, spin_z);
  h_field_ = kron(eye_f, spin_x);
  sx_ = kron(eye_f, spin_x);
  sy_ = kron(eye_f, spin_y);
  sz_ = kron(eye_f, spin_z);
  corr_y_ = kron(x, spin_y);
  s_squared_ = kron(eye_f, s2);

  // W_ab = sum_i z_i(a) z_i(b) = N - 2 hamming(s_a, s_b); spin part only.
  dephasing_weight_.resize(dim_, dim_);
  for (int ka = 0; ka < dim_; ++ka) {
    const int sa = ka % spin_dim_;
    for (int kb = 0; kb < dim_; ++kb) {
      const int sb = kb % spin_dim_;
      dephasing_weight_(ka, kb) = N - 2 * popcount(unsigned(sa ^ sb));
    }
  }
}

DenseMat LindbladSystem::initial_density(int fock_n, double nbar) const {
  const int N = cfg_.n_spins;
  // |-N/2>_x: each spin in (|down> - |up>)/sqrt(2).
  Vec spin(spin_dim_);
  const double amp = std::pow(2.0, -0.5 * N);
  for (int s = 0; s < spin_dim_; ++s) {
    spin[s] = amp * ((popcount(unsigned(s)) % 2 == 0) ? 1.0 : -1.0);
  }
  DenseMat rho_spin = DenseMat(spin * spin.adjoint());
  DenseMat rho_f = DenseMat::Zero(fock_dim_, fock_dim_);
  if (fock_n >= 0) {
    rho_f(fock_n, fock_n) = 1.0;
  } else {
    double norm = 0.0;
    for (int n = 0; n < fock_dim_; ++n) {
      const double p = std::pow(nbar / (nbar + 1.0), n) / (nbar + 1.0);
      rho_f(n, n) = p;
      norm += p;
    }
    rho_f /= norm;
  }
  return kron(rho_f, rho_spin);
}

DenseMat LindbladSystem::rhs(const DenseMat& rho, double t) const {
  const DenseMat h = h_const_ + cfg_.ramp.at(t) * h_field_;
  DenseMat d = Complex(0.0, -1.0) * (h * rho - rho * h);
  if (gamma_ms_ > 0.0) {
    d += (0.5 * gamma_ms_) *
         (dephasing_weight_.cast<Complex>().cwiseProduct(rho) -
          double(cfg_.n_spins) * rho);
  }
  return d;
}

LindbladSeries LindbladSystem::evolve_fixed_dt(
    DenseMat rho, const std::vector<double>& times, double dt) const {
  LindbladSeries s;
  s.times = times;
  double t = times.empty() ? 0.0 : times.front();
  auto record = [&](const DenseMat& r) {
    s.sx.push_back(std::real((sx_ * r).trace()));
    s.sy.push_back(std::real((sy_ * r).trace()));
    s.sz.push_back(std::real((sz_ * r).trace()));
    s.corr_y.push_back(std::real((corr_y_ * r).trace()));
    s.s_total.push_back(std::real((s_squared_ * r).trace()));
    s.dsx_dt.push_back(std::real((sx_ * rhs(r, t)).trace()));
    s.trace_err.push_back(std::abs(r.trace() - 1.0));
    s.herm_err.push_back((r - r.adjoint().eval()).cwiseAbs().maxCoeff());
  };
  for (size_t k = 0; k < times.size(); ++k) {
    while (t < times[k] - 1e-12) {
      const double step = std::min(dt, times[k] - t);
      const DenseMat k1 = rhs(rho, t);
      const DenseMat k2 = rhs(rho + 0.5 * step * k1, t + 0.5 * step);
      const DenseMat k3 = rhs(rho + 0.5 * step * k2, t + 0.5 * step);
      const DenseMat k4 = rhs(rho + step * k3, t + step);
      rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += step;
      ++s.steps;
    }
    record(rho);
  }
  Eigen::SelfAdjointEigenSolver<DenseMat> es(0.5 * (rho + rho.adjoint().eval()));
  s.min_eigenvalue = es.eigenvalues().minCoeff();
  s.final_rho = std::move(rho);
  return s;
}

LindbladSeries LindbladSystem::evolve(DenseMat rho,
                                      const std::vector<double>& times) const {
  double dt = cfg_.dt;
  LindbladSeries prev = evolve_fixed_dt(rho, times, dt);
  for (int halving = 0; halving < 12; ++halving) {
    LindbladSeries fine = evolve_fixed_dt(rho, times, 0.5 * dt);
    double diff = 0.0;
    for (size_t i = 0; i < prev.sx.size(); ++i) {
      diff = std::max(diff, std::abs(fine.sx[i] - prev.sx[i]));
      diff = std::max(diff, std::abs(fine.corr_y[i] - prev.corr_y[i]));
    }
    if (fine.min_eigenvalue < -1e-7) {
      prev = std::move(fine);
      dt *= 0.5;
      continue;  // positivity monitor: keep reducing the step
    }
    if (diff < cfg_.obs_tol) return fine;
    prev = std::move(fine);
    dt *= 0.5;
  }
  throw ConvergenceError("LindbladSystem::evolve: step halving did not settle");
}

InferenceReport validate_inference(const LindbladConfig& cfg,
                                   int coarse_samples,
                                   double corrupt_gamma_factor) {
  if (cfg.n_spins > 3) {
    throw std::invalid_argument("validate_inference: N must be <= 3");
  }
  LindbladSystem sys(cfg);
  // Dense sampling grid that contains the coarse production grid.
  const double t_final = cfg.ramp.kind == RampProfile::Kind::Linear
                             ? cfg.ramp.tau
                             : 2.0;
  const int refine = 10;
  const int n_dense = (coarse_samples - 1) * refine + 1;
  std::vector<double> dense(n_dense);
  for (int i = 0; i < n_dense; ++i) {
    dense[i] = t_final * double(i) / double(n_dense - 1);
  }
  const LindbladSeries s = sys.evolve(sys.initial_density(0), dense);

  InferenceReport rep;
  const double root_n = std::sqrt(double(cfg.n_spins));
  const double gamma_ms = per_s_to_per_ms(cfg.gamma_el);
  for (size_t i = 0; i < dense.size(); ++i) {
    const double lhs = s.dsx_dt[i];
    const double rhs = (cfg.g0 / root_n) * s.corr_y[i] - gamma_ms * s.sx[i];
    rep.identity_residual_max =
        std::max(rep.identity_residual_max, std::abs(lhs - rhs));
    rep.peak_corr = std::max(rep.peak_corr, std::abs(s.corr_y[i]));
  }
  rep.identity_threshold = 1e-5 * cfg.n_spins;
  rep.identity_ok = rep.identity_residual_max < rep.identity_threshold;

  // One-sided-difference reconstruction at the production sampling rate.
  std::vector<double> coarse_t(coarse_samples), coarse_sx(coarse_samples);
  for (int i = 0; i < coarse_samples; ++i) {
    coarse_t[i] = dense[size_t(i) * refine];
    coarse_sx[i] = s.sx[size_t(i) * refine];
  }
  const std::vector<double> inferred = infer_spin_phonon(
      coarse_t, coarse_sx, cfg.gamma_el * corrupt_gamma_factor, cfg.n_spins,
      cfg.g0);
  for (int i = 0; i < coarse_samples; ++i) {
    rep.fd_error_coarse =
        std::max(rep.fd_error_coarse,
                 std::abs(inferred[i] - s.corr_y[size_t(i) * refine]));
  }
  if (rep.peak_corr > 0.0) rep.fd_error_coarse /= rep.peak_corr;
  rep.coarse_samples = coarse_samples;
  rep.fd_ok = rep.fd_error_coarse < 0.05;
  return rep;
}

double fit_decay_rate(const std::vector<double>& times,
                      const std::vector<double>& y) {
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  int n = 0;
  for (size_t i = 0; i < times.size(); ++i) {
    const double a = std::abs(y[i]);
    if (a < 1e-12) continue;
    const double l = std::log(a);
    st += times[i];
    sl += l;
    stt += times[i] * times[i];
    stl += times[i] * l;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fit_decay_rate: too few points");
  const double slope = (n * stl - st * sl) / (n * stt - st * st);
  return -slope;
}

}  // namespace dicke
