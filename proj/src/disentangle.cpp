#include "dicke/disentangle.hpp"

#include <cmath>

#include "dicke/propagate.hpp"

namespace dicke {

DenseMat partial_trace_boson(const ProductSpace& space, const Vec& state) {
  const int sd = space.spin().dim;
  DenseMat rho = DenseMat::Zero(sd, sd);
  for (int n = 0; n < space.fock().dim; ++n) {
    const auto block = state.segment(n * sd, sd);
    rho.noalias() += block * block.adjoint();
  }
  return rho;
}

DenseMat partial_trace_spin(const ProductSpace& space, const Vec& state) {
  const int sd = space.spin().dim;
  const int fd = space.fock().dim;
  DenseMat rho = DenseMat::Zero(fd, fd);
  for (int n = 0; n < fd; ++n) {
    for (int np = 0; np < fd; ++np) {
      Complex acc = 0.0;
      for (int m = 0; m < sd; ++m) {
        acc += state[n * sd + m] * std::conj(state[np * sd + m]);
      }
      rho(n, np) = acc;
    }
  }
  return rho;
}

double cat_coherence(const DenseMat& rho_s) {
  const int d = int(rho_s.rows());
  return std::abs(rho_s(d - 1, 0));
}

double vacuum_fidelity(const DenseMat& rho_b) { return std::real(rho_b(0, 0)); }

Vec build_cat_state(const ProductSpace& space, const DickeConfig& cfg,
                    int relative_sign, int fock_n) {
  const double root_n = std::sqrt(double(cfg.n_spins));
  const double m_top = space.spin().spin();
  const double alpha_top = -cfg.g0 * m_top / (root_n * cfg.delta);
  Vec spin_up = Vec::Zero(space.spin().dim);
  spin_up[space.spin().dim - 1] = 1.0;
  Vec spin_down = Vec::Zero(space.spin().dim);
  spin_down[0] = 1.0;
  const Vec up_branch = tensor_product(
      space, displaced_fock_state(space.fock(), alpha_top, fock_n), spin_up);
  const Vec down_branch = tensor_product(
      space, displaced_fock_state(space.fock(), -alpha_top, fock_n), spin_down);
  Vec cat = up_branch + double(relative_sign) * down_branch;
  cat.normalize();
  return cat;
}

namespace {

Vec evolve_fixed(const SparseMat& h, Vec state, double duration,
                 double dt_max) {
  const int steps = std::max(1, int(std::ceil(duration / dt_max)));
  const double dt = duration / steps;
  for (int s = 0; s < steps; ++s) krylov_step(state, h, dt);
  return state;
}

}  // namespace

Vec run_detuning_quench_protocol(const ProductSpace& space,
                                 const DickeConfig& cfg, Vec state) {
  cfg.validate();
  DickeConfig quenched = cfg;
  quenched.delta = 2.0 * cfg.delta;
  const SparseMat h = dicke_hamiltonian(space, quenched, 0.0);
  const double t_d = kPi / std::abs(quenched.delta);
  return evolve_fixed(h, std::move(state), t_d, cfg.dt_max);
}

Vec run_resonant_protocol(const ProductSpace& space, const DickeConfig& cfg,
                          Vec state) {
  cfg.validate();
  // Coupling phase shifted by pi/2 and detuning quenched to zero.
  const double root_n = std::sqrt(double(cfg.n_spins));
  SparseMat drive = space.embed_boson(
      SparseMat(Complex(0.0, 1.0) * (space.fock().a - space.fock().adag)));
  SparseMat h = SparseMat((cfg.g0 / root_n) * (drive *
                                               space.embed_spin(space.spin().sz)));
  h.makeCompressed();
  const double t_d = 1.0 / std::abs(cfg.delta);
  return evolve_fixed(h, std::move(state), t_d, cfg.dt_max);
}

double trace_distance(const DenseMat& rho, const DenseMat& sigma) {
  Eigen::SelfAdjointEigenSolver<DenseMat> es(rho - sigma);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace dicke
