#include "dicke/model.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace dicke {

double RampProfile::at(double t) const {
  if (t < 0.0) throw std::invalid_argument("RampProfile: t must be >= 0");
  switch (kind) {
    case Kind::Linear:
      return t >= tau ? 0.0 : b0 * (1.0 - t / tau);
    case Kind::Exponential:
      return b0 * std::exp(-t / tau);
    case Kind::Constant:
      return b0;
  }
  return 0.0;
}

void DickeConfig::validate() const {
  if (n_spins < 1) throw std::invalid_argument("config: N must be >= 1");
  if (g0 < 0.0) throw std::invalid_argument("config: g0 must be >= 0");
  if (delta >= 0.0) {
    throw std::invalid_argument("config: delta must be strictly negative");
  }
  if (nbar < 0.0) throw std::invalid_argument("config: nbar must be >= 0");
  if (gamma_el < 0.0) {
    throw std::invalid_argument("config: gamma_el must be >= 0");
  }
  if (eta <= 0.0 || dt_max <= 0.0 || samples < 2 || t_final <= 0.0) {
    throw std::invalid_argument("config: bad numerical controls");
  }
}

double critical_field(double g0, double delta) {
  if (delta == 0.0) throw std::invalid_argument("critical_field: delta = 0");
  return g0 * g0 / std::abs(delta);
}

double critical_field(const DickeConfig& cfg) {
  return critical_field(cfg.g0, cfg.delta);
}

double alpha0(const DickeConfig& cfg) {
  if (cfg.delta == 0.0) throw std::invalid_argument("alpha0: delta = 0");
  return cfg.g0 * std::sqrt(double(cfg.n_spins)) / (2.0 * cfg.delta);
}

int thermal_cutoff(double nbar, double tail_tol) {
  if (nbar <= 0.0) return 0;
  // tail weight beyond index c is (nbar/(nbar+1))^(c+1)
  const double r = nbar / (nbar + 1.0);
  int c = 0;
  double tail = r;
  while (tail > tail_tol) {
    tail *= r;
    ++c;
  }
  return c;
}

int default_n_max(const DickeConfig& cfg) {
  const double a0 = std::abs(alpha0(cfg));
  const int cut = thermal_cutoff(cfg.nbar);
  const int n = int(std::ceil((a0 + 4.0) * (a0 + 4.0))) + cut;
  return std::max(n, 8);
}

DickePieces dicke_pieces(const ProductSpace& space, const DickeConfig& cfg) {
  if (space.spin().n_spins != cfg.n_spins) {
    throw std::invalid_argument("dicke_pieces: space does not match config N");
  }
  const double root_n = std::sqrt(double(cfg.n_spins));
  SparseMat x = space.embed_boson(space.fock().a + space.fock().adag);
  SparseMat sz = space.embed_spin(space.spin().sz);
  DickePieces p;
  p.h_const = SparseMat((-cfg.g0 / root_n) * (x * sz)) -
              cfg.delta * space.embed_boson(space.fock().number);
  if (cfg.bias_epsilon != 0.0) p.h_const += cfg.bias_epsilon * sz;
  p.h_const.makeCompressed();
  p.h_field = space.embed_spin(space.spin().sx);
  return p;
}

SparseMat dicke_hamiltonian(const ProductSpace& space, const DickeConfig& cfg,
                            double b) {
  return dicke_pieces(space, cfg).at(b);
}

DenseMat lipkin_hamiltonian(const SpinSector& spin, const DickeConfig& cfg,
                            double b) {
  const double J = cfg.g0 * cfg.g0 / cfg.delta;  // signed, negative here
  DenseMat sz(spin.sz);
  DenseMat h = (J / cfg.n_spins) * (sz * sz) + b * DenseMat(spin.sx);
  return h;
}

double time_to_reach(const RampProfile& ramp, double b_target, double t_max) {
  if (ramp.at(0.0) <= b_target) return 0.0;
  if (ramp.at(t_max) > b_target) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double lo = 0.0, hi = t_max;  // profiles are monotone nonincreasing
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ramp.at(mid) > b_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SparseMat spin_parity_operator(const SpinSector& spin) {
  // Diagonal in the S_x eigenbasis with eigenvalue (-1)^(M_x + N/2).
  Eigen::SelfAdjointEigenSolver<DenseMat> es{DenseMat(spin.sx)};
  Vec d(spin.dim);
  for (int j = 0; j < spin.dim; ++j) {
    d[j] = (j % 2 == 0) ? 1.0 : -1.0;  // j = M_x + N/2 (ascending)
  }
  DenseMat p = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
  std::vector<Eigen::Triplet<Complex>> t;
  for (int i = 0; i < spin.dim; ++i) {
    for (int j = 0; j < spin.dim; ++j) {
      if (std::abs(p(i, j)) > 1e-13) t.emplace_back(i, j, p(i, j));
    }
  }
  SparseMat out(spin.dim, spin.dim);
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

SparseMat parity_operator(const ProductSpace& space) {
  SparseMat p_spin = space.embed_spin(spin_parity_operator(space.spin()));
  // boson factor (-1)^n
  std::vector<Eigen::Triplet<Complex>> t;
  for (int n = 0; n < space.fock().dim; ++n) {
    const Complex s = (n % 2 == 0) ? 1.0 : -1.0;
    for (int m = 0; m < space.spin().dim; ++m) {
      t.emplace_back(space.flat_index(n, m), space.flat_index(n, m), s);
    }
  }
  SparseMat p_boson(space.dim(), space.dim());
  p_boson.setFromTriplets(t.begin(), t.end());
  SparseMat out = p_boson * p_spin;
  out.makeCompressed();
  return out;
}

}  // namespace dicke
