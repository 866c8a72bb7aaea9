#include "dicke/observables.hpp"

#include <cmath>

namespace dicke {

namespace {

double expect(const SparseMat& op, const Vec& v) {
  return std::real(v.dot(op * v));
}

}  // namespace

ObservableSet::ObservableSet(const ProductSpace& space) {
  spin_dim_ = space.spin().dim;
  boson_dim_ = space.fock().dim;
  has_boson_ = true;
  m_values_.resize(spin_dim_);
  for (int m = 0; m < spin_dim_; ++m) m_values_[m] = space.spin().m_value(m);
  sx_ = space.embed_spin(space.spin().sx);
  sy_ = space.embed_spin(space.spin().sy);
  number_ = space.embed_boson(space.fock().number);
  SparseMat x = space.embed_boson(space.fock().a + space.fock().adag);
  corr_z_ = x * space.embed_spin(space.spin().sz);
  corr_y_ = x * space.embed_spin(space.spin().sy);
  parity_ = parity_operator(space);
}

ObservableSet::ObservableSet(const SpinSector& spin) {
  spin_dim_ = spin.dim;
  boson_dim_ = 1;
  has_boson_ = false;
  m_values_.resize(spin_dim_);
  for (int m = 0; m < spin_dim_; ++m) m_values_[m] = spin.m_value(m);
  sx_ = spin.sx;
  sy_ = spin.sy;
  parity_ = spin_parity_operator(spin);
}

RealVec ObservableSet::sz_distribution(const Vec& state) const {
  RealVec p = RealVec::Zero(spin_dim_);
  for (int n = 0; n < boson_dim_; ++n) {
    for (int m = 0; m < spin_dim_; ++m) {
      p[m] += std::norm(state[n * spin_dim_ + m]);
    }
  }
  return p;
}

Expectations ObservableSet::evaluate(const Vec& state) const {
  Expectations e;
  const RealVec p = sz_distribution(state);
  e.sz = p.dot(m_values_);
  e.abs_sz = p.dot(m_values_.cwiseAbs());
  e.sx = expect(sx_, state);
  e.sy = expect(sy_, state);
  e.parity = expect(parity_, state);
  if (has_boson_) {
    e.n_phonon = expect(number_, state);
    e.corr_z = expect(corr_z_, state);
    e.corr_y = expect(corr_y_, state);
  }
  return e;
}

RealVec sz_distribution(const ObservableSet& obs, const std::vector<Vec>& states,
                        const std::vector<double>& weights) {
  if (states.size() != weights.size()) {
    throw std::invalid_argument("sz_distribution: size mismatch");
  }
  RealVec p = RealVec::Zero(obs.spin_dim());
  for (size_t i = 0; i < states.size(); ++i) {
    p += weights[i] * obs.sz_distribution(states[i]);
  }
  return p;
}

std::vector<double> apply_dephasing(const std::vector<double>& times,
                                    const std::vector<double>& sx,
                                    double gamma_el_per_s) {
  if (times.size() != sx.size()) {
    throw std::invalid_argument("apply_dephasing: size mismatch");
  }
  const double gamma = 0.5 * per_s_to_per_ms(gamma_el_per_s);
  std::vector<double> out(sx.size());
  for (size_t i = 0; i < sx.size(); ++i) {
    out[i] = sx[i] * std::exp(-gamma * times[i]);
  }
  return out;
}

std::vector<double> infer_spin_phonon(const std::vector<double>& times,
                                      const std::vector<double>& sx,
                                      double gamma_el_per_s, int n_spins,
                                      double g0) {
  if (times.size() != sx.size()) {
    throw std::invalid_argument("infer_spin_phonon: size mismatch");
  }
  if (times.size() < 2) {
    throw std::invalid_argument("infer_spin_phonon: need at least 2 samples");
  }
  if (g0 <= 0.0) {
    throw std::invalid_argument("infer_spin_phonon: g0 must be > 0");
  }
  const double gamma_ms = per_s_to_per_ms(gamma_el_per_s);
  const double scale = std::sqrt(double(n_spins)) / g0;
  std::vector<double> out(sx.size());
  for (size_t k = 0; k < sx.size(); ++k) {
    double deriv;
    if (k == 0) {
      deriv = (sx[1] - sx[0]) / (times[1] - times[0]);
    } else {
      deriv = (sx[k] - sx[k - 1]) / (times[k] - times[k - 1]);
    }
    out[k] = scale * (gamma_ms * sx[k] + deriv);
  }
  return out;
}

}  // namespace dicke
