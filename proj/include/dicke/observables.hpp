#pragma once

#include <vector>

#include "dicke/hilbert.hpp"
#include "dicke/model.hpp"
#include "dicke/types.hpp"

namespace dicke {

struct Expectations {
  double sx = 0.0, sy = 0.0, sz = 0.0, abs_sz = 0.0;
  double n_phonon = 0.0;
  double corr_z = 0.0;  // <(a + a^dag) S_z>
  double corr_y = 0.0;  // <(a + a^dag) S_y>
  double parity = 0.0;  // <Pi>
};

/// Precomputed operators for the recorded observables. Immutable after
/// construction and shareable across workers.
class ObservableSet {
 public:
  explicit ObservableSet(const ProductSpace& space);
  explicit ObservableSet(const SpinSector& spin);  // spin-only (Lipkin)

  Expectations evaluate(const Vec& state) const;
  RealVec sz_distribution(const Vec& state) const;

  int spin_dim() const { return spin_dim_; }
  bool has_boson() const { return has_boson_; }

 private:
  int spin_dim_ = 0;
  int boson_dim_ = 1;
  bool has_boson_ = false;
  RealVec m_values_;
  SparseMat sx_, sy_, number_, corr_z_, corr_y_, parity_;
};

/// Weighted P(M_z) for an ensemble of states.
RealVec sz_distribution(const ObservableSet& obs,
                        const std::vector<Vec>& states,
                        const std::vector<double>& weights);

/// Phenomenological attenuation <S_x> -> <S_x> e^{-Gamma t}, Gamma = Gamma_el/2.
/// times in ms, gamma_el in 1/s.
std::vector<double> apply_dephasing(const std::vector<double>& times,
                                    const std::vector<double>& sx,
                                    double gamma_el_per_s);

/// C_sp-ph(t) = (sqrt(N)/g0) (Gamma_el <S_x> + d<S_x>/dt) with a backward
/// one-sided difference (forward at the first sample). g0 in rad/ms.
std::vector<double> infer_spin_phonon(const std::vector<double>& times,
                                      const std::vector<double>& sx,
                                      double gamma_el_per_s, int n_spins,
                                      double g0);

}  // namespace dicke
