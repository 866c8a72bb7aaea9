#pragma once

#include "dicke/hilbert.hpp"
#include "dicke/types.hpp"

namespace dicke {

/// Transverse field schedule B(t). All values angular (rad/ms), times in ms.
struct RampProfile {
  enum class Kind { Linear, Exponential, Constant };

  Kind kind = Kind::Constant;
  double b0 = 0.0;   // field at t = 0
  double tau = 0.0;  // ramp duration (Linear) or decay constant (Exponential)

  static RampProfile linear(double b0, double tau_ramp) {
    return {Kind::Linear, b0, tau_ramp};
  }
  static RampProfile exponential(double b0, double tau) {
    return {Kind::Exponential, b0, tau};
  }
  static RampProfile constant(double b) { return {Kind::Constant, b, 0.0}; }

  /// B(t); the linear ramp clamps at zero for t >= tau.
  double at(double t) const;
};

/// Physical parameters plus numerical controls. Angular frequencies in
/// rad/ms, gamma_el in 1/s, times in ms.
struct DickeConfig {
  int n_spins = 1;
  double g0 = 0.0;           // spin-phonon coupling (rad/ms)
  double delta = -1.0;       // detuning (rad/ms), strictly negative
  double gamma_el = 0.0;     // single-particle dephasing rate (1/s)
  double nbar = 0.0;         // initial mean thermal phonon occupation
  double bias_epsilon = 0.0; // optional longitudinal field (rad/ms)
  RampProfile ramp = RampProfile::constant(0.0);

  // numerical controls
  int n_max_override = -1;   // boson truncation; <=0 means use default_n_max
  double eta = 0.02;         // field-change step control, units of B_c
  double dt_max = 0.01;      // max propagation step (ms)
  int samples = 100;         // observable sample count over [0, t_final]
  double t_final = 2.0;      // trajectory end time (ms)
  double leak_threshold = 1e-6;  // abort when top Fock levels exceed this

  void validate() const;
};

double critical_field(double g0, double delta);
double critical_field(const DickeConfig& cfg);

/// alpha_0 = g0 sqrt(N) / (2 delta); negative real with the paper-sign delta.
double alpha0(const DickeConfig& cfg);

/// Thermal Fock cutoff: smallest index with retained weight >= 1 - tail_tol.
int thermal_cutoff(double nbar, double tail_tol = 1e-4);

/// Default boson truncation: ceil((|alpha0| + 4)^2 + nbar_cut).
int default_n_max(const DickeConfig& cfg);

/// Field-independent and field-proportional parts of the Dicke Hamiltonian:
/// H(B) = h_const + B * h_field.
struct DickePieces {
  SparseMat h_const;
  SparseMat h_field;
  SparseMat at(double b) const {
    SparseMat h = h_const + b * h_field;
    h.makeCompressed();
    return h;
  }
};

DickePieces dicke_pieces(const ProductSpace& space, const DickeConfig& cfg);

/// H = -(g0/sqrt(N)) (a + a^dag) S_z + B S_x - delta a^dag a + eps S_z.
SparseMat dicke_hamiltonian(const ProductSpace& space, const DickeConfig& cfg,
                            double b);

/// H_LM = (J/N) S_z^2 + B S_x with J = g0^2/delta (signed).
DenseMat lipkin_hamiltonian(const SpinSector& spin, const DickeConfig& cfg,
                            double b);

/// First time at which B(t) <= b_target within [0, t_max]; NaN when the
/// profile never drops to the target.
double time_to_reach(const RampProfile& ramp, double b_target, double t_max);

/// Spin-sector factor exp(i pi (S_x + N/2)) of the parity operator.
SparseMat spin_parity_operator(const SpinSector& spin);

/// Parity operator exp(i pi (a^dag a + S_x + N/2)) on the product space.
SparseMat parity_operator(const ProductSpace& space);

}  // namespace dicke
