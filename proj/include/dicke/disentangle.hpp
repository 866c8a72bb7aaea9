#pragma once

#include "dicke/model.hpp"
#include "dicke/types.hpp"

namespace dicke {

/// Reduced spin density matrix rho_s[M, M'] = sum_n <n,M|psi><psi|n,M'>.
DenseMat partial_trace_boson(const ProductSpace& space, const Vec& state);

/// Reduced boson density matrix.
DenseMat partial_trace_spin(const ProductSpace& space, const Vec& state);

/// |<N/2| rho_s |-N/2>|.
double cat_coherence(const DenseMat& rho_s);

/// <0| rho_b |0>.
double vacuum_fidelity(const DenseMat& rho_b);

/// Ideal spin-phonon cat at B = 0: branches |alpha_M, n> (x) |M>_z for
/// M = +/- N/2 with the ground displacement alpha_M = -g0 M / (sqrt(N) delta),
/// combined with the given relative sign.
Vec build_cat_state(const ProductSpace& space, const DickeConfig& cfg,
                    int relative_sign, int fock_n = 0);

/// Quench delta -> 2 delta at B = 0 and evolve for t_d = pi/|2 delta|; the
/// phonon branches return to the origin leaving a pure spin cat.
Vec run_detuning_quench_protocol(const ProductSpace& space,
                                 const DickeConfig& cfg, Vec state);

/// Drive the coupling on resonance, H' = (i g0/sqrt(N)) (a - a^dag) S_z, for
/// t_d = 1/|delta|.
Vec run_resonant_protocol(const ProductSpace& space, const DickeConfig& cfg,
                          Vec state);

/// Trace distance (1/2) ||rho - sigma||_1 between Hermitian unit-trace
/// matrices.
double trace_distance(const DenseMat& rho, const DenseMat& sigma);

}  // namespace dicke
