#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "dicke/disentangle.hpp"
#include "dicke/hilbert.hpp"
#include "dicke/model.hpp"
#include "dicke/observables.hpp"
#include "dicke/propagate.hpp"
#include "oracles.hpp"

using namespace dicke;

namespace {

DickeConfig paper_config(int n_spins) {
  DickeConfig cfg;
  cfg.n_spins = n_spins;
  cfg.g0 = khz_to_angular(1.32);
  cfg.delta = khz_to_angular(-1.0);
  return cfg;
}

double purity(const DenseMat& rho) {
  return std::real((rho * rho).trace());
}

void check_density_matrix(const DenseMat& rho) {
  CHECK(std::abs(std::real(rho.trace()) - 1.0) < 1e-8);
  CHECK(std::abs(std::imag(rho.trace())) < 1e-12);
  CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<DenseMat> es(rho);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

// population of the spin levels other than M = +/- N/2
double interior_spin_weight(const ProductSpace& ps, const Vec& state) {
  const DenseMat rho = partial_trace_boson(ps, state);
  double w = 0.0;
  for (int m = 1; m + 1 < ps.spin().dim; ++m) w += std::real(rho(m, m));
  return w;
}

}  // namespace

TEST_CASE("partial traces: product states, trace, positivity, Schmidt symmetry") {
  const int N = 5;
  ProductSpace ps(SpinSector::build(N), FockSpace::build(12));

  const Vec chi = spin_x_eigenstate(ps.spin(), -1.5);
  const Vec phi = displaced_fock_state(ps.fock(), Complex(0.7, -0.4), 0);
  const Vec prod = tensor_product(ps, phi, chi);

  const DenseMat rho_s = partial_trace_boson(ps, prod);
  const DenseMat rho_b = partial_trace_spin(ps, prod);
  check_density_matrix(rho_s);
  check_density_matrix(rho_b);
  CHECK(purity(rho_s) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(purity(rho_b) == doctest::Approx(1.0).epsilon(1e-10));
  // rho_s is the projector onto chi
  const DenseMat proj = chi * chi.adjoint();
  CHECK((rho_s - proj).cwiseAbs().maxCoeff() < 1e-12);

  // entangled state: both reduced matrices share the Schmidt spectrum purity
  for (unsigned seed : {11u, 12u}) {
    const Vec v = oracle::random_state(ps.dim(), seed);
    const DenseMat rs = partial_trace_boson(ps, v);
    const DenseMat rb = partial_trace_spin(ps, v);
    check_density_matrix(rs);
    check_density_matrix(rb);
    CHECK(purity(rs) == doctest::Approx(purity(rb)).epsilon(1e-10));
  }
}

TEST_CASE("cat coherence: exact coherent-state overlap and trivial cases") {
  const int N = 6;
  ProductSpace ps(SpinSector::build(N), FockSpace::build(30));

  // pick g0 so that the branch displacement magnitude is exactly 1
  DickeConfig cfg = paper_config(N);
  cfg.g0 = 2.0 * std::abs(cfg.delta) / std::sqrt(double(N));
  CHECK(std::abs(alpha0(cfg)) == doctest::Approx(1.0).epsilon(1e-12));

  // branches at +/- alpha0: off-diagonal is <-(alpha0)|alpha0>/2, and the
  // coherent-state overlap is exp(-2 |alpha0|^2)
  const Vec cat = build_cat_state(ps, cfg, +1);
  const DenseMat rho_s = partial_trace_boson(ps, cat);
  check_density_matrix(rho_s);
  CHECK(cat_coherence(rho_s) ==
        doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-8));

  // paper-scale displacement: coherence is numerically invisible
  DickeConfig big = paper_config(N);
  big.g0 = 2.0 * std::abs(big.delta) * 5.485 / std::sqrt(double(N));
  ProductSpace ps_big(SpinSector::build(N), FockSpace::build(140));
  const Vec cat_big = build_cat_state(ps_big, big, +1);
  CHECK(cat_coherence(partial_trace_boson(ps_big, cat_big)) < 1e-12);

  // pure spin cat -> 0.5; incoherent mixture -> 0
  Vec fock0 = Vec::Zero(ps.fock().dim);
  fock0[0] = 1.0;
  Vec spin_cat = Vec::Zero(ps.spin().dim);
  spin_cat[0] = spin_cat[N] = 1.0 / std::sqrt(2.0);
  const DenseMat pure = partial_trace_boson(ps, tensor_product(ps, fock0, spin_cat));
  CHECK(cat_coherence(pure) == doctest::Approx(0.5).epsilon(1e-12));
  DenseMat mix = DenseMat::Zero(N + 1, N + 1);
  mix(0, 0) = mix(N, N) = 0.5;
  CHECK(cat_coherence(mix) == doctest::Approx(0.0));
}

TEST_CASE("detuning-quench protocol disentangles the exact cat") {
  const int N = 6;
  DickeConfig cfg = paper_config(N);
  ProductSpace ps(SpinSector::build(N), FockSpace::build(50));
  const ObservableSet obs(ps);

  const Vec cat = build_cat_state(ps, cfg, +1);
  const double parity_in = obs.evaluate(cat).parity;
  const double coh_in = cat_coherence(partial_trace_boson(ps, cat));
  const double a0 = std::abs(alpha0(cfg));
  CHECK(coh_in == doctest::Approx(0.5 * std::exp(-2.0 * a0 * a0)).epsilon(1e-6));
  CHECK(coh_in < 0.5 * std::exp(-a0 * a0));  // quoted entangled-state bound

  const Vec out = run_detuning_quench_protocol(ps, cfg, cat);
  CHECK(std::abs(out.norm() - 1.0) < 1e-9);
  CHECK(vacuum_fidelity(partial_trace_spin(ps, out)) > 0.99);
  CHECK(cat_coherence(partial_trace_boson(ps, out)) ==
        doctest::Approx(0.5).epsilon(0.02));
  // parity commutes with the quenched Hamiltonian
  CHECK(obs.evaluate(out).parity == doctest::Approx(parity_in).epsilon(1e-8));
  // spin support stays on M = +/- N/2
  CHECK(interior_spin_weight(ps, out) < 1e-6);
}

TEST_CASE("detuning-quench protocol on an excited displaced-Fock member") {
  const int N = 6;
  DickeConfig cfg = paper_config(N);
  ProductSpace ps(SpinSector::build(N), FockSpace::build(50));

  const Vec cat1 = build_cat_state(ps, cfg, +1, 1);
  const Vec out = run_detuning_quench_protocol(ps, cfg, cat1);
  const DenseMat rho_b = partial_trace_spin(ps, out);
  // phonon branch returns to the undisplaced |1>
  CHECK(std::real(rho_b(1, 1)) > 0.99);
  CHECK(cat_coherence(partial_trace_boson(ps, out)) ==
        doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("protocols reduce to the identity when g0 vanishes") {
  const int N = 4;
  DickeConfig cfg = paper_config(N);
  cfg.g0 = 1e-12;
  ProductSpace ps(SpinSector::build(N), FockSpace::build(10));
  Vec fock0 = Vec::Zero(ps.fock().dim);
  fock0[0] = 1.0;
  const Vec in = tensor_product(ps, fock0, spin_x_eigenstate(ps.spin(), -2.0));

  // detuning quench: free boson rotation only; vacuum (x) spin is stationary
  const Vec out_d = run_detuning_quench_protocol(ps, cfg, in);
  CHECK(trace_distance(partial_trace_boson(ps, out_d),
                       partial_trace_boson(ps, in)) < 1e-8);
  CHECK(trace_distance(partial_trace_spin(ps, out_d),
                       partial_trace_spin(ps, in)) < 1e-8);

  // resonant drive: the Hamiltonian itself vanishes
  const Vec out_r = run_resonant_protocol(ps, cfg, in);
  CHECK((out_r - in).norm() < 1e-8);
}

TEST_CASE("resonant protocol matches the detuning quench") {
  const int N = 6;
  DickeConfig cfg = paper_config(N);
  ProductSpace ps(SpinSector::build(N), FockSpace::build(50));
  const ObservableSet obs(ps);

  const Vec cat = build_cat_state(ps, cfg, +1);
  const double parity_in = obs.evaluate(cat).parity;

  const Vec out_r = run_resonant_protocol(ps, cfg, cat);
  CHECK(vacuum_fidelity(partial_trace_spin(ps, out_r)) > 0.99);
  CHECK(cat_coherence(partial_trace_boson(ps, out_r)) ==
        doctest::Approx(0.5).epsilon(0.02));
  CHECK(obs.evaluate(out_r).parity ==
        doctest::Approx(parity_in).epsilon(1e-8));
  CHECK(interior_spin_weight(ps, out_r) < 1e-6);

  const Vec out_d = run_detuning_quench_protocol(ps, cfg, cat);
  CHECK(trace_distance(partial_trace_boson(ps, out_d),
                       partial_trace_boson(ps, out_r)) < 1e-3);
}

TEST_CASE("coherent displacement follows beta(t, delta) per Sz eigenvalue") {
  const int N = 4;
  DickeConfig cfg = paper_config(N);
  ProductSpace ps(SpinSector::build(N), FockSpace::build(40));
  const SparseMat a_full = ps.embed_boson(ps.fock().a);
  const SparseMat h = dicke_hamiltonian(ps, cfg, 0.0);
  const double root_n = std::sqrt(double(N));

  for (double m : {2.0, 1.0, -2.0}) {
    Vec spin = Vec::Zero(ps.spin().dim);
    spin[int(m + 0.5 * N)] = 1.0;
    Vec fock0 = Vec::Zero(ps.fock().dim);
    fock0[0] = 1.0;
    Vec state = tensor_product(ps, fock0, spin);

    double t = 0.0;
    for (double t_target : {0.07, 0.19, 0.31}) {
      while (t < t_target - 1e-12) {
        const double dt = std::min(0.005, t_target - t);
        krylov_step(state, h, dt);
        t += dt;
      }
      // driven-oscillator amplitude from vacuum; matches the quoted
      // -g0 (1 - e^{-i delta t}) / (2 delta sqrt(N)) per unit eigenvalue up
      // to the frequency-sign convention of the propagator
      const Complex expect = -cfg.g0 * m / (root_n * cfg.delta) *
                             (1.0 - std::exp(Complex(0.0, cfg.delta * t)));
      const Complex got = state.dot(Vec(a_full * state));
      CHECK(std::abs(got - expect) < 1e-6);
    }
  }
}

TEST_CASE("protocol timing: detuning branch closes a half rotation") {
  // after t_d = pi/|2 delta| the displaced branches sit exactly at the origin;
  // evolving for half that time leaves them displaced, so the fidelity check
  // genuinely constrains the timing
  const int N = 6;
  DickeConfig cfg = paper_config(N);
  ProductSpace ps(SpinSector::build(N), FockSpace::build(50));
  const Vec cat = build_cat_state(ps, cfg, +1);

  DickeConfig quenched = cfg;
  quenched.delta = 2.0 * cfg.delta;
  const SparseMat h = dicke_hamiltonian(ps, quenched, 0.0);
  Vec halfway = cat;
  const double t_half = 0.5 * kPi / std::abs(quenched.delta);
  const int steps = 200;
  for (int s = 0; s < steps; ++s) krylov_step(halfway, h, t_half / steps);
  CHECK(vacuum_fidelity(partial_trace_spin(ps, halfway)) < 0.9);
}
