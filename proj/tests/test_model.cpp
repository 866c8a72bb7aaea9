#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dicke/model.hpp"
#include "dicke/spectrum.hpp"
#include "oracles.hpp"

using namespace dicke;

namespace {

DickeConfig paper_config(int n_spins) {
  DickeConfig cfg;
  cfg.n_spins = n_spins;
  cfg.g0 = khz_to_angular(1.32);
  cfg.delta = khz_to_angular(-1.0);
  cfg.ramp = RampProfile::exponential(khz_to_angular(7.1), 0.6);
  return cfg;
}

}  // namespace

TEST_CASE("ramp profiles: endpoints and shapes") {
  const double b0 = khz_to_angular(7.1);
  const RampProfile lin = RampProfile::linear(b0, 2.0);
  CHECK(lin.at(0.0) == doctest::Approx(b0));
  CHECK(lin.at(1.0) == doctest::Approx(0.5 * b0));
  CHECK(lin.at(2.0) == doctest::Approx(0.0));
  CHECK(lin.at(3.0) == doctest::Approx(0.0));  // clamps past tau_ramp

  const RampProfile ex = RampProfile::exponential(b0, 0.6);
  CHECK(ex.at(0.0) == doctest::Approx(b0));
  CHECK(ex.at(0.6) == doctest::Approx(b0 / std::exp(1.0)));

  const RampProfile c = RampProfile::constant(b0);
  CHECK(c.at(5.0) == doctest::Approx(b0));
  CHECK_THROWS_AS(lin.at(-0.1), std::invalid_argument);
}

TEST_CASE("critical field: paper values and scaling") {
  DickeConfig cfg = paper_config(68);
  CHECK(angular_to_khz(critical_field(cfg)) == doctest::Approx(1.7424));
  // caption-quoted |J| agrees to < 1%
  CHECK(std::abs(angular_to_khz(critical_field(cfg)) - 1.75) / 1.75 < 0.01);
  cfg.g0 *= 2.0;
  CHECK(angular_to_khz(critical_field(cfg)) == doctest::Approx(4.0 * 1.7424));
  CHECK_THROWS_AS(critical_field(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("alpha0: value, sign, and scaling") {
  DickeConfig cfg = paper_config(69);
  const double a0 = alpha0(cfg);
  CHECK(a0 < 0.0);
  CHECK(std::abs(a0) == doctest::Approx(5.485).epsilon(1e-3));
  CHECK(a0 * a0 == doctest::Approx(30.1).epsilon(1e-2));

  cfg.g0 = 0.0;
  CHECK(alpha0(cfg) == doctest::Approx(0.0));

  DickeConfig big = paper_config(4 * 69);
  CHECK(std::abs(alpha0(big)) == doctest::Approx(2.0 * std::abs(a0)));
}

TEST_CASE("config validation") {
  DickeConfig cfg = paper_config(68);
  CHECK_NOTHROW(cfg.validate());
  DickeConfig bad = cfg;
  bad.delta = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.n_spins = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.nbar = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("dicke hamiltonian: decoupled limit enumerates exactly") {
  DickeConfig cfg = paper_config(3);
  cfg.g0 = 0.0;
  ProductSpace ps(SpinSector::build(3), FockSpace::build(5));
  const double b = khz_to_angular(2.0);
  const DenseMat h = oracle::dense(dicke_hamiltonian(ps, cfg, b));
  Eigen::SelfAdjointEigenSolver<DenseMat> es(h);
  std::vector<double> expect;
  for (int n = 0; n <= 5; ++n) {
    for (int i = 0; i <= 3; ++i) {
      expect.push_back(b * (-1.5 + i) - cfg.delta * n);
    }
  }
  std::sort(expect.begin(), expect.end());
  for (int k = 0; k < int(expect.size()); ++k) {
    CHECK(es.eigenvalues()[k] == doctest::Approx(expect[k]).epsilon(1e-12));
  }
}

TEST_CASE("dicke hamiltonian commutes with S_z at B=0") {
  DickeConfig cfg = paper_config(4);
  ProductSpace ps(SpinSector::build(4), FockSpace::build(6));
  const DenseMat h = oracle::dense(dicke_hamiltonian(ps, cfg, 0.0));
  const DenseMat sz = oracle::dense(ps.embed_spin(ps.spin().sz));
  CHECK((h * sz - sz * h).cwiseAbs().maxCoeff() < 1e-12 * h.cwiseAbs().maxCoeff());
}

TEST_CASE("dicke hamiltonian: B=0 ground energy from completing the square") {
  // E0 = -N g0^2 / (4 |delta|), checked by dense diagonalization at N=6.
  DickeConfig cfg = paper_config(6);
  ProductSpace ps(SpinSector::build(6), FockSpace::build(40));
  const DenseMat h = oracle::dense(dicke_hamiltonian(ps, cfg, 0.0));
  Eigen::SelfAdjointEigenSolver<DenseMat> es(h);
  const double expect = -cfg.n_spins * cfg.g0 * cfg.g0 /
                        (4.0 * std::abs(cfg.delta));
  CHECK(es.eigenvalues()[0] == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("dicke hamiltonian is Hermitian, including the bias term") {
  DickeConfig cfg = paper_config(5);
  cfg.bias_epsilon = khz_to_angular(0.05);
  ProductSpace ps(SpinSector::build(5), FockSpace::build(8));
  const DenseMat h = oracle::dense(dicke_hamiltonian(ps, cfg, khz_to_angular(3.0)));
  CHECK((h - h.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lipkin hamiltonian: diagonal at B=0 with degenerate ground pair") {
  DickeConfig cfg = paper_config(6);
  const SpinSector spin = SpinSector::build(6);
  const DenseMat h = lipkin_hamiltonian(spin, cfg, 0.0);
  const double J = cfg.g0 * cfg.g0 / cfg.delta;
  CHECK(J < 0.0);
  CHECK(angular_to_khz(std::abs(J)) == doctest::Approx(1.7424));
  for (int i = 0; i < spin.dim; ++i) {
    const double M = -3.0 + i;
    CHECK(std::abs(h(i, i) - Complex(J / 6.0 * M * M)) < 1e-12);
  }
  Eigen::SelfAdjointEigenSolver<DenseMat> es(h);
  CHECK(es.eigenvalues()[0] == doctest::Approx(J / 6.0 * 9.0));
  CHECK(es.eigenvalues()[1] == doctest::Approx(J / 6.0 * 9.0));  // M = +/-3
}

TEST_CASE("lipkin hamiltonian: N=2 entries by hand") {
  DickeConfig cfg = paper_config(2);
  const double b = khz_to_angular(1.0);
  const SpinSector spin = SpinSector::build(2);
  const DenseMat h = lipkin_hamiltonian(spin, cfg, b);
  const double J = cfg.g0 * cfg.g0 / cfg.delta;
  // S=1: Sz = diag(-1,0,1), <0|Sx|1> = <1|Sx|2> = 1/sqrt(2)
  CHECK(std::abs(h(0, 0) - Complex(J / 2.0)) < 1e-12);
  CHECK(std::abs(h(1, 1)) < 1e-12);
  CHECK(std::abs(h(2, 2) - Complex(J / 2.0)) < 1e-12);
  CHECK(std::abs(h(0, 1) - Complex(b / std::sqrt(2.0))) < 1e-12);
  CHECK(std::abs(h(1, 2) - Complex(b / std::sqrt(2.0))) < 1e-12);
  CHECK(std::abs(h(0, 2)) < 1e-12);
}

TEST_CASE("parity operator: involution, spectrum action, conservation") {
  DickeConfig cfg = paper_config(4);
  ProductSpace ps(SpinSector::build(4), FockSpace::build(6));
  const DenseMat p = oracle::dense(parity_operator(ps));
  CHECK((p * p - DenseMat::Identity(ps.dim(), ps.dim())).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK((p - p.adjoint().eval()).cwiseAbs().maxCoeff() < 1e-10);

  // |n=0> (x) |-N/2>_x has parity +1 for even N
  Vec fock0 = Vec::Zero(ps.fock().dim);
  fock0[0] = 1.0;
  const Vec v = tensor_product(ps, fock0, spin_x_eigenstate(ps.spin(), -2.0));
  CHECK(std::abs(v.dot(p * v) - Complex(1.0)) < 1e-10);

  // commutes with H for random parameters when bias = 0
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> ur(0.3, 3.0);
  for (int trial = 0; trial < 4; ++trial) {
    DickeConfig rc = cfg;
    rc.g0 = khz_to_angular(ur(gen));
    rc.delta = -khz_to_angular(ur(gen));
    const DenseMat h =
        oracle::dense(dicke_hamiltonian(ps, rc, khz_to_angular(ur(gen))));
    const double scale = h.cwiseAbs().maxCoeff();
    CHECK((h * p - p * h).cwiseAbs().maxCoeff() < 1e-10 * scale);
  }
}

TEST_CASE("spin parity factor squares to identity and flips x-eigenstates") {
  const SpinSector spin = SpinSector::build(5);
  const DenseMat p = oracle::dense(spin_parity_operator(spin));
  CHECK((p * p - DenseMat::Identity(spin.dim, spin.dim)).cwiseAbs().maxCoeff() <
        1e-10);
  // eigenvalue on |M_x> is (-1)^(M_x + N/2)
  for (int j = 0; j <= 5; ++j) {
    const Vec v = spin_x_eigenstate(spin, -2.5 + j);
    const double expect = (j % 2 == 0) ? 1.0 : -1.0;
    CHECK(std::abs(v.dot(p * v) - Complex(expect)) < 1e-10);
  }
}

TEST_CASE("time_to_reach: analytic crossing times") {
  const double b0 = khz_to_angular(7.1);
  const double bc = khz_to_angular(1.7424);
  const RampProfile ex = RampProfile::exponential(b0, 0.6);
  CHECK(time_to_reach(ex, bc, 2.0) ==
        doctest::Approx(0.6 * std::log(7.1 / 1.7424)).epsilon(1e-10));
  CHECK(time_to_reach(ex, bc, 2.0) == doctest::Approx(0.843).epsilon(1e-3));

  const RampProfile lin = RampProfile::linear(b0, 2.0);
  CHECK(time_to_reach(lin, bc, 3.0) ==
        doctest::Approx(2.0 * (1.0 - 1.7424 / 7.1)).epsilon(1e-10));
  CHECK(time_to_reach(lin, bc, 3.0) == doctest::Approx(1.509).epsilon(1e-3));

  CHECK(std::isnan(time_to_reach(RampProfile::constant(b0), bc, 2.0)));
  CHECK(time_to_reach(RampProfile::constant(0.5 * bc), bc, 2.0) == 0.0);
}

TEST_CASE("thermal cutoff and default truncation") {
  CHECK(thermal_cutoff(0.0) == 0);
  // smallest c with (nbar/(nbar+1))^(c+1) <= 1e-4 for nbar = 6
  const double r = 6.0 / 7.0;
  int expect = 0;
  double tail = r;
  while (tail > 1e-4) {
    tail *= r;
    ++expect;
  }
  CHECK(thermal_cutoff(6.0) == expect);
  CHECK(expect > 50);  // ~ 55-60 for nbar = 6

  DickeConfig cfg = paper_config(68);
  cfg.nbar = 0.0;
  const double a0 = std::abs(alpha0(cfg));
  CHECK(default_n_max(cfg) == int(std::ceil((a0 + 4.0) * (a0 + 4.0))));
  cfg.nbar = 6.0;
  CHECK(default_n_max(cfg) ==
        int(std::ceil((a0 + 4.0) * (a0 + 4.0))) + thermal_cutoff(6.0));
}

TEST_CASE("lipkin limit: dicke low band converges at large detuning") {
  // Hold J fixed while |delta| grows; the zero-phonon band approaches the
  // Lipkin spectrum. 5% tolerance at |delta| = 20 B_c.
  const int N = 6;
  DickeConfig cfg = paper_config(N);
  const double j_target = std::abs(cfg.g0 * cfg.g0 / cfg.delta);
  const double bc = critical_field(cfg);
  cfg.delta = -20.0 * bc;
  cfg.g0 = std::sqrt(j_target * std::abs(cfg.delta));
  const double b = 0.8 * bc;

  ProductSpace ps(SpinSector::build(N), FockSpace::build(24));
  const DenseMat hd = oracle::dense(dicke_hamiltonian(ps, cfg, b));
  Eigen::SelfAdjointEigenSolver<DenseMat> es_d(hd);
  const DenseMat hl = lipkin_hamiltonian(ps.spin(), cfg, b);
  Eigen::SelfAdjointEigenSolver<DenseMat> es_l(hl);

  const double e0d = es_d.eigenvalues()[0];
  const double e0l = es_l.eigenvalues()[0];
  for (int k = 1; k <= N; ++k) {
    const double gap_d = es_d.eigenvalues()[k] - e0d;
    const double gap_l = es_l.eigenvalues()[k] - e0l;
    CHECK(std::abs(gap_d - gap_l) < 0.05 * std::max(gap_l, bc));
  }
}
