#include <doctest.h>

#include "helpers.hpp"
#include "hoslab/evolution.hpp"

using namespace hoslab;
using testutil::rel_l2_diff;

namespace {
Field conj_field(const Field& f) {
  return Field::from_physical(f.grid(), f.physical().conjugate());
}
Field band_data(const GridSpec& g, std::uint64_t seed, double l2 = 1.0) {
  Field f = shell_random(g, 0.2, 12.0, seed, 1.0);
  return Field::from_spectral(g, f.spectral() * (l2 / lp_norm(f, 2.0)));
}
}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.dt = 0.1;
  cfg.T = 0.05;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.T = 1.0;
  cfg.record_every = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("zero-time propagators are the identity") {
  GridSpec g(1, 3, 8.0, 64);
  const Field f = band_data(g, 1);
  CHECK((linear_propagate(f, 0.0).physical() == f.physical()).all());
  CHECK((nonlinear_substep(f, 0.0).physical() == f.physical()).all());
}

TEST_CASE("linear propagator: plane-wave phase and unitarity") {
  GridSpec g(1, 3, 8.0 * pi, 64);  // lattice frequencies j/8
  const Field pw = single_mode(g, {16}, 1.5);  // r = 2
  const double t = 0.37;
  const Field out = linear_propagate(pw, t);
  const std::complex<double> expect =
      1.5 * std::exp(std::complex<double>(0.0, t * 8.0));  // r^k = 2^3
  CHECK(std::abs(out.spectral()[16] - expect) <= 1e-13);

  const Field f = band_data(g, 3);
  CHECK(lp_norm(linear_propagate(f, 1.7), 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-13));
}

TEST_CASE("nonlinear substep rotates the phase and fixes every modulus") {
  GridSpec g(1, 3, 8.0, 128);
  const Field f = band_data(g, 4, 1.3);
  const Field out = nonlinear_substep(f, 0.25);
  CHECK(((out.physical().abs() - f.physical().abs()).abs().maxCoeff()) <= 1e-13);
  for (double p : {2.0, 4.0, 6.0})
    CHECK(lp_norm(out, p) == doctest::Approx(lp_norm(f, p)).epsilon(1e-13));
  // the pointwise solution of du/dt = i|u|^2 u
  const std::complex<double> im(0.0, 1.0);
  const auto& u = f.physical();
  CHECK(std::abs(out.physical()[17] - u[17] * std::exp(im * (std::norm(u[17]) * 0.25))) <= 1e-15);
}

TEST_CASE("switches reduce the step to its exact substeps") {
  GridSpec g(1, 3, 8.0, 64);
  const Field f = band_data(g, 5);
  SolverConfig cfg;
  cfg.dt = 0.05;

  SolverConfig lin = cfg;
  lin.nonlinearity_on = false;
  CHECK((step(f, lin).physical() == linear_propagate(f, cfg.dt).physical()).all());

  SolverConfig rot = cfg;
  rot.dispersion_on = false;
  CHECK((step(f, rot).physical() == nonlinear_substep(f, cfg.dt).physical()).all());

  SolverConfig off = cfg;
  off.nonlinearity_on = false;
  off.dispersion_on = false;
  CHECK((step(f, off).physical() == f.physical()).all());
}

TEST_CASE("dealias mask kills exactly the upper third") {
  GridSpec g(1, 3, 8.0, 64);
  const Eigen::ArrayXd mask = dealias_mask(g);
  for (int t = 0; t < g.n; ++t) {
    const bool keep = std::abs(g.mode_index(t)) <= g.n / 3;
    CHECK(mask[t] == (keep ? 1.0 : 0.0));
  }
  GridSpec g2(2, 3, 4.0, 16);
  const Eigen::ArrayXd m2 = dealias_mask(g2);
  CHECK(m2[0] == 1.0);
  CHECK(m2[(16 / 2) * 16 + 0] == 0.0);  // Nyquist slot on the first axis
}

TEST_CASE("mass is conserved to rounding with and without dealiasing") {
  GridSpec g(1, 3, 8.0, 128);
  const Field f0 = band_data(g, 6, 1.2);
  for (bool dealias : {true, false}) {
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.T = 0.1;
    cfg.dealias = dealias;
    const EvolveResult r = evolve(f0, cfg, {}, 1.0);
    const double m0 = r.trace.mass.front();
    for (double m : r.trace.mass) CHECK(std::abs(m - m0) <= 1e-12 * m0);
  }
}

TEST_CASE("strang splitting is second order in dt") {
  GridSpec g(1, 3, 8.0, 128);
  const Field f0 = band_data(g, 7, 1.5);
  const double T = 0.02;
  auto final_state = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.T = T;
    cfg.record_every = 1 << 20;
    return evolve(f0, cfg, {}, 1.0).final_field;
  };
  const Field ref = final_state(3.125e-6);
  std::vector<double> errs;
  for (double dt : {1e-4, 5e-5, 2.5e-5})
    errs.push_back(rel_l2_diff(final_state(dt).physical(), ref.physical()));
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double order = std::log2(errs[i] / errs[i + 1]);
    CHECK(order >= 1.8);
    CHECK(order <= 2.2);
  }
}

TEST_CASE("the discrete flow is time reversible through conjugation") {
  GridSpec g(1, 3, 8.0, 128);
  const Field u0 = band_data(g, 8, 1.4);
  SolverConfig cfg;
  cfg.dt = 1e-4;
  cfg.T = 0.01;  // 100 steps
  cfg.record_every = 1 << 20;
  const Field uT = evolve(u0, cfg, {}, 1.0).final_field;
  const Field back = evolve(conj_field(uT), cfg, {}, 1.0).final_field;
  CHECK(rel_l2_diff(back.physical(), conj_field(u0).physical()) <= 1e-8);
}

TEST_CASE("evolve records the requested cadence and full traces") {
  GridSpec g(1, 3, 8.0, 64);
  const Field f0 = band_data(g, 9);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.T = 0.1;
  cfg.record_every = 3;
  const std::vector<IOperatorSpec> specs{IOperatorSpec(2.0, 1.0, 3), IOperatorSpec(4.0, 1.0, 3)};
  const EvolveResult r = evolve(f0, cfg, specs, 1.0);
  const std::vector<double> want{0.0, 0.03, 0.06, 0.09, 0.1};
  REQUIRE(r.trace.times.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(r.trace.times[i] == doctest::Approx(want[i]).epsilon(1e-12));
  REQUIRE(r.trace.modified_energy.size() == 2);
  CHECK(r.trace.modified_energy[0].size() == want.size());
  CHECK(r.trace.mass[0] == doctest::Approx(std::pow(lp_norm(f0, 2.0), 2.0)).epsilon(1e-13));
  CHECK(r.trace.energy[0] == doctest::Approx(plain_energy(f0, 3).total).epsilon(1e-13));
  CHECK(r.trace.hgamma[0] ==
        doctest::Approx(sobolev_norm(f0, 1.0, Homogeneity::inhomogeneous)).epsilon(1e-13));
  CHECK(r.trace.modified_energy[0][0] ==
        doctest::Approx(modified_energy(f0, specs[0]).total).epsilon(1e-12));
  CHECK(r.trace.modified_energy[1][0] > 0.0);
}

TEST_CASE("zero data stays zero") {
  GridSpec g(1, 3, 8.0, 64);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.T = 0.05;
  const EvolveResult r = evolve(Field::zero(g), cfg, {}, 1.0);
  for (double m : r.trace.mass) CHECK(m == 0.0);
  for (double e : r.trace.energy) CHECK(e == 0.0);
  CHECK(lp_norm(r.final_field, 2.0) == 0.0);
}

TEST_CASE("non-finite amplitudes raise the blow-up guard") {
  GridSpec g(1, 3, 8.0, 64);
  const Field huge = gaussian(g, 1e200, 1.0);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.T = 0.05;
  CHECK_THROWS_AS(evolve(huge, cfg, {}, 1.0), BlowUpSuspected);
  try {
    evolve(huge, cfg, {}, 1.0);
  } catch (const BlowUpSuspected& b) {
    CHECK(b.t > 0.0);
    CHECK(b.t <= 0.05 + 1e-12);
  }
}

TEST_CASE("scaling transform: exactness, invariants, rejections") {
  GridSpec g(3, 3, 2.0, 8);
  const Field f = testutil::dense_random(g, 10);
  const Field same = scaling_transform(f, 1.0);
  CHECK((same.physical() == f.physical()).all());

  const double lambda = 2.0;
  const Field fl = scaling_transform(f, lambda);
  CHECK(fl.grid().L == doctest::Approx(lambda * g.L));
  CHECK(fl.grid().n == g.n);
  CHECK(lp_norm(fl, 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-13));  // L2-critical
  const double h0 = sobolev_norm(f, 1.5, Homogeneity::homogeneous);
  const double h1 = sobolev_norm(fl, 1.5, Homogeneity::homogeneous);
  CHECK(h1 == doctest::Approx(std::pow(lambda, -1.5) * h0).epsilon(1e-12));

  GridSpec g2(1, 3, 8.0, 64);
  CHECK_THROWS_AS(scaling_transform(testutil::dense_random(g2, 2), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(scaling_transform(f, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scaling_transform(f, -1.0), std::invalid_argument);
}
