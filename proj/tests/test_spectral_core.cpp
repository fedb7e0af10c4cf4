#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "hoslab/evolution.hpp"
#include "hoslab/field_io.hpp"
#include "hoslab/multiplier.hpp"
#include "hoslab/norms.hpp"

using namespace hoslab;
using testutil::dense_random;
using testutil::direct_spectral_1d;
using testutil::rel_l2_diff;

TEST_CASE("grid validation") {
  CHECK_NOTHROW(GridSpec(1, 3, 16.0, 1024).validate());
  CHECK_THROWS_AS(GridSpec(1, 3, 16.0, 48).validate(), std::invalid_argument);   // not a power of two
  CHECK_THROWS_AS(GridSpec(1, 3, 16.0, 2).validate(), std::invalid_argument);    // below minimum
  CHECK_THROWS_AS(GridSpec(0, 3, 16.0, 64).validate(), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(1, 1, 16.0, 64).validate(), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(1, 3, 0.0, 64).validate(), std::invalid_argument);
}

TEST_CASE("grid frequency lattice and nyquist") {
  GridSpec g(1, 3, 16.0, 64);
  CHECK(g.nyquist() == doctest::Approx(pi * 64 / 32.0));
  CHECK(g.mode_index(0) == 0);
  CHECK(g.mode_index(31) == 31);
  CHECK(g.mode_index(32) == -32);
  CHECK(g.mode_index(63) == -1);
  const Eigen::ArrayXd mags = frequency_magnitudes(g);
  CHECK(mags[0] == 0.0);
  CHECK(mags[5] == doctest::Approx(5.0 * pi / 16.0).epsilon(1e-14));
  CHECK(mags[63] == doctest::Approx(pi / 16.0).epsilon(1e-14));
}

TEST_CASE("single lattice mode transforms to one coefficient") {
  GridSpec g(1, 3, 16.0, 128);
  const Eigen::ArrayXd x = axis_coordinates(g);
  const double xi = pi * 5 / g.L;
  ArrayXcd u(g.n);
  const std::complex<double> im(0.0, 1.0);
  for (int t = 0; t < g.n; ++t) u[t] = std::exp(im * (xi * x[t]));
  const Field f = Field::from_physical(g, u);
  CHECK(std::abs(f.spectral()[5] - 1.0) <= 1e-13);
  double off = 0.0;
  for (int s = 0; s < g.n; ++s)
    if (s != 5) off = std::max(off, std::abs(f.spectral()[s]));
  CHECK(off <= 1e-13);
}

TEST_CASE("negative mode lands in the wrapped slot") {
  GridSpec g(1, 3, 8.0, 64);
  const Field f = single_mode(g, {-3}, 2.0);
  CHECK(std::abs(f.spectral()[64 - 3] - 2.0) <= 1e-14);
  const Eigen::ArrayXd x = axis_coordinates(g);
  CHECK(std::abs(f.physical()[7] - 2.0 * std::exp(std::complex<double>(0, -3 * pi / 8.0 * x[7]))) <=
        1e-13);
}

TEST_CASE("transform agrees with a direct DFT oracle") {
  GridSpec g(1, 3, 16.0, 256);
  const Field f = dense_random(g, 99);
  const Eigen::ArrayXcd oracle = direct_spectral_1d(g, f.physical());
  CHECK(rel_l2_diff(oracle, f.spectral()) <= 1e-12);
}

TEST_CASE("round trip and Plancherel for seeded fields") {
  GridSpec g(1, 3, 16.0, 256);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Field f = dense_random(g, seed);
    const Field back = Field::from_spectral(g, f.spectral());
    CHECK(rel_l2_diff(f.physical(), back.physical()) <= 1e-12);
    const double phys = lp_norm(f, 2.0);
    const double spec = std::sqrt(g.volume() * f.spectral().abs2().sum());
    CHECK(phys == doctest::Approx(spec).epsilon(1e-12));
  }
}

TEST_CASE("multi-dimensional round trip") {
  GridSpec g(3, 3, 4.0, 8);
  const Field f = dense_random(g, 5);
  const Field back = Field::from_spectral(g, f.spectral());
  CHECK(rel_l2_diff(f.physical(), back.physical()) <= 1e-12);
  const double phys = lp_norm(f, 2.0);
  const double spec = std::sqrt(g.volume() * f.spectral().abs2().sum());
  CHECK(phys == doctest::Approx(spec).epsilon(1e-12));
}

TEST_CASE("field rejects wrong value counts") {
  GridSpec g(2, 3, 4.0, 8);
  CHECK_THROWS_WITH_AS(Field::from_physical(g, ArrayXcd::Zero(63)),
                       doctest::Contains("value count"), std::invalid_argument);
}

TEST_CASE("multiplier acts as eigenvalue on lattice modes") {
  GridSpec g(1, 3, 16.0, 64);
  const Field f = single_mode(g, {7}, 1.0);
  const double xi = 7.0 * pi / 16.0;
  const Field Lf = apply_multiplier(f, lambda_pow(3.0));
  CHECK(std::abs(Lf.spectral()[7] - std::pow(xi, 3.0)) <= 1e-12 * std::pow(xi, 3.0));
  const Field idf = apply_multiplier(f, identity_multiplier());
  CHECK(rel_l2_diff(idf.physical(), f.physical()) == 0.0);
}

TEST_CASE("multiplier composition adds exponents away from the zero mode") {
  GridSpec g(1, 3, 16.0, 128);
  Field f = dense_random(g, 11);
  // zero the mean so the negative power is well defined
  ArrayXcd c = f.spectral();
  c[0] = 0.0;
  f = Field::from_spectral(g, c);
  const Field ab = apply_multiplier(apply_multiplier(f, lambda_pow(1.3)), lambda_pow(-0.8));
  const Field direct = apply_multiplier(f, lambda_pow(0.5));
  CHECK(rel_l2_diff(ab.spectral(), direct.spectral()) <= 1e-12);
}

TEST_CASE("radial symbols are invariant under lattice symmetries") {
  GridSpec g(2, 3, 8.0, 16);
  const Eigen::ArrayXd w = sample_symbol(g, bracket_pow(1.7));
  auto slot = [&](int j1, int j2) {
    const int s1 = j1 >= 0 ? j1 : j1 + g.n;
    const int s2 = j2 >= 0 ? j2 : j2 + g.n;
    return std::int64_t(s1) * g.n + s2;
  };
  CHECK(w[slot(3, 5)] == w[slot(5, 3)]);
  CHECK(w[slot(3, 5)] == w[slot(-3, 5)]);
  CHECK(w[slot(3, 5)] == w[slot(-5, -3)]);
}

TEST_CASE("non-finite symbol is rejected with the offending frequency") {
  GridSpec g(1, 3, 16.0, 64);
  const Field f = dense_random(g, 3);
  MultiplierSpec bad{[](double r) { return std::log(r); }, "log"};
  CHECK_THROWS_WITH_AS(apply_multiplier(f, bad), doctest::Contains("log"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(apply_multiplier(f, bad), doctest::Contains("|xi| = 0"),
                       std::invalid_argument);
}

TEST_CASE("lambda multiplier matches quadrature oracle on a Gaussian") {
  GridSpec g(1, 3, 20.0, 256);
  const Field f = gaussian(g, 1.0, std::sqrt(0.5));  // exp(-x^2)... sigma^2 = 1/2 gives exp(-x^2)
  const Field Lf = apply_multiplier(f, lambda_pow(1.0));
  const Eigen::ArrayXcd chat = direct_spectral_1d(g, f.physical());
  double acc = 0.0;
  for (int s = 0; s < g.n; ++s) {
    const double xi = pi * g.mode_index(s) / g.L;
    acc += xi * xi * std::norm(chat[s]);
  }
  const double oracle = std::sqrt(g.volume() * acc);
  CHECK(lp_norm(Lf, 2.0) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("lp norms: closed forms and oracle") {
  GridSpec g(1, 3, 16.0, 128);
  ArrayXcd cvals = ArrayXcd::Constant(g.n, std::complex<double>(0.3, -0.4));  // |c| = 0.5
  const Field cf = Field::from_physical(g, cvals);
  CHECK(lp_norm(cf, 4.0) == doctest::Approx(0.5 * std::pow(g.volume(), 0.25)).epsilon(1e-13));
  CHECK(lp_norm(Field::zero(g), 7.0) == 0.0);
  CHECK(lp_norm(cf, std::numeric_limits<double>::infinity()) == doctest::Approx(0.5));
  CHECK_THROWS_AS(lp_norm(cf, 0.5), std::invalid_argument);

  // Gaussian p = 3: ||f||_3^3 = A^3 integral exp(-3 x^2/(2 sigma^2)) = A^3 sigma sqrt(2 pi/3)
  const double sigma = 1.0, A = 1.7;
  const Field gf = gaussian(g, A, sigma);
  const double exact = std::pow(A * A * A * sigma * std::sqrt(2.0 * pi / 3.0), 1.0 / 3.0);
  CHECK(lp_norm(gf, 3.0) == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("sobolev norms: plane wave, aliases, monotonicity, rejections") {
  GridSpec g(1, 3, 16.0, 128);
  const Field f = single_mode(g, {9}, 1.25);
  const double xi = 9.0 * pi / 16.0;
  CHECK(sobolev_norm(f, 1.4, Homogeneity::homogeneous) ==
        doctest::Approx(1.25 * std::pow(xi, 1.4) * std::sqrt(g.volume())).epsilon(1e-12));

  const Field r = dense_random(g, 17);
  CHECK(sobolev_norm(r, 0.0, Homogeneity::inhomogeneous) == lp_norm(r, 2.0));
  CHECK(sobolev_norm(r, 0.5, Homogeneity::inhomogeneous) >=
        sobolev_norm(r, 0.2, Homogeneity::inhomogeneous));
  CHECK(sobolev_norm(r, 1.0, Homogeneity::inhomogeneous) >=
        sobolev_norm(r, 0.5, Homogeneity::inhomogeneous));

  const Field dc = Field::from_physical(g, ArrayXcd::Constant(g.n, 1.0));
  CHECK_THROWS_AS(sobolev_norm(dc, -0.5, Homogeneity::homogeneous), std::invalid_argument);

  // Gaussian gamma = 1.5 inhomogeneous against the direct quadrature oracle
  const Field gf = gaussian(g, 1.0, 1.0);
  const Eigen::ArrayXcd chat = direct_spectral_1d(g, gf.physical());
  double acc = 0.0;
  for (int s = 0; s < g.n; ++s) {
    const double w = pi * g.mode_index(s) / g.L;
    acc += std::pow(1.0 + w * w, 1.5) * std::norm(chat[s]);
  }
  CHECK(sobolev_norm(gf, 1.5, Homogeneity::inhomogeneous) ==
        doctest::Approx(std::sqrt(g.volume() * acc)).epsilon(1e-10));
}

TEST_CASE("spacetime norms") {
  GridSpec g(1, 3, 16.0, 64);
  const Field c = Field::from_physical(g, ArrayXcd::Constant(g.n, std::complex<double>(0.6, 0.8)));
  CHECK(spacetime_norm({c}, std::numeric_limits<double>::infinity(), 4.0, 0.1) ==
        doctest::Approx(lp_norm(c, 4.0)));

  // constant in time over [0, T]: trapezoid is exact
  const double T = 2.0;
  const int nt = 16;
  std::vector<Field> traj(nt + 1, c);
  const double got = spacetime_norm(traj, 4.0, 4.0, T / nt);
  CHECK(got == doctest::Approx(std::pow(T, 0.25) * 1.0 * std::pow(g.volume(), 0.25)).epsilon(1e-12));

  CHECK_THROWS_AS(spacetime_norm({}, 2.0, 2.0, 0.1), std::invalid_argument);

  // two-mode linear flow vs a 4x finer trapezoid oracle
  ArrayXcd spec2 = ArrayXcd::Zero(g.n);
  spec2[3] = 1.0;
  spec2[g.n - 7] = 0.7;
  const Field two = Field::from_spectral(g, spec2);
  auto sample = [&](int steps) {
    std::vector<Field> tr;
    for (int s = 0; s <= steps; ++s) tr.push_back(linear_propagate(two, T * s / steps));
    return tr;
  };
  const double coarse = spacetime_norm(sample(32), 4.0, 4.0, T / 32);
  const double fine = spacetime_norm(sample(128), 4.0, 4.0, T / 128);
  CHECK(coarse == doctest::Approx(fine).epsilon(1e-3));
}

TEST_CASE("field binary container round trips exactly") {
  GridSpec g(2, 4, 6.0, 16);
  const Field f = dense_random(g, 21);
  const auto path = std::filesystem::temp_directory_path() / "hoslab_test_field.bin";
  write_field(path, f);
  const Field back = read_field(path);
  CHECK(back.grid() == g);
  CHECK((back.physical() == f.physical()).all());
  std::filesystem::remove(path);
}

TEST_CASE("field json form round trips and enforces the size cap") {
  GridSpec g(1, 3, 8.0, 64);
  const Field f = dense_random(g, 2);
  const Field back = field_from_json(field_to_json(f));
  CHECK(back.grid() == g);
  CHECK(testutil::rel_l2_diff(back.physical(), f.physical()) == 0.0);

  GridSpec big(1, 3, 8.0, 8192);
  CHECK_THROWS_AS(field_to_json(Field::zero(big)), std::invalid_argument);
}
