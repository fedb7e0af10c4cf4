#pragma once

#include <complex>
#include <vector>

#include "hoslab/field.hpp"
#include "hoslab/initial_data.hpp"

namespace testutil {

using hoslab::Field;
using hoslab::GridSpec;
using hoslab::pi;

// O(n^2) direct DFT oracle for 1-D grids, independent of the FFT path:
// c_j = (1/n) sum_t u(x_t) e^{-i xi_j x_t}, slot layout matching the library.
inline Eigen::ArrayXcd direct_spectral_1d(const GridSpec& g, const Eigen::ArrayXcd& u) {
  Eigen::ArrayXcd c = Eigen::ArrayXcd::Zero(g.n);
  const Eigen::ArrayXd x = hoslab::axis_coordinates(g);
  const std::complex<double> im(0.0, 1.0);
  for (int slot = 0; slot < g.n; ++slot) {
    const double xi = pi * g.mode_index(slot) / g.L;
    std::complex<double> acc = 0.0;
    for (int t = 0; t < g.n; ++t) acc += u[t] * std::exp(-im * (xi * x[t]));
    c[slot] = acc / double(g.n);
  }
  return c;
}

inline double rel_l2_diff(const Eigen::ArrayXcd& a, const Eigen::ArrayXcd& b) {
  const double scale = std::sqrt(a.abs2().sum());
  return std::sqrt((a - b).abs2().sum()) / (scale > 0.0 ? scale : 1.0);
}

// Dense random field over the whole lattice (all modes populated).
inline Field dense_random(const GridSpec& g, std::uint64_t seed, double decay = 0.5) {
  return hoslab::shell_random(g, 0.0, g.nyquist() * std::sqrt(double(g.d)) + 1.0, seed, decay);
}

}  // namespace testutil
