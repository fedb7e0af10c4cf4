#pragma once

#include <cstdint>
#include <vector>

#include "hoslab/evolution.hpp"

namespace hoslab {

// Fixed, documented 64-bit mixer (splitmix64). All seeded data flows through
// this so output streams are reproducible bit-for-bit across platforms and
// re-implementable from the record alone.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

namespace detail {

// Per-mode hash key: combines the seed with the signed mode indices so the
// same lattice frequency draws the same value on any grid resolution (needed
// by the refinement studies, which keep the physics and refine n).
inline std::uint64_t mode_key(std::uint64_t seed, const GridSpec& g, const int* slots) {
  std::uint64_t key = (seed & 0xFFFFFFFFull) << 32;
  if (g.d == 1) {
    key ^= std::uint64_t(std::uint32_t(g.mode_index(slots[0])));
  } else if (g.d == 2) {
    key ^= (std::uint64_t(std::uint16_t(g.mode_index(slots[0]))) << 16) ^
           std::uint64_t(std::uint16_t(g.mode_index(slots[1])));
  } else {
    for (int a = 0; a < g.d; ++a)
      key ^= std::uint64_t(std::uint32_t(g.mode_index(slots[a])) & 0x3FF) << (10 * (g.d - 1 - a));
  }
  return key;
}

}  // namespace detail

// Random-phase field supported on Mlo <= |xi| <= Mhi with the deterministic
// envelope <xi>^-decay. Phases are keyed per mode, amplitudes carry no
// randomness: tail sums then follow the envelope power law cleanly.
inline Field shell_random(const GridSpec& g, double Mlo, double Mhi, std::uint64_t seed,
                          double decay) {
  const Eigen::ArrayXd mags = frequency_magnitudes(g);
  ArrayXcd c = ArrayXcd::Zero(g.size());
  std::vector<int> slots(g.d);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    const double r = mags[i];
    if (r < Mlo || r > Mhi) continue;
    unflatten(g, i, slots.data());
    const double ph = 2.0 * pi * uniform01(splitmix64(detail::mode_key(seed, g, slots.data())));
    c[i] = std::polar(std::pow(1.0 + r * r, -0.5 * decay), ph);
  }
  return Field::from_spectral(g, c);
}

// Product Gaussian amplitude * exp(-|x - centre|^2 / (2 sigma^2)); closed-form
// mass amplitude^2 (sigma sqrt(pi))^d up to periodization tails.
inline Field gaussian(const GridSpec& g, double amplitude, double sigma,
                      const std::vector<double>& centre = {}) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("gaussian: amplitude must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be positive");
  const Eigen::ArrayXd x = axis_coordinates(g);
  ArrayXcd u(g.size());
  std::vector<int> slots(g.d);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    unflatten(g, i, slots.data());
    double q = 0.0;
    for (int a = 0; a < g.d; ++a) {
      const double dxa = x[slots[a]] - (centre.empty() ? 0.0 : centre[a]);
      q += dxa * dxa;
    }
    u[i] = amplitude * std::exp(-q / (2.0 * sigma * sigma));
  }
  return Field::from_physical(g, u);
}

// A few Gaussians at seeded centres within |x| <= L/2, seeded widths in [L/10, L/6].
inline Field multi_bump(const GridSpec& g, std::uint64_t seed, double amplitude, int bumps = 3) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("multi_bump: amplitude must be positive");
  const Eigen::ArrayXd x = axis_coordinates(g);
  ArrayXcd u = ArrayXcd::Zero(g.size());
  std::vector<int> slots(g.d);
  for (int b = 0; b < bumps; ++b) {
    std::vector<double> centre(g.d);
    std::uint64_t h = splitmix64(seed ^ (0x5BD1E995ull * (b + 1)));
    for (int a = 0; a < g.d; ++a) {
      centre[a] = (uniform01(h) - 0.5) * g.L;  // within |x| <= L/2
      h = splitmix64(h);
    }
    const double sigma = g.L / 10.0 + uniform01(h) * (g.L / 6.0 - g.L / 10.0);
    h = splitmix64(h);
    const double phase = 2.0 * pi * uniform01(h);
    for (std::int64_t i = 0; i < g.size(); ++i) {
      unflatten(g, i, slots.data());
      double q = 0.0;
      for (int a = 0; a < g.d; ++a) {
        const double dxa = x[slots[a]] - centre[a];
        q += dxa * dxa;
      }
      u[i] += std::polar(amplitude * std::exp(-q / (2.0 * sigma * sigma)), phase);
    }
  }
  return Field::from_physical(g, u);
}

// Exact lattice plane wave amplitude * e^{i xi_j . x}.
inline Field single_mode(const GridSpec& g, const std::vector<int>& j, double amplitude) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("single_mode: amplitude must be positive");
  if (int(j.size()) != g.d) throw std::invalid_argument("single_mode: index dimension mismatch");
  ArrayXcd c = ArrayXcd::Zero(g.size());
  std::int64_t idx = 0;
  for (int a = 0; a < g.d; ++a) {
    if (j[a] < -g.n / 2 || j[a] >= g.n / 2) throw std::invalid_argument("single_mode: index outside lattice");
    const int slot = j[a] >= 0 ? j[a] : j[a] + g.n;
    idx = idx * g.n + slot;
  }
  c[idx] = amplitude;
  return Field::from_spectral(g, c);
}

// Scale so the plain energy is exactly 1: solve t*kin + t^2*pot = 1 for the
// multiplier t on |u|^2.
inline Field scale_to_unit_energy(const Field& f) {
  const EnergyBreakdown e = plain_energy(f, f.grid().k);
  if (e.total == 0.0) throw std::invalid_argument("scale_to_unit_energy: zero field");
  double t;
  if (e.potential > 0.0)
    t = (-e.kinetic + std::sqrt(e.kinetic * e.kinetic + 4.0 * e.potential)) / (2.0 * e.potential);
  else
    t = 1.0 / e.kinetic;
  return Field::from_spectral(f.grid(), f.spectral() * std::sqrt(t));
}

}  // namespace hoslab
