#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hoslab/field.hpp"

namespace hoslab {

// (sum |f|^p dx^d)^(1/p); p = inf returns max modulus. Plain Riemann cells:
// spectrally accurate for smooth periodic data, no quadrature corrections.
inline double lp_norm(const Field& f, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  const Eigen::ArrayXd mod = f.physical().abs();
  if (std::isinf(p)) return mod.maxCoeff();
  const double cell = std::pow(f.grid().dx(), f.grid().d);
  if (p == 2.0) return std::sqrt((mod.square().sum()) * cell);
  return std::pow(mod.pow(p).sum() * cell, 1.0 / p);
}

enum class Homogeneity { homogeneous, inhomogeneous };

// ||Lambda^gamma f||_L2 or ||<Lambda>^gamma f||_L2 via the discrete Parseval
// identity ||f||_L2^2 = V sum |c_xi|^2, V = (2L)^d. The zero mode contributes
// nothing for homogeneous gamma > 0 and is excluded for gamma < 0 (a nonzero
// mean is rejected there -- |0|^-gamma is undefined).
inline double sobolev_norm(const Field& f, double gamma, Homogeneity h) {
  const GridSpec& g = f.grid();
  const ArrayXcd& c = f.spectral();
  if (h == Homogeneity::inhomogeneous && gamma == 0.0) return lp_norm(f, 2.0);  // Parseval alias
  const Eigen::ArrayXd mags = frequency_magnitudes(g);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double r = mags[i];
    double w;
    if (h == Homogeneity::homogeneous) {
      if (r == 0.0) {
        if (gamma < 0.0 && std::abs(c[i]) > 1e-13 * (1.0 + c.abs().maxCoeff()))
          throw std::invalid_argument("sobolev_norm: homogeneous gamma < 0 needs zero mean");
        continue;
      }
      w = std::pow(r, 2.0 * gamma);
    } else {
      w = std::pow(1.0 + r * r, gamma);
    }
    acc += w * std::norm(c[i]);
  }
  return std::sqrt(g.volume() * acc);
}

// L^p_t of the per-snapshot L^q_x norms over a uniformly sampled trajectory;
// trapezoidal in time, max over snapshots for p = inf.
inline double spacetime_norm(const std::vector<Field>& traj, double p, double q, double dt) {
  if (traj.empty()) throw std::invalid_argument("spacetime_norm: empty trajectory");
  if (p < 1.0 || q < 1.0) throw std::invalid_argument("spacetime_norm: exponents must be >= 1");
  std::vector<double> snap(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) snap[i] = lp_norm(traj[i], q);
  if (std::isinf(p)) {
    double m = 0.0;
    for (double s : snap) m = std::max(m, s);
    return m;
  }
  if (traj.size() == 1) return snap[0];
  double acc = 0.5 * (std::pow(snap.front(), p) + std::pow(snap.back(), p));
  for (std::size_t i = 1; i + 1 < traj.size(); ++i) acc += std::pow(snap[i], p);
  return std::pow(acc * dt, 1.0 / p);
}

}  // namespace hoslab
