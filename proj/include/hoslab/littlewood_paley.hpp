#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hoslab/multiplier.hpp"
#include "hoslab/norms.hpp"

namespace hoslab {

// C-infinity step: 0 for t <= 0, 1 for t >= 1, strictly increasing between.
inline double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// Dyadic base cutoff: 1 on [0,1], 0 on [2,inf), smooth shoulder between.
inline double lp_phi(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return smoothstep(2.0 - r);
}

// Shell bump psi_M(r) = phi(r/M) - phi(2r/M), supported in [M/2, 2M].
inline double lp_psi(double r, double M) { return lp_phi(r / M) - lp_phi(2.0 * r / M); }

enum class Band { le, gt, eq, lt, ge, shell };

inline bool is_dyadic(double M) {
  if (!(M > 0.0)) return false;
  const double l = std::log2(M);
  return std::abs(l - std::round(l)) < 1e-12;
}

// P_{<=M}, P_{>M}, P_M, and the combinations P_{<M} = P_{<=M} - P_M and
// P_{>=M} = P_{>M} + P_M built literally from those identities.
// band == shell selects (M, M2] via phi(r/M2) - phi(r/M).
inline Field project(const Field& f, Band band, double M, double M2 = 0.0) {
  const GridSpec& g = f.grid();
  if (!is_dyadic(M)) throw std::invalid_argument("project: M must be a dyadic 2^j");
  if (M > g.nyquist()) throw std::invalid_argument("project: M above grid Nyquist");
  auto weight = [&](double r) -> double {
    switch (band) {
      case Band::le: return lp_phi(r / M);
      case Band::gt: return 1.0 - lp_phi(r / M);
      case Band::eq: return lp_psi(r, M);
      case Band::lt: return lp_phi(r / M) - lp_psi(r, M);
      case Band::ge: return (1.0 - lp_phi(r / M)) + lp_psi(r, M);
      case Band::shell:
        if (!is_dyadic(M2) || M2 < M) throw std::invalid_argument("project: bad shell (M1,M2]");
        return lp_phi(r / M2) - lp_phi(r / M);
    }
    return 0.0;
  };
  return apply_multiplier(f, {weight, "P_band"});
}

struct BernsteinReport {
  bool empty_shell = false;
  std::vector<std::pair<std::string, double>> ratios;  // five Bernstein families
};

// Ratios measured / bound for the five Bernstein lines, with the grid
// dimension d in the L^p -> L^q scaling exponent (the continuum statement has
// d = k; reduced mode substitutes d).
inline BernsteinReport bernstein_check(const Field& f, double M, double gamma, double p, double q) {
  if (gamma < 0.0) throw std::invalid_argument("bernstein_check: gamma must be >= 0");
  if (p < 1.0 || q < p) throw std::invalid_argument("bernstein_check: need 1 <= p <= q");
  const int d = f.grid().d;
  BernsteinReport rep;

  const Field f_ge = project(f, Band::ge, M);
  const Field f_le = project(f, Band::le, M);
  const Field f_eq = project(f, Band::eq, M);
  if (lp_norm(f_eq, 2.0) < 1e-30) {
    rep.empty_shell = true;
    return rep;
  }
  const MultiplierSpec lam = lambda_pow(gamma);
  const double pq_gain = std::pow(M, double(d) / p - double(d) / q);

  rep.ratios.emplace_back("high_smoothing",
                          lp_norm(f_ge, p) * std::pow(M, gamma) / lp_norm(apply_multiplier(f_ge, lam), p));
  rep.ratios.emplace_back("low_derivative",
                          lp_norm(apply_multiplier(f_le, lam), p) / (std::pow(M, gamma) * lp_norm(f_le, p)));
  rep.ratios.emplace_back("shell_derivative",
                          lp_norm(apply_multiplier(f_eq, lam), p) / (std::pow(M, gamma) * lp_norm(f_eq, p)));
  rep.ratios.emplace_back("low_pq", lp_norm(f_le, q) / (pq_gain * lp_norm(f_le, p)));
  rep.ratios.emplace_back("shell_pq", lp_norm(f_eq, q) / (pq_gain * lp_norm(f_eq, p)));
  return rep;
}

}  // namespace hoslab
