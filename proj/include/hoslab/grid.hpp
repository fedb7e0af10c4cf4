#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hoslab {

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Periodic box [-L, L)^d with n points per axis. k is the dispersion order of
// Lambda^k; the continuum setting has d == k but smoke tests run reduced d < k.
struct GridSpec {
  int d = 1;
  int k = 3;
  double L = 16.0;
  int n = 64;

  GridSpec() = default;
  GridSpec(int d_, int k_, double L_, int n_) : d(d_), k(k_), L(L_), n(n_) { validate(); }

  void validate() const {
    if (d < 1) throw std::invalid_argument("grid: d must be >= 1");
    if (k < 2) throw std::invalid_argument("grid: k must be >= 2");
    if (!(L > 0.0)) throw std::invalid_argument("grid: L must be positive");
    if (n < 4 || (n & (n - 1)) != 0) throw std::invalid_argument("grid: n must be a power of two >= 4");
  }

  std::int64_t size() const {
    std::int64_t s = 1;
    for (int a = 0; a < d; ++a) s *= n;
    return s;
  }
  double dx() const { return 2.0 * L / n; }
  double volume() const { return std::pow(2.0 * L, d); }
  double nyquist() const { return pi * n / (2.0 * L); }

  // signed mode index for FFT-order slot t on one axis: 0..n/2-1, -n/2..-1
  int mode_index(int t) const { return t < n / 2 ? t : t - n; }
  double freq_of_slot(int t) const { return pi * mode_index(t) / L; }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.d == b.d && a.k == b.k && a.L == b.L && a.n == b.n;
  }
};

// |xi| over the full flattened lattice, FFT order per axis, row-major.
inline Eigen::ArrayXd frequency_magnitudes(const GridSpec& g) {
  const std::int64_t sz = g.size();
  Eigen::ArrayXd out(sz);
  std::vector<int> t(g.d, 0);
  for (std::int64_t idx = 0; idx < sz; ++idx) {
    double s = 0.0;
    for (int a = 0; a < g.d; ++a) {
      const double xi = g.freq_of_slot(t[a]);
      s += xi * xi;
    }
    out[idx] = std::sqrt(s);
    for (int a = g.d - 1; a >= 0; --a) {
      if (++t[a] < g.n) break;
      t[a] = 0;
    }
  }
  return out;
}

// physical coordinates along one axis: x_t = -L + t*dx
inline Eigen::ArrayXd axis_coordinates(const GridSpec& g) {
  Eigen::ArrayXd x(g.n);
  for (int t = 0; t < g.n; ++t) x[t] = -g.L + t * g.dx();
  return x;
}

// Decompose flat row-major index into per-axis slots.
inline void unflatten(const GridSpec& g, std::int64_t idx, int* slots) {
  for (int a = g.d - 1; a >= 0; --a) {
    slots[a] = int(idx % g.n);
    idx /= g.n;
  }
}

}  // namespace hoslab
