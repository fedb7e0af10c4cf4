#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "hoslab/field.hpp"

namespace hoslab {

// Radial Fourier multiplier: xi -> symbol(|xi|).
struct MultiplierSpec {
  std::function<double(double)> symbol;
  std::string label;
};

inline MultiplierSpec identity_multiplier() {
  return {[](double) { return 1.0; }, "1"};
}

// |xi|^gamma. The zero mode maps to 0 for every nonzero gamma; for gamma < 0
// this excludes the mean (division by |0|^-gamma is undefined) and is the
// documented convention for homogeneous weights.
inline MultiplierSpec lambda_pow(double gamma) {
  return {[gamma](double r) {
            if (r == 0.0) return gamma == 0.0 ? 1.0 : 0.0;
            return std::pow(r, gamma);
          },
          "|xi|^" + std::to_string(gamma)};
}

// Japanese bracket <xi>^gamma = (1+|xi|^2)^(gamma/2).
inline MultiplierSpec bracket_pow(double gamma) {
  return {[gamma](double r) { return std::pow(1.0 + r * r, 0.5 * gamma); },
          "<xi>^" + std::to_string(gamma)};
}

inline Eigen::ArrayXd sample_symbol(const GridSpec& g, const MultiplierSpec& m) {
  const Eigen::ArrayXd mags = frequency_magnitudes(g);
  Eigen::ArrayXd vals(mags.size());
  for (Eigen::Index i = 0; i < mags.size(); ++i) {
    const double v = m.symbol(mags[i]);
    if (!std::isfinite(v)) {
      throw std::invalid_argument("multiplier '" + m.label + "' non-finite at |xi| = " +
                                  std::to_string(mags[i]));
    }
    vals[i] = v;
  }
  return vals;
}

inline Field apply_multiplier(const Field& f, const MultiplierSpec& m) {
  const Eigen::ArrayXd vals = sample_symbol(f.grid(), m);
  return Field::from_spectral(f.grid(), f.spectral() * vals);
}

// Variant for symbols already sampled on the lattice (hot loops).
inline Field apply_symbol(const Field& f, const Eigen::ArrayXd& sampled) {
  if (sampled.size() != f.grid().size()) throw std::invalid_argument("apply_symbol: size mismatch");
  return Field::from_spectral(f.grid(), f.spectral() * sampled);
}

}  // namespace hoslab
