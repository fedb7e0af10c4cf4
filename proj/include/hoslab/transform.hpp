#pragma once

#include <Eigen/Core>
#include <complex>

#include "hoslab/grid.hpp"

namespace hoslab {

using ArrayXcd = Eigen::ArrayXcd;

// Forward transform: physical samples -> Fourier-series coefficients c_xi with
// u(x) = sum_xi c_xi e^{i xi.x}, xi = pi j / L. The grid starts at -L, which
// contributes a (-1)^j phase per axis relative to the raw DFT; with n even the
// sign at storage slot t equals (-1)^t.
ArrayXcd spectral_from_physical(const GridSpec& g, const ArrayXcd& phys);

// Inverse: coefficients -> physical samples (exact inverse of the above).
ArrayXcd physical_from_spectral(const GridSpec& g, const ArrayXcd& spec);

}  // namespace hoslab
