#include "hoslab/transform.hpp"

#include <unsupported/Eigen/FFT>
#include <stdexcept>
#include <vector>

namespace hoslab {

namespace {

// One FFT pass along `axis` of the row-major n^d array. dir > 0: unnormalized
// forward DFT; dir < 0: normalized inverse. Plans and line buffers are
// thread_local so concurrent transforms on different threads never share state.
void axis_pass(const GridSpec& g, ArrayXcd& data, int axis, int dir) {
  thread_local Eigen::FFT<double> fft;
  thread_local std::vector<std::complex<double>> line, out;
  const int n = g.n;
  line.resize(n);
  out.resize(n);

  std::int64_t stride = 1;
  for (int a = axis + 1; a < g.d; ++a) stride *= n;
  const std::int64_t block = stride * n;
  const std::int64_t nlines = g.size() / n;

  for (std::int64_t l = 0; l < nlines; ++l) {
    const std::int64_t base = (l / stride) * block + (l % stride);
    for (int t = 0; t < n; ++t) line[t] = data[base + t * stride];
    if (dir > 0)
      fft.fwd(out, line);
    else
      fft.inv(out, line);
    for (int t = 0; t < n; ++t) data[base + t * stride] = out[t];
  }
}

// (-1)^(t1+...+td) over the flat array.
void apply_alternating_signs(const GridSpec& g, ArrayXcd& data) {
  const std::int64_t sz = g.size();
  std::vector<int> t(g.d, 0);
  for (std::int64_t idx = 0; idx < sz; ++idx) {
    int parity = 0;
    for (int a = 0; a < g.d; ++a) parity ^= (t[a] & 1);
    if (parity) data[idx] = -data[idx];
    for (int a = g.d - 1; a >= 0; --a) {
      if (++t[a] < g.n) break;
      t[a] = 0;
    }
  }
}

}  // namespace

ArrayXcd spectral_from_physical(const GridSpec& g, const ArrayXcd& phys) {
  if (phys.size() != g.size()) throw std::invalid_argument("transform: size mismatch");
  ArrayXcd spec = phys;
  for (int a = 0; a < g.d; ++a) axis_pass(g, spec, a, +1);
  apply_alternating_signs(g, spec);
  spec /= double(g.size());
  return spec;
}

ArrayXcd physical_from_spectral(const GridSpec& g, const ArrayXcd& spec) {
  if (spec.size() != g.size()) throw std::invalid_argument("transform: size mismatch");
  ArrayXcd phys = spec;
  apply_alternating_signs(g, phys);
  for (int a = 0; a < g.d; ++a) axis_pass(g, phys, a, -1);
  phys *= double(g.size());
  return phys;
}

}  // namespace hoslab
