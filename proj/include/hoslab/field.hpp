#pragma once

#include <memory>
#include <utility>

#include "hoslab/grid.hpp"
#include "hoslab/transform.hpp"

namespace hoslab {

// Immutable grid function carrying both representations. Evolution alternates
// between physical and spectral work every step, so keeping the pair costs no
// extra transforms and makes spectral identities (If = f on band-limited data)
// exact rather than round-tripped.
class Field {
 public:
  static Field from_physical(const GridSpec& g, ArrayXcd phys) {
    g.validate();
    if (phys.size() != g.size()) throw std::invalid_argument("field: value count must equal n^d");
    ArrayXcd spec = spectral_from_physical(g, phys);
    return Field(g, std::move(phys), std::move(spec));
  }

  static Field from_spectral(const GridSpec& g, ArrayXcd spec) {
    g.validate();
    if (spec.size() != g.size()) throw std::invalid_argument("field: value count must equal n^d");
    ArrayXcd phys = physical_from_spectral(g, spec);
    return Field(g, std::move(phys), std::move(spec));
  }

  static Field zero(const GridSpec& g) {
    g.validate();
    return Field(g, ArrayXcd::Zero(g.size()), ArrayXcd::Zero(g.size()));
  }

  const GridSpec& grid() const { return grid_; }
  const ArrayXcd& physical() const { return phys_; }
  const ArrayXcd& spectral() const { return spec_; }

 private:
  Field(const GridSpec& g, ArrayXcd phys, ArrayXcd spec)
      : grid_(g), phys_(std::move(phys)), spec_(std::move(spec)) {}

  GridSpec grid_;
  ArrayXcd phys_;
  ArrayXcd spec_;
};

}  // namespace hoslab
