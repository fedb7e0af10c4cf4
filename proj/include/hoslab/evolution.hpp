#pragma once

#include <stdexcept>
#include <vector>

#include "hoslab/i_method.hpp"

namespace hoslab {

struct SolverConfig {
  double dt = 1e-4;
  double T = 1.0;
  bool dealias = true;
  int record_every = 1;
  bool nonlinearity_on = true;
  bool dispersion_on = true;

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (T < dt) throw std::invalid_argument("solver: T must be >= dt");
    if (record_every < 1) throw std::invalid_argument("solver: record_every must be >= 1");
  }
};

struct BlowUpSuspected : std::runtime_error {
  double t;
  explicit BlowUpSuspected(double t_)
      : std::runtime_error("blow-up suspected at t = " + std::to_string(t_)), t(t_) {}
};

struct ConservationTrace {
  std::vector<double> times;
  std::vector<double> mass;                          // ||u(t)||_L2^2
  std::vector<double> energy;                        // E(u(t))
  std::vector<std::vector<double>> modified_energy;  // E(I_N u(t)), one row per configured N
  std::vector<double> hgamma;                        // ||u(t)||_{H^gamma}
};

struct EvolveResult {
  ConservationTrace trace;
  Field final_field;
};

// e^{it Lambda^k}: exact spectral phase, unitary on the discrete L2 norm.
inline Field linear_propagate(const Field& f, double t) {
  if (t == 0.0) return f;
  const GridSpec& g = f.grid();
  const Eigen::ArrayXd mags = frequency_magnitudes(g);
  ArrayXcd c = f.spectral();
  const std::complex<double> im(0.0, 1.0);
  for (Eigen::Index i = 0; i < c.size(); ++i)
    c[i] *= std::exp(im * (t * std::pow(mags[i], double(g.k))));
  return Field::from_spectral(g, c);
}

// The substep ODE du/dt = i|u|^2 u has the exact solution u e^{i|u|^2 t};
// the modulus is preserved pointwise, so every L^p norm is invariant.
inline Field nonlinear_substep(const Field& f, double t) {
  if (t == 0.0) return f;
  const ArrayXcd& u = f.physical();
  const std::complex<double> im(0.0, 1.0);
  ArrayXcd out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = u[i] * std::exp(im * (std::norm(u[i]) * t));
  return Field::from_physical(f.grid(), out);
}

// 2/3-rule mask: keep |j| <= n/3 per axis.
inline Eigen::ArrayXd dealias_mask(const GridSpec& g) {
  const std::int64_t sz = g.size();
  Eigen::ArrayXd mask(sz);
  std::vector<int> slots(g.d);
  for (std::int64_t i = 0; i < sz; ++i) {
    unflatten(g, i, slots.data());
    bool keep = true;
    for (int a = 0; a < g.d; ++a) {
      if (std::abs(g.mode_index(slots[a])) > g.n / 3) { keep = false; break; }
    }
    mask[i] = keep ? 1.0 : 0.0;
  }
  return mask;
}

namespace detail {

// Dealiased nonlinear phase: the rotation intensity |u|^2 is formed from the
// 2/3-truncated field, so the cubic image u e^{i|Tu|^2 dt} ~ u + i dt |Tu|^2 u + ...
// stays representable. The phase is real either way, so the modulus -- and the
// discrete mass -- is still preserved exactly.
inline ArrayXcd nonlinear_phase_field(const GridSpec& g, const ArrayXcd& u_phys,
                                      const ArrayXcd& u_spec, bool dealias,
                                      const Eigen::ArrayXd& mask) {
  if (!dealias) return u_phys;
  return physical_from_spectral(g, u_spec * mask);
}

}  // namespace detail

class StrangStepper {
 public:
  StrangStepper(const GridSpec& g, const SolverConfig& cfg) : g_(g), cfg_(cfg) {
    cfg.validate();
    mags_ = frequency_magnitudes(g);
    phase_full_.resize(mags_.size());
    const std::complex<double> im(0.0, 1.0);
    for (Eigen::Index i = 0; i < mags_.size(); ++i)
      phase_full_[i] = std::exp(im * (cfg.dt * std::pow(mags_[i], double(g.k))));
    if (cfg.dealias) mask_ = dealias_mask(g);
  }

  // One Strang step: half nonlinear, full linear, half nonlinear.
  Field step(const Field& f, double t_now) const {
    if (!cfg_.nonlinearity_on && !cfg_.dispersion_on) return f;
    if (!cfg_.nonlinearity_on) return linear_propagate(f, cfg_.dt);
    if (!cfg_.dispersion_on) return nonlinear_substep(f, cfg_.dt);

    Field a = half_nonlinear(f);
    ArrayXcd c = a.spectral() * phase_full_;
    Field b = Field::from_spectral(g_, c);
    Field out = half_nonlinear(b);
    if (!out.physical().isFinite().all()) throw BlowUpSuspected(t_now + cfg_.dt);
    return out;
  }

 private:
  Field half_nonlinear(const Field& f) const {
    const ArrayXcd& u = f.physical();
    const ArrayXcd base = detail::nonlinear_phase_field(g_, u, f.spectral(), cfg_.dealias, mask_);
    const std::complex<double> im(0.0, 1.0);
    const double h = 0.5 * cfg_.dt;
    ArrayXcd out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = u[i] * std::exp(im * (std::norm(base[i]) * h));
    return Field::from_physical(g_, out);
  }

  GridSpec g_;
  SolverConfig cfg_;
  Eigen::ArrayXd mags_;
  ArrayXcd phase_full_;
  Eigen::ArrayXd mask_;
};

inline Field step(const Field& f, const SolverConfig& cfg) {
  return StrangStepper(f.grid(), cfg).step(f, 0.0);
}

// March to T = nsteps * dt, sampling the trace every record_every steps (the
// initial and final states are always recorded). Blow-up check: any modulus
// above 1e6 x the initial max.
inline EvolveResult evolve(const Field& f0, const SolverConfig& cfg,
                           const std::vector<IOperatorSpec>& specs, double trace_gamma) {
  cfg.validate();
  const StrangStepper stepper(f0.grid(), cfg);
  const std::int64_t nsteps = std::llround(cfg.T / cfg.dt);
  const double init_max = f0.physical().abs().maxCoeff();
  const double guard = 1e6 * (init_max > 0.0 ? init_max : 1.0);

  std::vector<Eigen::ArrayXd> m_samples;
  m_samples.reserve(specs.size());
  for (const auto& s : specs) m_samples.push_back(sample_m(f0.grid(), s));

  ConservationTrace trace;
  trace.modified_energy.resize(specs.size());
  auto record = [&](double t, const Field& u) {
    trace.times.push_back(t);
    trace.mass.push_back(std::pow(lp_norm(u, 2.0), 2.0));
    trace.energy.push_back(plain_energy(u, u.grid().k).total);
    for (std::size_t s = 0; s < specs.size(); ++s) {
      const Field Iu = apply_symbol(u, m_samples[s]);
      trace.modified_energy[s].push_back(plain_energy(Iu, specs[s].k).total);
    }
    trace.hgamma.push_back(sobolev_norm(u, trace_gamma, Homogeneity::inhomogeneous));
  };

  Field u = f0;
  record(0.0, u);
  for (std::int64_t i = 0; i < nsteps; ++i) {
    const double t = i * cfg.dt;
    u = stepper.step(u, t);
    if (u.physical().abs().maxCoeff() > guard) throw BlowUpSuspected(t + cfg.dt);
    if ((i + 1) % cfg.record_every == 0 || i + 1 == nsteps) record((i + 1) * cfg.dt, u);
  }
  return EvolveResult{std::move(trace), std::move(u)};
}

// Scaling symmetry of the flow at t = 0: u_lambda(x) = lambda^{-k/2} u(x/lambda),
// realized spectrally on the co-scaled box [-lambda L, lambda L)^d -- the lattice
// frequencies scale to xi/lambda with the same mode indices, so the map is
// exact (coefficients just scale by lambda^{-k/2}).
inline Field scaling_transform(const Field& f, double lambda) {
  const GridSpec& g = f.grid();
  if (g.d != g.k) throw std::invalid_argument("scaling_transform: requires d = k (L2-critical)");
  if (!(lambda > 0.0)) throw std::invalid_argument("scaling_transform: lambda must be positive");
  if (lambda == 1.0) return f;
  GridSpec g2(g.d, g.k, lambda * g.L, g.n);
  return Field::from_spectral(g2, f.spectral() * std::pow(lambda, -0.5 * g.k));
}

}  // namespace hoslab
