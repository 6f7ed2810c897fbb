#include "sco/states.hpp"

#include <cmath>

namespace sco {

const char* family_name(Family f) {
  switch (f) {
    case Family::Uncorrelated: return "uncorrelated";
    case Family::Separable: return "separable";
    case Family::Entangled: return "entangled";
  }
  return "?";
}

Family family_from_name(const std::string& s) {
  if (s == "uncorrelated" || s == "unc") return Family::Uncorrelated;
  if (s == "separable" || s == "sep") return Family::Separable;
  if (s == "entangled" || s == "qe") return Family::Entangled;
  throw DomainError("unknown family: " + s);
}

double InitialStateSpec::xi_max() const { return 0.5 / std::cosh(gibbs.beta_eps); }

void InitialStateSpec::validate() const {
  if (!(gibbs.beta_eps >= 0) || !std::isfinite(gibbs.beta_eps))
    throw DomainError("beta_eps must be finite and >= 0");
  if (angles.theta < -1e-12 || angles.theta > M_PI + 1e-12)
    throw DomainError("theta outside [0, pi]");
  switch (family) {
    case Family::Uncorrelated:
      if (zeta < -1e-12 || zeta > 1 + 1e-12) throw DomainError("zeta outside [0,1]");
      break;
    case Family::Entangled:
      if (xi < -1e-12 || xi > xi_max() + 1e-12)
        throw DomainError("xi outside [0, sech(beta_eps)/2]");
      [[fallthrough]];
    case Family::Separable:
      if (zeta0 < -1e-12 || zeta0 > 1 + 1e-12 || zeta1 < -1e-12 || zeta1 > 1 + 1e-12)
        throw DomainError("zeta0/zeta1 outside [0,1]");
      // ordering convention: correlations are measured by zeta0 - zeta1 >= 0
      if (zeta1 > zeta0 + 1e-12 || zeta0 < 0.5 - 1e-12)
        throw DomainError("convention requires zeta1 <= zeta0 and zeta0 >= 1/2");
      break;
  }
}

void control_amplitudes(ControlAngles a, cplx out[2]) {
  out[0] = std::cos(a.theta / 2);
  out[1] = std::polar(1.0, a.phi) * std::sin(a.theta / 2);
}

namespace {

ComplexMatrix pure_projector(ControlAngles a) {
  cplx amp[2];
  control_amplitudes(a, amp);
  ComplexMatrix m(2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = amp[r] * std::conj(amp[c]);
  return m;
}

}  // namespace

DensityOperator gibbs_state(GibbsParams g) {
  if (!(g.beta_eps >= 0)) throw DomainError("gibbs_state: beta_eps < 0");
  const double t = std::tanh(g.beta_eps);
  return DensityOperator(ComplexMatrix::diag({(1 + t) / 2, (1 - t) / 2}));
}

DensityOperator control_pure(ControlAngles angles) {
  return DensityOperator(pure_projector(angles));
}

DensityOperator omega_mix(double zeta, ControlAngles angles) {
  if (zeta < -1e-12 || zeta > 1 + 1e-12) throw DomainError("omega_mix: zeta outside [0,1]");
  ComplexMatrix m = pure_projector(angles);
  m *= zeta;
  ComplexMatrix mp = pure_projector({angles.theta - M_PI, angles.phi});
  mp *= 1 - zeta;
  m += mp;
  return DensityOperator(m);
}

DensityOperator initial_state(const InitialStateSpec& spec) {
  spec.validate();
  const double t = std::tanh(spec.gibbs.beta_eps);
  const double g0 = (1 + t) / 2, g1 = (1 - t) / 2;
  const ControlAngles a0 = spec.angles;
  const ControlAngles a1{spec.angles.theta - M_PI, spec.angles.phi};

  if (spec.family == Family::Uncorrelated)
    return DensityOperator(
        tensor(gibbs_state(spec.gibbs).matrix(), omega_mix(spec.zeta, a0).matrix()));

  ComplexMatrix rho = tensor(ket_bra(0, 0), omega_mix(spec.zeta0, a0).matrix());
  rho *= g0;
  ComplexMatrix part1 = tensor(ket_bra(1, 1), omega_mix(spec.zeta1, a0).matrix());
  part1 *= g1;
  rho += part1;

  if (spec.family == Family::Entangled && spec.xi != 0) {
    cplx p0[2], p1[2];
    control_amplitudes(a0, p0);
    control_amplitudes(a1, p1);
    ComplexMatrix cross(2);  // |psi_theta><psi_{theta-pi}|
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) cross(r, c) = p0[r] * std::conj(p1[c]);
    ComplexMatrix block = tensor(ket_bra(0, 1), cross);
    block *= spec.xi * std::polar(1.0, -spec.varphi);
    rho += block;
    rho += block.adjoint();
  }
  // DensityOperator construction re-checks PSD; a failure here signals an
  // invalid zeta/xi combination, reported as NotPositive (no clamping).
  return DensityOperator(rho);
}

bool check_local_thermality(const DensityOperator& rho, GibbsParams g) {
  const DensityOperator local = partial_trace(rho, Subsystem::First);
  return max_abs_diff(local.matrix(), gibbs_state(g).matrix()) < 1e-10;
}

}  // namespace sco
