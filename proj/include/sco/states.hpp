#pragma once

#include "sco/qmat.hpp"

namespace sco {

struct GibbsParams {
  double beta_eps = 0.0;  // dimensionless product, >= 0
};

struct ControlAngles {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2pi]
};

enum class Family { Uncorrelated, Separable, Entangled };

const char* family_name(Family f);
Family family_from_name(const std::string& s);

/// Joint initial state of medium and control. The medium is locally thermal
/// at beta_eps for every family; zeta / (zeta0, zeta1, xi, varphi) set the
/// control mixing and the medium-control correlations.
struct InitialStateSpec {
  Family family = Family::Uncorrelated;
  ControlAngles angles;
  GibbsParams gibbs;
  double zeta = 1.0;   // Uncorrelated only
  double zeta0 = 1.0;  // Separable/Entangled
  double zeta1 = 0.0;
  double xi = 0.0;     // Entangled only, absolute amplitude
  double varphi = 0.0;

  double xi_max() const;  // sech(beta_eps)/2
  void validate() const;  // throws DomainError on bad ranges
};

DensityOperator gibbs_state(GibbsParams g);
DensityOperator control_pure(ControlAngles angles);
DensityOperator omega_mix(double zeta, ControlAngles angles);
DensityOperator initial_state(const InitialStateSpec& spec);
bool check_local_thermality(const DensityOperator& rho, GibbsParams g);

// |psi_{theta,phi}> amplitudes; psi_pair gives the orthogonal partner at theta-pi.
void control_amplitudes(ControlAngles a, cplx out[2]);

}  // namespace sco
