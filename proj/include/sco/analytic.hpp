#pragma once

#include "sco/engine.hpp"

#include <functional>

namespace sco {

struct DeltaSigma {
  double delta = 0;
  double sigma = 0;
};
DeltaSigma delta_sigma(double a, double a_prime, double beta_eps);

/// Flat parameter tuple for the closed-form expressions. Family selects which
/// of zeta / (zeta0, zeta1, xi, varphi) are live.
struct AnalyticParams {
  Family family = Family::Uncorrelated;
  double a = 0.5, a_prime = 0.5;
  double beta_eps = 1.0;
  double theta = 0, phi = 0, phi_prime = 0;
  double zeta = 1;
  double zeta0 = 1, zeta1 = 0;
  double xi = 0, varphi = 0;

  InitialStateSpec to_spec() const;
};

double lambda_closed(const AnalyticParams& p);
double abar_inc(const AnalyticParams& p);
double tr_xi_closed(const AnalyticParams& p);
WorkVectors::Vec wsco_components(const AnalyticParams& p);  // (tr[Xi Z], 2|tr[Xi|1><0|]|)
cplx xi01_closed(const AnalyticParams& p);

struct BranchClosed {
  double probability = 0;
  double a_bar = 0.5;
  cplx coherence = 0;
  bool feasible = false;  // the three heat-engine conditions, strict with slack
};
BranchClosed branch_closed(const AnalyticParams& p, Outcome o);

double eta_tilde_closed(const AnalyticParams& p);  // all parameters explicit

struct EtaResult {
  double value = 0;
  bool feasible = false;
  AnalyticParams at;  // the parameter tuple that attains the value
};
EtaResult eta_ps_closed(const AnalyticParams& p, Outcome o);  // all parameters explicit

// Optimized over the control preparation (zeta-corners and the optimal phases),
// theta still fixed. The entangled family also searches both optimal phase
// branches and clips xi to the largest admissible value.
EtaResult eta_closed_form(const AnalyticParams& p);
EtaResult eta_postselected_closed_form(const AnalyticParams& p, Outcome o);
EtaResult eta_postselected_best(const AnalyticParams& p);  // max over both outcomes

struct OptResult {
  double theta_opt = 0;
  double value = 0;
  bool constrained = false;  // the conditions removed part of [0, pi]
  bool feasible = false;     // some theta admissible at all
  AnalyticParams at;         // maximizing tuple (theta and control settings)
};

enum class Objective { EtaTilde, EtaPostselected };

OptResult optimize_theta(const AnalyticParams& base, Objective obj, bool constraints_on,
                         std::optional<Outcome> outcome = std::nullopt);

/// Throws ConsistencyError when the closed forms and the brute-force engine
/// disagree beyond 1e-9 at this parameter point.
void check_consistency(const AnalyticParams& p);

}  // namespace sco
