#include "sco/engine.hpp"

#include <cmath>

namespace sco {

namespace {

constexpr double kStrict = 1e-12;  // slack for the strict heat-engine inequalities
constexpr double kDegenerate = 1e-12;
constexpr double kLn2 = 0.6931471805599453;

double eta_population(double imbalance, double t) {
  // (x + |x|) / (x + tanh), the population-only efficiency
  const double den = imbalance + t;
  if (den <= 0) return 0;
  return (imbalance + std::abs(imbalance)) / den;
}

CycleReport single_branch_report(CycleMode mode, double a_eff, double beta_eps) {
  CycleReport rep;
  rep.mode = mode;
  rep.beta_eps = beta_eps;
  rep.a_bar_inc = a_eff;
  BranchResult br = make_branch(Outcome::Plus, 1.0, a_eff, 0.0, beta_eps);
  rep.avg_w_ext = br.w_ext;
  rep.avg_q_hot = br.q_hot;
  rep.conditions_violated = !br.all_conditions_ok();
  if (!rep.conditions_violated) {
    rep.eta = eta_population(1 - 2 * a_eff, std::tanh(beta_eps));
    rep.eta_tilde = rep.eta;
  }
  rep.branches.push_back(std::move(br));
  return rep;
}

}  // namespace

BranchResult make_branch(Outcome outcome, double probability, double a_bar, cplx coherence,
                         double beta_eps, bool investing) {
  BranchResult br;
  br.outcome = outcome;
  br.probability = probability;
  if (probability < kDegenerate) {
    br.degenerate = true;
    return br;
  }
  br.a_bar = a_bar;
  br.coherence = coherence;

  const double t = std::tanh(beta_eps);
  const double x = 1 - 2 * a_bar;
  const double c2 = 4 * std::norm(coherence);
  const double r = std::sqrt(x * x + c2);
  const double gamma = investing ? 1.0 : -1.0;
  br.b_strength = 0.5 * (1 - gamma * r);

  const double u0 = -t, s0 = binary_entropy((1 + t) / 2);
  const double u1 = x, s1 = binary_entropy((1 + r) / 2);
  const double u2 = gamma * r, s2 = s1;  // isentropic by choice of b

  br.strokes[0] = {1, u0, u1, s0, s1, StrokeKind::Heat, u1 - u0};
  br.strokes[1] = {2, u1, u2, s1, s2, StrokeKind::Work, -(u2 - u1)};
  br.strokes[2] = {3, u2, u0, s2, s0, StrokeKind::Heat, u0 - u2};
  br.q_hot = u1 - u0;
  br.w_ext = u1 - u2;
  br.q_cold = u0 - u2;

  br.conditions_ok[0] = a_bar - 0.5 * (1 - t) > kStrict;
  br.conditions_ok[1] = 0.5 * (1 + t) - a_bar > kStrict;
  br.conditions_ok[2] = t * t - x * x - c2 > kStrict;

  if (br.q_hot > kStrict) br.efficiency = br.w_ext / br.q_hot;
  return br;
}

CycleReport definite_cycle(MeasurementStrength a, double beta_eps) {
  return single_branch_report(CycleMode::Definite, a.value, beta_eps);
}

CycleReport incoherent_cycle(MeasurementStrength a, MeasurementStrength a_prime,
                             const InitialStateSpec& spec) {
  const DensityOperator rho = initial_state(spec);
  const SwitchDecomposition dec = switch_decomposition(a, a_prime, rho);
  const double a_eff = dec.lambda_weight * a_prime.value + (1 - dec.lambda_weight) * a.value;
  CycleReport rep = single_branch_report(CycleMode::Incoherent, a_eff, spec.gibbs.beta_eps);
  rep.lambda_weight = dec.lambda_weight;
  return rep;
}

std::pair<BranchResult, BranchResult> coherent_branches(MeasurementStrength a,
                                                        MeasurementStrength a_prime,
                                                        double phi_prime,
                                                        const InitialStateSpec& spec) {
  const DensityOperator rho = initial_state(spec);
  const SwitchDecomposition dec = switch_decomposition(a, a_prime, rho);
  const ComplexMatrix xi = xi_operator(dec, phi_prime);
  const double a_inc = dec.lambda_weight * a_prime.value + (1 - dec.lambda_weight) * a.value;
  const double tr_xi = (xi(0, 0) + xi(1, 1)).real();
  const double beta_eps = spec.gibbs.beta_eps;

  auto branch = [&](Outcome o) {
    const double sgn = (o == Outcome::Plus) ? 1.0 : -1.0;
    const double p = 0.5 * (1 + sgn * tr_xi);
    if (p < kDegenerate) return make_branch(o, p, 0.5, 0.0, beta_eps);
    const double abar = (a_inc + sgn * xi(0, 0).real()) / (2 * p);
    const cplx coh = sgn * xi(0, 1) / (2 * p);
    return make_branch(o, p, abar, coh, beta_eps);
  };
  return {branch(Outcome::Plus), branch(Outcome::Minus)};
}

CycleReport coherent_cycle(MeasurementStrength a, MeasurementStrength a_prime, double phi_prime,
                           const InitialStateSpec& spec, double beta_d_inv) {
  if (beta_d_inv < 0) throw DomainError("coherent_cycle: beta_d_inv < 0");
  CycleReport rep;
  rep.mode = CycleMode::Coherent;
  rep.beta_eps = spec.gibbs.beta_eps;

  auto [plus, minus] = coherent_branches(a, a_prime, phi_prime, spec);
  const double t = std::tanh(rep.beta_eps);

  double avg_r = 0;  // sum_pm p_pm sqrt((1-2abar)^2 + 4|rho01|^2)
  double a_inc = 0;
  for (const BranchResult* br : {&plus, &minus}) {
    if (br->degenerate) continue;
    rep.avg_w_ext += br->probability * br->w_ext;
    rep.avg_q_hot += br->probability * br->q_hot;
    avg_r += br->probability * (2 * br->b_strength - 1);
    a_inc += br->probability * br->a_bar;
    rep.conditions_violated = rep.conditions_violated || !br->all_conditions_ok();
  }
  rep.a_bar_inc = a_inc;
  rep.w_cost = -beta_d_inv * kLn2;

  const double x = 1 - 2 * a_inc;
  const double den = x + t;
  rep.t_d_crit = (avg_r - std::abs(x)) / kLn2;
  if (den > 0) {
    // delta_eta / eta_cost are raw contributions; the efficiencies follow the
    // zero-when-violated reporting convention.
    rep.delta_eta = (avg_r - std::abs(x)) / den;
    rep.eta_cost = beta_d_inv * kLn2 / den;
    if (!rep.conditions_violated) {
      rep.eta_tilde = eta_population(x, t) + rep.delta_eta;
      rep.eta = rep.eta_tilde - rep.eta_cost;
    }
  } else {
    rep.conditions_violated = true;  // cannot absorb heat in the first stroke
  }
  rep.branches.push_back(std::move(plus));
  rep.branches.push_back(std::move(minus));
  return rep;
}

WorkVectors work_vectors(MeasurementStrength a, MeasurementStrength a_prime, double phi_prime,
                         const InitialStateSpec& spec) {
  const DensityOperator rho = initial_state(spec);
  const SwitchDecomposition dec = switch_decomposition(a, a_prime, rho);
  const ComplexMatrix xi = xi_operator(dec, phi_prime);
  const double a_inc = dec.lambda_weight * a_prime.value + (1 - dec.lambda_weight) * a.value;
  WorkVectors v;
  v.beta_eps = spec.gibbs.beta_eps;
  v.w_inc.diag = 1 - 2 * a_inc;
  v.w_inc.off = 0;
  v.w_sco.diag = (xi(0, 0) - xi(1, 1)).real();
  v.w_sco.off = 2 * std::abs(xi(0, 1));
  return v;
}

double delta_eta_from_vectors(const WorkVectors& v, double beta_eps) {
  const double den = v.w_inc.diag + std::tanh(beta_eps);
  if (den <= 0) throw DomainError("delta_eta_from_vectors: non-positive denominator");
  const double sum_d = v.w_inc.diag + v.w_sco.diag;
  const double dif_d = v.w_inc.diag - v.w_sco.diag;
  const double n_sum = std::hypot(sum_d, v.w_inc.off + v.w_sco.off);
  const double n_dif = std::hypot(dif_d, v.w_inc.off - v.w_sco.off);
  const double n_inc = std::hypot(v.w_inc.diag, v.w_inc.off);
  return (0.5 * (n_sum + n_dif) - n_inc) / den;
}

}  // namespace sco
