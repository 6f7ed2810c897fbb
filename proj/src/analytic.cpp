#include "sco/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sco {

namespace {

constexpr double kStrict = 1e-12;
constexpr double kGridPoints = 801;
constexpr double kThetaTol = 1e-8;
constexpr double kXiSafety = 1.0 - 1e-9;

struct Ingredients {
  double tanh_be, g0, g1;
  double lambda, a_inc, x;  // x = 1 - 2 a_inc
  double tr_xi, w_diag;
  cplx xi01;
};

Ingredients ingredients(const AnalyticParams& p) {
  Ingredients in;
  in.tanh_be = std::tanh(p.beta_eps);
  in.g0 = (1 + in.tanh_be) / 2;
  in.g1 = (1 - in.tanh_be) / 2;
  const double s = std::sin(p.theta), c = std::cos(p.theta);
  const double kap = std::cos(p.phi - p.phi_prime);
  const double m00 = p.a * p.a_prime * in.g0;
  const double m11 = (1 - p.a) * (1 - p.a_prime) * in.g1;

  double u0, u1, ctrl;
  if (p.family == Family::Uncorrelated) {
    u0 = u1 = 2 * p.zeta - 1;
    ctrl = u0;
  } else {
    u0 = 2 * p.zeta0 - 1;
    u1 = 2 * p.zeta1 - 1;
    ctrl = 2 * (p.zeta0 * in.g0 + p.zeta1 * in.g1) - 1;  // 2 tr[Z rho0] - 1
  }
  in.lambda = 0.5 * (1 + ctrl * c);
  in.a_inc = in.lambda * p.a_prime + (1 - in.lambda) * p.a;
  in.x = 1 - 2 * in.a_inc;
  in.tr_xi = s * kap * (u0 * m00 + u1 * m11);
  in.w_diag = s * kap * (u0 * m00 + (-u1) * m11);
  in.xi01 = 0;
  if (p.family == Family::Entangled && p.xi != 0) {
    const double half = p.theta / 2;
    const double A = p.a * (1 - p.a_prime) * std::sin(half) * std::sin(half);
    const double B = p.a_prime * (1 - p.a) * std::cos(half) * std::cos(half);
    const double d = p.phi - p.phi_prime;
    in.xi01 = p.xi * std::polar(1.0, -p.varphi) *
              (A * std::polar(1.0, d) - B * std::polar(1.0, -d));
  }
  return in;
}

bool branch_ok(double a_bar, double coh2, double t) {
  const double x = 1 - 2 * a_bar;
  return a_bar - 0.5 * (1 - t) > kStrict && 0.5 * (1 + t) - a_bar > kStrict &&
         t * t - x * x - 4 * coh2 > kStrict;
}

BranchClosed branch_from(const Ingredients& in, Outcome o, double t) {
  const double sgn = (o == Outcome::Plus) ? 1.0 : -1.0;
  BranchClosed br;
  br.probability = 0.5 * (1 + sgn * in.tr_xi);
  if (br.probability < kStrict) return br;
  const double xb = (in.x - sgn * in.w_diag) / (2 * br.probability);
  br.a_bar = (1 - xb) / 2;
  br.coherence = sgn * in.xi01 / (2 * br.probability);
  br.feasible = branch_ok(br.a_bar, std::norm(br.coherence), t);
  return br;
}

double eta_tilde_from(const Ingredients& in) {
  const double den = in.x + in.tanh_be;
  if (den <= 0) throw DomainError("eta_tilde_closed: non-positive denominator");
  const double wo = 2 * std::abs(in.xi01);
  const double avg =
      0.5 * (std::hypot(in.x + in.w_diag, wo) + std::hypot(in.x - in.w_diag, wo));
  return (avg + in.x) / den;
}

EtaResult eta_ps_from(const Ingredients& in, Outcome o, double t) {
  const double sgn = (o == Outcome::Plus) ? 1.0 : -1.0;
  const double xb = in.x - sgn * in.w_diag;
  const double wo = 2 * std::abs(in.xi01);
  const double den = xb + (1 + sgn * in.tr_xi) * t;
  EtaResult r;
  const BranchClosed br = branch_from(in, o, t);
  r.feasible = br.feasible;
  if (den <= 0) {
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.feasible = false;
    return r;
  }
  r.value = (std::hypot(xb, wo) + xb) / den;
  return r;
}

// Largest xi keeping condition (22) satisfied for the given branch set, at
// fixed angles. tr_xi and w_diag do not depend on xi, so the bound is linear.
double admissible_xi(const AnalyticParams& p, bool both_branches, Outcome single) {
  if (p.family != Family::Entangled) return 0;
  AnalyticParams q = p;
  q.xi = 1.0;
  const Ingredients in = ingredients(q);
  const double unit = std::abs(in.xi01);  // |Xi01| per unit xi
  const double t = in.tanh_be;
  double best = p.xi;
  for (Outcome o : {Outcome::Plus, Outcome::Minus}) {
    if (!both_branches && o != single) continue;
    const double sgn = (o == Outcome::Plus) ? 1.0 : -1.0;
    const double pr = 0.5 * (1 + sgn * in.tr_xi);
    if (pr < kStrict) continue;
    const double xb = (in.x - sgn * in.w_diag) / (2 * pr);
    const double room = t * t - xb * xb;
    if (room <= kStrict) return 0;  // populations alone already break the bound
    if (unit < 1e-300) continue;
    best = std::min(best, kXiSafety * pr * std::sqrt(room) / unit);
  }
  return std::max(0.0, best);
}

std::vector<AnalyticParams> zeta_phi_candidates(const AnalyticParams& p, bool both_branches,
                                                Outcome single) {
  std::vector<AnalyticParams> cands;
  auto push = [&](double z0, double z1, double phi) {
    AnalyticParams q = p;
    q.phi = phi;
    if (p.family == Family::Uncorrelated) {
      q.zeta = z0;
    } else {
      q.zeta0 = z0;
      q.zeta1 = z1;
      q.xi = 0;
    }
    cands.push_back(q);
  };
  for (double phi : {p.phi_prime, p.phi_prime + M_PI}) {
    if (p.family == Family::Uncorrelated) {
      push(1, 1, phi);
      push(0, 0, phi);
    } else {
      push(1, 0, phi);
      push(0, 1, phi);
      push(1, 1, phi);
      push(0, 0, phi);
    }
  }
  if (p.family == Family::Entangled) {
    // Perfectly correlated corner with the largest admissible xi, at the two
    // optimal phase branches (population- vs coherence-dominant).
    for (double phi : {p.phi_prime, p.phi_prime + M_PI, p.phi_prime + M_PI / 2,
                       p.phi_prime - M_PI / 2}) {
      AnalyticParams q = p;
      q.zeta0 = 1;
      q.zeta1 = 0;
      q.phi = phi;
      q.xi = admissible_xi(q, both_branches, single);
      cands.push_back(q);
    }
  }
  return cands;
}

}  // namespace

DeltaSigma delta_sigma(double a, double a_prime, double beta_eps) {
  if (a < 0 || a > 1 || a_prime < 0 || a_prime > 1)
    throw DomainError("delta_sigma: strengths outside [0,1]");
  const double t = std::tanh(beta_eps);
  const double lo = (1 - a) * (1 - a_prime) * (1 - t);
  const double hi = a * a_prime * (1 + t);
  return {0.5 * (lo - hi), 0.5 * (lo + hi)};
}

InitialStateSpec AnalyticParams::to_spec() const {
  InitialStateSpec s;
  s.family = family;
  s.angles = {theta, phi};
  s.gibbs = {beta_eps};
  s.zeta = zeta;
  s.zeta0 = zeta0;
  s.zeta1 = zeta1;
  s.xi = xi;
  s.varphi = varphi;
  return s;
}

double lambda_closed(const AnalyticParams& p) { return ingredients(p).lambda; }
double abar_inc(const AnalyticParams& p) { return ingredients(p).a_inc; }
double tr_xi_closed(const AnalyticParams& p) { return ingredients(p).tr_xi; }

WorkVectors::Vec wsco_components(const AnalyticParams& p) {
  const Ingredients in = ingredients(p);
  return {in.w_diag, 2 * std::abs(in.xi01)};
}

cplx xi01_closed(const AnalyticParams& p) { return ingredients(p).xi01; }

BranchClosed branch_closed(const AnalyticParams& p, Outcome o) {
  const Ingredients in = ingredients(p);
  return branch_from(in, o, in.tanh_be);
}

double eta_tilde_closed(const AnalyticParams& p) { return eta_tilde_from(ingredients(p)); }

EtaResult eta_ps_closed(const AnalyticParams& p, Outcome o) {
  const Ingredients in = ingredients(p);
  return eta_ps_from(in, o, in.tanh_be);
}

EtaResult eta_closed_form(const AnalyticParams& p) {
  EtaResult best;
  for (const AnalyticParams& q : zeta_phi_candidates(p, true, Outcome::Plus)) {
    const Ingredients in = ingredients(q);
    if (in.x + in.tanh_be <= 0) continue;
    const bool ok = branch_from(in, Outcome::Plus, in.tanh_be).feasible &&
                    branch_from(in, Outcome::Minus, in.tanh_be).feasible;
    if (!ok) continue;
    const double v = eta_tilde_from(in);
    if (!best.feasible || v > best.value) best = {v, true, q};
  }
  return best;
}

EtaResult eta_postselected_closed_form(const AnalyticParams& p, Outcome o) {
  EtaResult best;
  for (const AnalyticParams& q : zeta_phi_candidates(p, false, o)) {
    const Ingredients in = ingredients(q);
    EtaResult r = eta_ps_from(in, o, in.tanh_be);
    if (!r.feasible) continue;
    r.at = q;
    if (!best.feasible || r.value > best.value) best = r;
  }
  return best;
}

EtaResult eta_postselected_best(const AnalyticParams& p) {
  const EtaResult plus = eta_postselected_closed_form(p, Outcome::Plus);
  const EtaResult minus = eta_postselected_closed_form(p, Outcome::Minus);
  if (plus.feasible && minus.feasible)
    return plus.value >= minus.value ? plus : minus;
  return plus.feasible ? plus : minus;
}

OptResult optimize_theta(const AnalyticParams& base, Objective obj, bool constraints_on,
                         std::optional<Outcome> outcome) {
  auto evaluate = [&](double theta) -> EtaResult {
    AnalyticParams q = base;
    q.theta = theta;
    EtaResult r = (obj == Objective::EtaTilde)
                      ? eta_closed_form(q)
                      : (outcome ? eta_postselected_closed_form(q, *outcome)
                                 : eta_postselected_best(q));
    if (!constraints_on && !r.feasible) {
      // unconstrained: report the raw formula maximum over the candidate set
      double v = -std::numeric_limits<double>::infinity();
      for (const AnalyticParams& c : zeta_phi_candidates(q, true, Outcome::Plus)) {
        const Ingredients in = ingredients(c);
        if (in.x + in.tanh_be <= 0) continue;
        if (obj == Objective::EtaTilde) {
          v = std::max(v, eta_tilde_from(in));
        } else {
          for (Outcome o : {Outcome::Plus, Outcome::Minus}) {
            if (outcome && o != *outcome) continue;
            const EtaResult pr = eta_ps_from(in, o, in.tanh_be);
            if (std::isfinite(pr.value)) v = std::max(v, pr.value);
          }
        }
      }
      if (std::isfinite(v)) r = {v, true, q};
    }
    return r;
  };

  OptResult out;
  int best_idx = -1;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGridPoints; ++i) {
    const double theta = M_PI * i / (kGridPoints - 1);
    const EtaResult r = evaluate(theta);
    if (!r.feasible) {
      if (constraints_on) out.constrained = true;
      continue;
    }
    if (best_idx < 0 || r.value > best_val) {  // ties keep the smaller theta
      best_idx = i;
      best_val = r.value;
    }
  }
  if (best_idx < 0) return out;  // infeasible everywhere
  out.feasible = true;
  out.at = base;

  const double h = M_PI / (kGridPoints - 1);
  double lo = std::max(0.0, M_PI * best_idx / (kGridPoints - 1) - h);
  double hi = std::min(M_PI, M_PI * best_idx / (kGridPoints - 1) + h);
  auto value_or_lowest = [&](double theta) {
    const EtaResult r = evaluate(theta);
    return r.feasible ? r.value : -std::numeric_limits<double>::infinity();
  };
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = value_or_lowest(c), fd = value_or_lowest(d);
  while (hi - lo > kThetaTol) {
    if (fc >= fd) {  // keep the left interval on ties
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = value_or_lowest(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = value_or_lowest(d);
    }
  }
  double theta_ref = 0.5 * (lo + hi);
  double val_ref = value_or_lowest(theta_ref);
  const double grid_theta = M_PI * best_idx / (kGridPoints - 1);
  if (!(val_ref >= best_val)) {  // refinement never loses to the grid
    theta_ref = grid_theta;
    val_ref = best_val;
  }
  out.theta_opt = theta_ref;
  out.value = val_ref;
  const EtaResult fin = evaluate(theta_ref);
  if (fin.feasible) out.at = fin.at;
  out.at.theta = theta_ref;
  return out;
}

void check_consistency(const AnalyticParams& p) {
  const MeasurementStrength a(p.a), ap(p.a_prime);
  const InitialStateSpec spec = p.to_spec();
  const double tol = 1e-9;

  const CycleReport inc = incoherent_cycle(a, ap, spec);
  if (std::abs(inc.a_bar_inc - abar_inc(p)) > tol)
    throw ConsistencyError("abar_inc: closed form disagrees with brute force");

  const WorkVectors wv = work_vectors(a, ap, p.phi_prime, spec);
  const WorkVectors::Vec cf = wsco_components(p);
  if (std::abs(wv.w_sco.diag - cf.diag) > tol || std::abs(wv.w_sco.off - cf.off) > tol)
    throw ConsistencyError("wsco_components: closed form disagrees with brute force");

  auto [plus, minus] = coherent_branches(a, ap, p.phi_prime, spec);
  for (const BranchResult* br : {&plus, &minus}) {
    if (br->degenerate) continue;
    const Outcome o = br->outcome;
    const BranchClosed bc = branch_closed(p, o);
    if (std::abs(bc.probability - br->probability) > tol ||
        std::abs(bc.a_bar - br->a_bar) > tol ||
        std::abs(bc.coherence - br->coherence) > tol)
      throw ConsistencyError("branch quantities: closed form disagrees with brute force");
    const EtaResult eta = eta_ps_closed(p, o);
    if (br->efficiency && std::isfinite(eta.value) &&
        std::abs(*br->efficiency - eta.value) > tol)
      throw ConsistencyError("eta_ps: closed form disagrees with brute force");
  }

  const double x = wv.w_inc.diag;
  if (x + std::tanh(p.beta_eps) > 1e-9) {
    const CycleReport coh = coherent_cycle(a, ap, p.phi_prime, spec, 0.0);
    const double via_engine = coh.delta_eta + (x + std::abs(x)) / (x + std::tanh(p.beta_eps));
    if (std::abs(via_engine - eta_tilde_closed(p)) > tol)
      throw ConsistencyError("eta_tilde: closed form disagrees with brute force");
  }
}

}  // namespace sco
