#pragma once

#include "sco/channels.hpp"
#include "sco/states.hpp"

#include <array>
#include <optional>
#include <vector>

namespace sco {

enum class StrokeKind { Heat, Work };

struct StrokeRecord {
  int index = 0;  // 1..3
  double u_before = 0, u_after = 0;  // units of eps
  double s_before = 0, s_after = 0;  // nats
  StrokeKind kind = StrokeKind::Heat;
  double value = 0;  // heat: dU; work: -dU
};

enum class Outcome { Plus, Minus };

struct BranchResult {
  Outcome outcome = Outcome::Plus;
  double probability = 1.0;
  double a_bar = 0.5;
  cplx coherence = 0.0;   // rho01 of the post-switch conditional state
  double b_strength = 0.5;
  double q_hot = 0, w_ext = 0, q_cold = 0;
  std::array<StrokeRecord, 3> strokes{};
  std::array<bool, 3> conditions_ok{false, false, false};  // lower, upper, coherence bound
  std::optional<double> efficiency;
  bool degenerate = false;

  bool all_conditions_ok() const {
    return conditions_ok[0] && conditions_ok[1] && conditions_ok[2];
  }
};

enum class CycleMode { Definite, Incoherent, Coherent };

struct CycleReport {
  CycleMode mode = CycleMode::Definite;
  std::vector<BranchResult> branches;  // 1 (definite/incoherent) or 2 (coherent)
  double beta_eps = 0;
  double a_bar_inc = 0;      // effective strength of the unconditioned first stroke
  double lambda_weight = 1;  // causal-order weight (1 for definite)
  double avg_w_ext = 0, avg_q_hot = 0;
  double w_cost = 0;
  double eta = 0, eta_tilde = 0, delta_eta = 0, eta_cost = 0;
  double t_d_crit = 0;  // units eps/k_B
  bool conditions_violated = false;
};

// Branch energetics from the conditional state data. The cycle analysis runs
// the work-extracting isentropic branch; the investing branch is reachable for
// debugging only.
BranchResult make_branch(Outcome outcome, double probability, double a_bar, cplx coherence,
                         double beta_eps, bool investing = false);

CycleReport definite_cycle(MeasurementStrength a, double beta_eps);
CycleReport incoherent_cycle(MeasurementStrength a, MeasurementStrength a_prime,
                             const InitialStateSpec& spec);
std::pair<BranchResult, BranchResult> coherent_branches(MeasurementStrength a,
                                                        MeasurementStrength a_prime,
                                                        double phi_prime,
                                                        const InitialStateSpec& spec);
CycleReport coherent_cycle(MeasurementStrength a, MeasurementStrength a_prime, double phi_prime,
                           const InitialStateSpec& spec, double beta_d_inv);

struct WorkVectors {
  struct Vec {
    double diag = 0, off = 0;
  };
  Vec w_inc;  // (1 - 2 abar_inc, 0)
  Vec w_sco;  // (tr[Xi Z], 2|tr[Xi |1><0|]|)
  double beta_eps = 0;
};

WorkVectors work_vectors(MeasurementStrength a, MeasurementStrength a_prime, double phi_prime,
                         const InitialStateSpec& spec);
double delta_eta_from_vectors(const WorkVectors& v, double beta_eps);

}  // namespace sco
