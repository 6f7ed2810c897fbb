#pragma once

#include "sco/engine.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sco {

struct IndexError : Error {
  using Error::Error;
};
struct AngleDomainError : Error {
  using Error::Error;
};
struct CircuitBudgetError : Error {
  using Error::Error;
};

enum class GateKind { RotY, RotZ, Hadamard, NotGate, CNot, CSwap, ControlledRotY };

struct Gate {
  GateKind kind = GateKind::NotGate;
  double angle = 0;  // radians, rotation gates only
  std::vector<int> targets;
  std::vector<int> controls;

  static Gate roty(double angle, int t) { return {GateKind::RotY, angle, {t}, {}}; }
  static Gate rotz(double angle, int t) { return {GateKind::RotZ, angle, {t}, {}}; }
  static Gate hadamard(int t) { return {GateKind::Hadamard, 0, {t}, {}}; }
  static Gate not_gate(int t) { return {GateKind::NotGate, 0, {t}, {}}; }
  static Gate cnot(int t, int c) { return {GateKind::CNot, 0, {t}, {c}}; }
  static Gate cswap(int t1, int t2, int c) { return {GateKind::CSwap, 0, {t1, t2}, {c}}; }
  static Gate croty(double angle, int t, int c) {
    return {GateKind::ControlledRotY, angle, {t}, {c}};
  }
};

struct Circuit {
  int width = 0;
  std::vector<Gate> gates;

  void append(Gate g) { gates.push_back(std::move(g)); }
  void append_swap(int a, int b);  // 3 CNots

  std::string to_text() const;
  static Circuit from_text(const std::string& text);
};

using Statevector = std::vector<cplx>;

Statevector statevector_run(const Circuit& c);
void apply_gate(Statevector& psi, const Gate& g, int width);

/// Partial trace onto the listed qubits; keep[0] becomes the most significant
/// bit of the reduced index (so keep = {1, 0} orders the output as Q (x) C).
DensityOperator reduced_density(const Statevector& psi, const std::vector<int>& keep);

enum class PrepMode { Dilation, Literal };

// Qubit layout (fixed width 7): q0 control, q1 medium, q2/q3 meters for the
// two measurement channels, q4-q6 auxiliary (state purification + meter
// dephasing). Dilation mode realizes the channels exactly for all strengths;
// Literal mode uses the fixed arccos-of-square-root angle recipe, real-valued
// only for a, a' >= 1/2 and theta = pi/2.
Circuit prep_circuit(const InitialStateSpec& spec, MeasurementStrength a,
                     MeasurementStrength a_prime, PrepMode mode = PrepMode::Dilation);

enum class SwitchRunMode { Incoherent, Coherent };

Circuit engine_circuit(SwitchRunMode mode, const InitialStateSpec& spec, MeasurementStrength a,
                       MeasurementStrength a_prime, double phi_prime,
                       PrepMode prep = PrepMode::Dilation);

struct RotationAngles {
  double alpha1 = 0, alpha2 = 0, alpha3 = 0;
};
enum class StrokeBranch { Extract, Invest };

RotationAngles generalized_rotation_angles(double a_bar, cplx coherence, StrokeBranch branch);
std::vector<Gate> work_stroke_gates(double a_bar, cplx coherence, StrokeBranch branch, int qubit);

// Exact-path analysis of the engine circuits.
struct CircuitBranch {
  double probability = 0;
  DensityOperator medium;        // conditional post-switch state of the medium
  DensityOperator medium_after;  // after the work stroke
  double entropy_before = 0, entropy_after = 0;
  double work = 0;  // units eps
};

struct CoherentCircuitRun {
  DensityOperator joint;  // (Q, C) after the switch, before the control readout
  CircuitBranch plus, minus;
};
CoherentCircuitRun run_coherent_engine(const InitialStateSpec& spec, MeasurementStrength a,
                                       MeasurementStrength a_prime, double phi_prime,
                                       PrepMode prep = PrepMode::Dilation);

struct IncoherentCircuitRun {
  DensityOperator joint;
  DensityOperator medium;
  DensityOperator medium_after;
  double work = 0;
};
IncoherentCircuitRun run_incoherent_engine(const InitialStateSpec& spec, MeasurementStrength a,
                                           MeasurementStrength a_prime,
                                           PrepMode prep = PrepMode::Dilation);

}  // namespace sco
