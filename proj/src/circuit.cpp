#include "sco/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sco {

namespace {

constexpr int kWidth = 7;
constexpr int kControlQubit = 0;
constexpr int kMediumQubit = 1;
constexpr int kMeterA = 2;
constexpr int kMeterAPrime = 3;
constexpr double kPureTol = 1e-15;
constexpr double kCohTol = 1e-12;

void check_qubits(const Gate& g, int width) {
  const size_t want_targets = (g.kind == GateKind::CSwap) ? 2 : 1;
  const size_t want_controls =
      (g.kind == GateKind::CNot || g.kind == GateKind::CSwap ||
       g.kind == GateKind::ControlledRotY)
          ? 1
          : 0;
  if (g.targets.size() != want_targets || g.controls.size() != want_controls)
    throw IndexError("gate has the wrong number of qubits");
  std::vector<int> all = g.targets;
  all.insert(all.end(), g.controls.begin(), g.controls.end());
  for (int q : all)
    if (q < 0 || q >= width) throw IndexError("gate qubit out of range");
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw IndexError("gate qubits not distinct");
}

void apply_1q(Statevector& psi, int width, int q, const cplx u[2][2], uint64_t ctrl_mask) {
  const uint64_t n = uint64_t(1) << width;
  const uint64_t bit = uint64_t(1) << q;
  for (uint64_t x = 0; x < n; ++x) {
    if (x & bit) continue;
    if ((x & ctrl_mask) != ctrl_mask) continue;
    const cplx a0 = psi[x], a1 = psi[x | bit];
    psi[x] = u[0][0] * a0 + u[0][1] * a1;
    psi[x | bit] = u[1][0] * a0 + u[1][1] * a1;
  }
}

uint64_t mask_of(const std::vector<int>& qs) {
  uint64_t m = 0;
  for (int q : qs) m |= uint64_t(1) << q;
  return m;
}

}  // namespace

void Circuit::append_swap(int a, int b) {
  append(Gate::cnot(b, a));
  append(Gate::cnot(a, b));
  append(Gate::cnot(b, a));
}

void apply_gate(Statevector& psi, const Gate& g, int width) {
  check_qubits(g, width);
  const uint64_t cm = mask_of(g.controls);
  switch (g.kind) {
    case GateKind::RotY: {
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      const cplx u[2][2] = {{c, -s}, {s, c}};
      apply_1q(psi, width, g.targets[0], u, cm);
      break;
    }
    case GateKind::RotZ: {
      const cplx e0 = std::polar(1.0, -g.angle / 2), e1 = std::polar(1.0, g.angle / 2);
      const cplx u[2][2] = {{e0, 0}, {0, e1}};
      apply_1q(psi, width, g.targets[0], u, cm);
      break;
    }
    case GateKind::Hadamard: {
      const double r = 1 / std::sqrt(2.0);
      const cplx u[2][2] = {{r, r}, {r, -r}};
      apply_1q(psi, width, g.targets[0], u, cm);
      break;
    }
    case GateKind::NotGate: {
      const cplx u[2][2] = {{0, 1}, {1, 0}};
      apply_1q(psi, width, g.targets[0], u, cm);
      break;
    }
    case GateKind::CNot: {
      const cplx u[2][2] = {{0, 1}, {1, 0}};
      apply_1q(psi, width, g.targets[0], u, cm);
      break;
    }
    case GateKind::ControlledRotY: {
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      const cplx u[2][2] = {{c, -s}, {s, c}};
      apply_1q(psi, width, g.targets[0], u, cm);
      break;
    }
    case GateKind::CSwap: {
      const uint64_t b1 = uint64_t(1) << g.targets[0];
      const uint64_t b2 = uint64_t(1) << g.targets[1];
      const uint64_t n = uint64_t(1) << width;
      for (uint64_t x = 0; x < n; ++x) {
        if ((x & cm) != cm) continue;
        if ((x & b1) && !(x & b2)) std::swap(psi[x], psi[(x ^ b1) | b2]);
      }
      break;
    }
  }
}

Statevector statevector_run(const Circuit& c) {
  if (c.width < 1 || c.width > 7) throw IndexError("circuit width must be in [1, 7]");
  Statevector psi(uint64_t(1) << c.width, 0.0);
  psi[0] = 1.0;
  for (const Gate& g : c.gates) apply_gate(psi, g, c.width);
  return psi;
}

DensityOperator reduced_density(const Statevector& psi, const std::vector<int>& keep) {
  int width = 0;
  while ((uint64_t(1) << width) < psi.size()) ++width;
  if (psi.size() != (uint64_t(1) << width)) throw IndexError("statevector size not a power of 2");
  for (int q : keep)
    if (q < 0 || q >= width) throw IndexError("reduced_density: qubit out of range");

  const int k = static_cast<int>(keep.size());
  const int d = 1 << k;
  ComplexMatrix out(d);
  const uint64_t n = psi.size();
  std::vector<int> row_of(n);
  for (uint64_t x = 0; x < n; ++x) {
    int row = 0;
    for (int m = 0; m < k; ++m)
      if (x & (uint64_t(1) << keep[m])) row |= 1 << (k - 1 - m);
    row_of[x] = row;
  }
  const uint64_t keep_mask = mask_of(keep);
  for (uint64_t x = 0; x < n; ++x) {
    if (std::norm(psi[x]) == 0) continue;
    const uint64_t env = x & ~keep_mask;
    // pair x with every y sharing its environment bits
    for (uint64_t yk = 0;; yk = ((yk | ~keep_mask) + 1) & keep_mask) {
      const uint64_t y = env | yk;
      out(row_of[x], row_of[y]) += psi[x] * std::conj(psi[y]);
      if (yk == keep_mask) break;
    }
  }
  return DensityOperator(out);
}

RotationAngles generalized_rotation_angles(double a_bar, cplx coherence, StrokeBranch branch) {
  RotationAngles ang;
  ang.alpha1 = -M_PI;
  const double x = 1 - 2 * a_bar;
  const double r = std::hypot(x, 2 * std::abs(coherence));
  ang.alpha2 = (std::abs(coherence) < kCohTol)
                   ? 0.0
                   : std::atan2(coherence.imag(), coherence.real());
  double zt = (r > kPureTol) ? x / r : -1.0;
  zt = std::clamp(zt, -1.0, 1.0);
  if (branch == StrokeBranch::Extract)
    ang.alpha3 = std::acos(std::sqrt(0.5 * (1 - zt)));
  else
    ang.alpha3 = std::acos(-std::sqrt(0.5 * (1 + zt)));
  return ang;
}

std::vector<Gate> work_stroke_gates(double a_bar, cplx coherence, StrokeBranch branch,
                                    int qubit) {
  if (std::abs(coherence) < kCohTol) {
    const bool flip =
        (branch == StrokeBranch::Extract) ? (a_bar < 0.5) : (a_bar > 0.5);
    if (flip) return {Gate::not_gate(qubit)};
    return {};
  }
  const RotationAngles ang = generalized_rotation_angles(a_bar, coherence, branch);
  return {Gate::rotz(ang.alpha2, qubit), Gate::roty(-ang.alpha3, qubit),
          Gate::rotz(ang.alpha1, qubit), Gate::roty(ang.alpha3, qubit),
          Gate::rotz(-ang.alpha2, qubit)};
}

namespace {

struct AuxAllocator {
  std::vector<int> free_aux{4, 5, 6};

  int take(const char* what) {
    if (free_aux.empty())
      throw CircuitBudgetError(std::string("out of auxiliary qubits for ") + what);
    const int q = free_aux.front();
    free_aux.erase(free_aux.begin());
    return q;
  }
};

double mix_angle(double weight0) {  // RotY angle putting weight0 on |0>
  weight0 = std::clamp(weight0, 0.0, 1.0);
  return 2 * std::atan2(std::sqrt(1 - weight0), std::sqrt(weight0));
}

void control_basis_gates(Circuit& c, double theta, double phi) {
  if (theta != 0) c.append(Gate::roty(theta, kControlQubit));
  if (phi != 0) c.append(Gate::rotz(phi, kControlQubit));
}

// Medium in the Gibbs state via a purifying ancilla.
void gibbs_prep(Circuit& c, AuxAllocator& aux, double beta_eps) {
  const double g0 = (1 + std::tanh(beta_eps)) / 2;
  const int q = aux.take("gibbs purification");
  c.append(Gate::roty(mix_angle(g0), q));
  c.append(Gate::cnot(kMediumQubit, q));
}

void prep_dilation(Circuit& c, AuxAllocator& aux, const InitialStateSpec& spec) {
  const double theta = spec.angles.theta, phi = spec.angles.phi;
  switch (spec.family) {
    case Family::Uncorrelated: {
      gibbs_prep(c, aux, spec.gibbs.beta_eps);
      if (spec.zeta <= kPureTol) {
        c.append(Gate::not_gate(kControlQubit));
      } else if (spec.zeta < 1 - kPureTol) {
        const int q = aux.take("control mixing");
        c.append(Gate::roty(mix_angle(spec.zeta), q));
        c.append(Gate::cnot(kControlQubit, q));
      }
      control_basis_gates(c, theta, phi);
      break;
    }
    case Family::Separable: {
      gibbs_prep(c, aux, spec.gibbs.beta_eps);
      const bool perfect = spec.zeta0 > 1 - kPureTol && spec.zeta1 < kPureTol;
      if (perfect) {
        c.append(Gate::cnot(kControlQubit, kMediumQubit));
      } else {
        const int q = aux.take("control mixing");
        const double k0 = mix_angle(spec.zeta0), k1 = mix_angle(spec.zeta1);
        if (k0 != 0) c.append(Gate::roty(k0, q));
        if (k1 != k0) c.append(Gate::croty(k1 - k0, q, kMediumQubit));
        c.append(Gate::cnot(kControlQubit, q));
      }
      control_basis_gates(c, theta, phi);
      break;
    }
    case Family::Entangled: {
      if (!(spec.zeta0 > 1 - kPureTol && spec.zeta1 < kPureTol))
        throw CircuitBudgetError(
            "entangled circuit preparation supports perfect correlations only "
            "(zeta0 = 1, zeta1 = 0)");
      const double t = std::tanh(spec.gibbs.beta_eps);
      const double g0 = (1 + t) / 2, g1 = (1 - t) / 2;
      // Eigendecompose [[g0, xi],[xi, g1]]; the varphi phase factors out.
      const double chi = 0.5 * std::atan2(2 * spec.xi, g0 - g1);
      const double mean = 0.5, dev = std::hypot(0.5 * (g0 - g1), spec.xi);
      const double p_minor = mean - dev;
      if (p_minor > kPureTol) {
        const int q = aux.take("entangled block mixing");
        c.append(Gate::roty(mix_angle(mean + dev), q));
        c.append(Gate::roty(2 * chi, kMediumQubit));
        c.append(Gate::croty(M_PI, kMediumQubit, q));
      } else if (chi != 0) {
        c.append(Gate::roty(2 * chi, kMediumQubit));
      }
      c.append(Gate::rotz(spec.varphi + M_PI, kMediumQubit));
      c.append(Gate::cnot(kControlQubit, kMediumQubit));
      control_basis_gates(c, theta, phi);
      break;
    }
  }
}

void prep_literal(Circuit& c, AuxAllocator& aux, const InitialStateSpec& spec) {
  if (std::abs(spec.angles.theta - M_PI / 2) > 1e-12)
    throw AngleDomainError("literal preparation is defined for theta = pi/2 only");
  const double t = std::tanh(spec.gibbs.beta_eps);
  const double theta_y1 = std::acos(std::sqrt(t));
  const double theta_y4 = M_PI / 2;
  const double theta_z1 = spec.angles.phi / 4;
  switch (spec.family) {
    case Family::Uncorrelated: {
      if (spec.zeta < 1 - kPureTol)
        throw AngleDomainError("literal preparation takes a pure control (zeta = 1)");
      const int q = aux.take("gibbs purification");
      c.append(Gate::roty(theta_y1, q));
      c.append(Gate::cnot(kMediumQubit, q));
      c.append(Gate::roty(theta_y4, kControlQubit));
      c.append(Gate::rotz(theta_z1, kControlQubit));
      break;
    }
    case Family::Separable: {
      const int q = aux.take("gibbs purification");
      c.append(Gate::roty(theta_y1, q));
      c.append(Gate::cnot(kMediumQubit, q));
      c.append(Gate::roty(theta_y4, kControlQubit));
      c.append(Gate::rotz(theta_z1, kControlQubit));
      c.append(Gate::croty(-M_PI, kControlQubit, kMediumQubit));
      break;
    }
    case Family::Entangled:
      c.append(Gate::roty(theta_y1, kMediumQubit));
      c.append(Gate::roty(theta_y4, kControlQubit));
      c.append(Gate::rotz(theta_z1, kControlQubit));
      c.append(Gate::croty(-M_PI, kControlQubit, kMediumQubit));
      break;
  }
}

void meter_prep(Circuit& c, AuxAllocator& aux, int meter, double strength, PrepMode mode) {
  double angle;
  if (mode == PrepMode::Dilation) {
    angle = mix_angle(strength);
  } else {
    if (strength < 0.5) throw AngleDomainError("literal meter angle imaginary for a < 1/2");
    angle = std::acos(std::sqrt(2 * strength - 1));
  }
  if (angle != 0) c.append(Gate::roty(angle, meter));
  // A basis-state meter needs no dephasing partner.
  const bool mixed = std::abs(angle) > kPureTol && std::abs(angle - M_PI) > kPureTol;
  if (mixed) c.append(Gate::cnot(aux.take("meter dephasing"), meter));
}

}  // namespace

Circuit prep_circuit(const InitialStateSpec& spec, MeasurementStrength a,
                     MeasurementStrength a_prime, PrepMode mode) {
  spec.validate();
  Circuit c;
  c.width = kWidth;
  AuxAllocator aux;
  if (mode == PrepMode::Dilation)
    prep_dilation(c, aux, spec);
  else
    prep_literal(c, aux, spec);
  meter_prep(c, aux, kMeterA, a.value, mode);
  meter_prep(c, aux, kMeterAPrime, a_prime.value, mode);
  return c;
}

Circuit engine_circuit(SwitchRunMode mode, const InitialStateSpec& spec, MeasurementStrength a,
                       MeasurementStrength a_prime, double phi_prime, PrepMode prep) {
  Circuit c = prep_circuit(spec, a, a_prime, prep);
  c.append(Gate::cswap(kMeterA, kMeterAPrime, kControlQubit));
  c.append_swap(kMediumQubit, kMeterA);
  c.append_swap(kMediumQubit, kMeterAPrime);
  c.append(Gate::cswap(kMeterA, kMeterAPrime, kControlQubit));
  if (mode == SwitchRunMode::Coherent) {
    if (phi_prime != 0) c.append(Gate::rotz(-phi_prime, kControlQubit));
    c.append(Gate::hadamard(kControlQubit));
  }
  return c;
}

namespace {

// probability of control bit == value, and the normalized projected state
std::pair<double, Statevector> project_control(const Statevector& psi, int value) {
  const uint64_t bit = uint64_t(1) << kControlQubit;
  double p = 0;
  for (uint64_t x = 0; x < psi.size(); ++x)
    if (((x & bit) != 0) == (value != 0)) p += std::norm(psi[x]);
  Statevector out(psi.size(), 0.0);
  if (p > 0) {
    const double r = 1 / std::sqrt(p);
    for (uint64_t x = 0; x < psi.size(); ++x)
      if (((x & bit) != 0) == (value != 0)) out[x] = psi[x] * r;
  }
  return {p, out};
}

CircuitBranch analyze_branch(double p, const Statevector& proj) {
  CircuitBranch br{p, reduced_density(proj, {kMediumQubit}),
                   reduced_density(proj, {kMediumQubit}), 0, 0, 0};
  const double abar = br.medium(0, 0).real();
  const cplx coh = br.medium(0, 1);
  Statevector after = proj;
  for (const Gate& g : work_stroke_gates(abar, coh, StrokeBranch::Extract, kMediumQubit))
    apply_gate(after, g, kWidth);
  br.medium_after = reduced_density(after, {kMediumQubit});
  br.entropy_before = von_neumann_entropy(br.medium);
  br.entropy_after = von_neumann_entropy(br.medium_after);
  ComplexMatrix h = pauli_z();
  h *= -1.0;  // H = -eps Z with eps = 1
  br.work = expectation(h, br.medium) - expectation(h, br.medium_after);
  return br;
}

}  // namespace

CoherentCircuitRun run_coherent_engine(const InitialStateSpec& spec, MeasurementStrength a,
                                       MeasurementStrength a_prime, double phi_prime,
                                       PrepMode prep) {
  Circuit pre = engine_circuit(SwitchRunMode::Incoherent, spec, a, a_prime, phi_prime, prep);
  Statevector psi = statevector_run(pre);
  DensityOperator joint = reduced_density(psi, {kMediumQubit, kControlQubit});
  if (phi_prime != 0) apply_gate(psi, Gate::rotz(-phi_prime, kControlQubit), kWidth);
  apply_gate(psi, Gate::hadamard(kControlQubit), kWidth);
  auto [pp, proj_p] = project_control(psi, 0);  // H maps |+> to |0>
  auto [pm, proj_m] = project_control(psi, 1);
  return {std::move(joint), analyze_branch(pp, proj_p), analyze_branch(pm, proj_m)};
}

IncoherentCircuitRun run_incoherent_engine(const InitialStateSpec& spec, MeasurementStrength a,
                                           MeasurementStrength a_prime, PrepMode prep) {
  const Circuit c = engine_circuit(SwitchRunMode::Incoherent, spec, a, a_prime, 0.0, prep);
  const Statevector psi = statevector_run(c);
  IncoherentCircuitRun run{reduced_density(psi, {kMediumQubit, kControlQubit}),
                           reduced_density(psi, {kMediumQubit}),
                           reduced_density(psi, {kMediumQubit}), 0};
  const double abar = run.medium(0, 0).real();
  Statevector after = psi;
  for (const Gate& g : work_stroke_gates(abar, 0.0, StrokeBranch::Extract, kMediumQubit))
    apply_gate(after, g, kWidth);
  run.medium_after = reduced_density(after, {kMediumQubit});
  ComplexMatrix h = pauli_z();
  h *= -1.0;
  run.work = expectation(h, run.medium) - expectation(h, run.medium_after);
  return run;
}

// --- serialization -------------------------------------------------------

namespace {

const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::RotY: return "ROTY";
    case GateKind::RotZ: return "ROTZ";
    case GateKind::Hadamard: return "H";
    case GateKind::NotGate: return "NOT";
    case GateKind::CNot: return "CNOT";
    case GateKind::CSwap: return "CSWAP";
    case GateKind::ControlledRotY: return "CROTY";
  }
  return "?";
}

bool kind_has_angle(GateKind k) {
  return k == GateKind::RotY || k == GateKind::RotZ || k == GateKind::ControlledRotY;
}

GateKind kind_from_name(const std::string& s) {
  if (s == "ROTY") return GateKind::RotY;
  if (s == "ROTZ") return GateKind::RotZ;
  if (s == "H") return GateKind::Hadamard;
  if (s == "NOT") return GateKind::NotGate;
  if (s == "CNOT") return GateKind::CNot;
  if (s == "CSWAP") return GateKind::CSwap;
  if (s == "CROTY") return GateKind::ControlledRotY;
  throw DomainError("unknown gate kind: " + s);
}

}  // namespace

std::string Circuit::to_text() const {
  std::string out = "QUBITS " + std::to_string(width) + "\n";
  char buf[64];
  for (const Gate& g : gates) {
    out += kind_name(g.kind);
    if (kind_has_angle(g.kind)) {
      std::snprintf(buf, sizeof buf, " %.17g", g.angle);
      out += buf;
    }
    for (int t : g.targets) out += " " + std::to_string(t);
    if (!g.controls.empty()) {
      out += " |";
      for (int q : g.controls) out += " " + std::to_string(q);
    }
    out += "\n";
  }
  return out;
}

Circuit Circuit::from_text(const std::string& text) {
  Circuit c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "QUBITS") {
      if (!(ls >> c.width)) throw DomainError("line " + std::to_string(lineno) + ": bad QUBITS");
      continue;
    }
    Gate g;
    g.kind = kind_from_name(head);
    if (kind_has_angle(g.kind) && !(ls >> g.angle))
      throw DomainError("line " + std::to_string(lineno) + ": missing angle");
    std::string tok;
    bool in_controls = false;
    while (ls >> tok) {
      if (tok == "|") {
        in_controls = true;
        continue;
      }
      (in_controls ? g.controls : g.targets).push_back(std::stoi(tok));
    }
    check_qubits(g, c.width);
    c.gates.push_back(std::move(g));
  }
  return c;
}

}  // namespace sco
