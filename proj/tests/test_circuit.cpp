#include "doctest.h"

#include "sco/circuit.hpp"
#include "sco/rng.hpp"
#include "sco/sampling.hpp"
#include "sco/tomography.hpp"

#include <cmath>

using namespace sco;

namespace {

constexpr double kBetaExp = 1 / 1.65;

InitialStateSpec spec_of(Family f, double theta, double phi, double beta_eps, double zeta = 1,
                         double z0 = 1, double z1 = 0, double xi_frac = 0, double varphi = 0) {
  InitialStateSpec s;
  s.family = f;
  s.angles = {theta, phi};
  s.gibbs = {beta_eps};
  s.zeta = zeta;
  s.zeta0 = z0;
  s.zeta1 = z1;
  s.xi = xi_frac * s.xi_max();
  s.varphi = varphi;
  return s;
}

InitialStateSpec experimental(Family f) {
  return spec_of(f, M_PI / 2, M_PI / 4, kBetaExp, 1, 1, 0, f == Family::Entangled ? 1.0 : 0.0);
}

ComplexMatrix branch_matrix(const BranchResult& br) {
  ComplexMatrix m(2);
  m(0, 0) = br.a_bar;
  m(1, 1) = 1 - br.a_bar;
  m(0, 1) = br.coherence;
  m(1, 0) = std::conj(br.coherence);
  return m;
}

ComplexMatrix gate_unitary(const Gate& g, int width) {
  const int dim = 1 << width;
  ComplexMatrix u(dim);
  for (int col = 0; col < dim; ++col) {
    Statevector basis(dim, 0.0);
    basis[col] = 1.0;
    apply_gate(basis, g, width);
    for (int row = 0; row < dim; ++row) u(row, col) = basis[row];
  }
  return u;
}

}  // namespace

TEST_CASE("statevector basics") {
  Circuit empty;
  empty.width = 1;
  Statevector psi = statevector_run(empty);
  CHECK(psi[0] == cplx(1, 0));
  CHECK(psi[1] == cplx(0, 0));

  Circuit h;
  h.width = 1;
  h.append(Gate::hadamard(0));
  psi = statevector_run(h);
  CHECK(std::abs(psi[0] - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(psi[1] - 1 / std::sqrt(2.0)) < 1e-15);

  Circuit flip;
  flip.width = 1;
  flip.append(Gate::roty(M_PI, 0));
  psi = statevector_run(flip);
  CHECK(std::abs(psi[0]) < 1e-15);
  CHECK(std::abs(std::abs(psi[1]) - 1) < 1e-15);

  Circuit bad;
  bad.width = 2;
  bad.append(Gate::cnot(0, 3));
  CHECK_THROWS_AS(statevector_run(bad), IndexError);
  Circuit dup;
  dup.width = 2;
  dup.append(Gate::cnot(1, 1));
  CHECK_THROWS_AS(statevector_run(dup), IndexError);
}

TEST_CASE("gates are unitary") {
  const std::vector<Gate> gates = {
      Gate::roty(0.7, 1),         Gate::rotz(-1.3, 0),  Gate::hadamard(2),
      Gate::not_gate(1),          Gate::cnot(0, 2),     Gate::cswap(0, 2, 1),
      Gate::croty(2.1, 2, 0),
  };
  for (const Gate& g : gates) {
    const ComplexMatrix u = gate_unitary(g, 3);
    ComplexMatrix utu = u.adjoint() * u;
    utu -= ComplexMatrix::identity(8);
    CHECK(utu.max_abs() < 1e-12);
  }

  // norm preservation along a random circuit
  CounterRng rng(9);
  Circuit c;
  c.width = 4;
  for (int i = 0; i < 60; ++i) {
    const int t = static_cast<int>(rng.next_u64() % 4);
    const int u = (t + 1 + static_cast<int>(rng.next_u64() % 3)) % 4;
    switch (rng.next_u64() % 5) {
      case 0: c.append(Gate::roty(2 * M_PI * rng.next_double(), t)); break;
      case 1: c.append(Gate::rotz(2 * M_PI * rng.next_double(), t)); break;
      case 2: c.append(Gate::hadamard(t)); break;
      case 3: c.append(Gate::cnot(t, u)); break;
      default: c.append(Gate::croty(2 * M_PI * rng.next_double(), t, u)); break;
    }
  }
  const Statevector psi = statevector_run(c);
  double norm = 0;
  for (const cplx& v : psi) norm += std::norm(v);
  CHECK(norm == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("reduced density") {
  Circuit c;
  c.width = 2;
  c.append(Gate::hadamard(0));
  const Statevector prod = statevector_run(c);
  CHECK(max_abs_diff(reduced_density(prod, {1}).matrix(), ket_bra(0, 0)) < 1e-14);

  Circuit bell;
  bell.width = 2;
  bell.append(Gate::hadamard(0));
  bell.append(Gate::cnot(1, 0));
  const Statevector b = statevector_run(bell);
  ComplexMatrix half = ComplexMatrix::identity(2);
  half *= 0.5;
  CHECK(max_abs_diff(reduced_density(b, {0}).matrix(), half) < 1e-14);
  CHECK(max_abs_diff(reduced_density(b, {1}).matrix(), half) < 1e-14);
}

TEST_CASE("preparation circuits reproduce the state families") {
  // single-ancilla preparations leave room for two mixed meters; the
  // two-ancilla mixing preparations run with at most one mixed meter
  const std::vector<std::pair<InitialStateSpec, std::pair<double, double>>> cases = {
      {spec_of(Family::Uncorrelated, 1.1, 0.4, 0.9, 1.0), {0.3, 0.7}},
      {spec_of(Family::Uncorrelated, 2.0, 5.1, 1.4, 0.65), {1.0, 0.4}},
      {spec_of(Family::Uncorrelated, 0.0, 0.0, 1.0, 1.0), {0.3, 0.7}},
      {spec_of(Family::Uncorrelated, 0.0, 0.0, 1.0, 0.0), {0.3, 0.7}},
      {spec_of(Family::Separable, 1.3, 2.2, 0.7, 1, 1, 0), {0.3, 0.7}},
      {spec_of(Family::Separable, 0.6, 4.0, 2.2, 1, 0.85, 0.35), {0.6, 0.0}},
      {experimental(Family::Uncorrelated), {0.3, 0.7}},
      {experimental(Family::Separable), {0.3, 0.7}},
      {experimental(Family::Entangled), {0.3, 0.7}},
      {spec_of(Family::Entangled, 1.9, 0.8, 1.2, 1, 1, 0, 0.5, 2.1), {0.3, 0.7}},
      {spec_of(Family::Entangled, 0.4, 2.9, 0.3, 1, 1, 0, 0.0, 0.0), {0.3, 0.7}},
  };
  for (const auto& [s, strengths] : cases) {
    const Circuit c =
        prep_circuit(s, MeasurementStrength(strengths.first),
                     MeasurementStrength(strengths.second));
    const DensityOperator got = reduced_density(statevector_run(c), {1, 0});
    CHECK(trace_distance(got, initial_state(s)) < 1e-9);
  }
  const MeasurementStrength a(0.3), ap(0.7);

  // meters are prepared uncorrelated with the system, in the channel states
  const Circuit c = prep_circuit(experimental(Family::Separable), a, ap);
  const Statevector psi = statevector_run(c);
  CHECK(max_abs_diff(reduced_density(psi, {2}).matrix(), ComplexMatrix::diag({0.3, 0.7})) <
        1e-12);
  CHECK(max_abs_diff(reduced_density(psi, {3}).matrix(), ComplexMatrix::diag({0.7, 0.3})) <
        1e-12);

  // partial-correlation entangled preparation is out of circuit scope
  CHECK_THROWS_AS(prep_circuit(spec_of(Family::Entangled, 1, 0, 1, 1, 0.8, 0.1, 0.3), a, ap),
                  CircuitBudgetError);
}

TEST_CASE("generalized rotation angles") {
  // purely imaginary positive coherence: the arctan rule gives pi/2
  CHECK(generalized_rotation_angles(0.4, cplx(0, 0.1), StrokeBranch::Extract).alpha2 ==
        doctest::Approx(M_PI / 2));
  // real positive coherence: 0
  CHECK(generalized_rotation_angles(0.4, cplx(0.1, 0), StrokeBranch::Extract).alpha2 ==
        doctest::Approx(0));
  CHECK(generalized_rotation_angles(0.4, 0.0, StrokeBranch::Extract).alpha1 ==
        doctest::Approx(-M_PI));

  // alignment: the rotation diagonalizes the conditional state, ground-heavy
  // for extraction, excited-heavy for investment, and preserves entropy
  CounterRng rng(77);
  for (int i = 0; i < 300; ++i) {
    const double abar = 0.02 + 0.96 * rng.next_double();
    const double m = 0.49 * std::min(abar, 1 - abar);
    const double mag = m * rng.next_double();
    const double ph = 2 * M_PI * rng.next_double();
    const cplx coh = std::polar(mag, ph);
    ComplexMatrix rho(2);
    rho(0, 0) = abar;
    rho(1, 1) = 1 - abar;
    rho(0, 1) = coh;
    rho(1, 0) = std::conj(coh);
    const DensityOperator before(rho);
    for (StrokeBranch branch : {StrokeBranch::Extract, StrokeBranch::Invest}) {
      Statevector psi = {0, 0};  // embed via a width-1 circuit on the mixed state directly
      // apply the gate list to the density matrix through its unitary
      ComplexMatrix u = ComplexMatrix::identity(2);
      for (const Gate& g : work_stroke_gates(abar, coh, branch, 0)) {
        const ComplexMatrix gu = gate_unitary(g, 1);
        u = gu * u;
      }
      const DensityOperator after(u * rho * u.adjoint());
      CHECK(std::abs(after(0, 1)) < 1e-9);
      const double r = std::hypot(1 - 2 * abar, 2 * std::abs(coh));
      if (branch == StrokeBranch::Extract)
        CHECK(after(0, 0).real() == doctest::Approx(0.5 * (1 + r)).epsilon(1e-9));
      else
        CHECK(after(0, 0).real() == doctest::Approx(0.5 * (1 - r)).epsilon(1e-9));
      CHECK(std::abs(von_neumann_entropy(after) - von_neumann_entropy(before)) < 1e-8);
    }
  }

  // no coherence: NOT below 1/2, identity above; diagonal states stay diagonal
  CHECK(work_stroke_gates(0.3, 0.0, StrokeBranch::Extract, 1).size() == 1);
  CHECK(work_stroke_gates(0.7, 0.0, StrokeBranch::Extract, 1).empty());
  CHECK(work_stroke_gates(0.7, 0.0, StrokeBranch::Invest, 1).size() == 1);
}

TEST_CASE("engine circuit matches the channel pipeline exactly") {
  // incoherent experimental line: medium ends maximally mixed, no work
  for (double a : {0.0, 0.3, 0.5}) {
    const IncoherentCircuitRun run = run_incoherent_engine(
        experimental(Family::Separable), MeasurementStrength(a), MeasurementStrength(1 - a));
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= 0.5;
    CHECK(max_abs_diff(run.medium.matrix(), half) < 1e-12);
    CHECK(max_abs_diff(run.medium_after.matrix(), half) < 1e-12);
    CHECK(std::abs(run.work) < 1e-12);
  }

  // joint post-switch state equals the Kraus-path output
  for (Family f : {Family::Uncorrelated, Family::Separable, Family::Entangled}) {
    const InitialStateSpec s = experimental(f);
    const MeasurementStrength a(0.3), ap(0.7);
    const CoherentCircuitRun run = run_coherent_engine(s, a, ap, 0.0);
    CHECK(trace_distance(run.joint, apply_switch(a, ap, initial_state(s))) < 1e-9);

    auto [plus, minus] = coherent_branches(a, ap, 0.0, s);
    CHECK(run.plus.probability == doctest::Approx(plus.probability).epsilon(1e-10));
    CHECK(run.minus.probability == doctest::Approx(minus.probability).epsilon(1e-10));
    CHECK(trace_distance(run.plus.medium, DensityOperator(branch_matrix(plus))) < 1e-9);
    CHECK(trace_distance(run.minus.medium, DensityOperator(branch_matrix(minus))) < 1e-9);

    // circuit work stroke is isentropic and extracts the predicted work
    for (const auto* cb : {&run.plus, &run.minus}) {
      CHECK(std::abs(cb->entropy_after - cb->entropy_before) < 1e-8);
    }
    CHECK(run.plus.work == doctest::Approx(plus.w_ext).epsilon(1e-9));
    CHECK(run.minus.work == doctest::Approx(minus.w_ext).epsilon(1e-9));
  }

  // equivalence grid with strengths >= 1/2 and assorted angles
  for (Family f : {Family::Uncorrelated, Family::Separable, Family::Entangled}) {
    for (double a : {0.5, 0.75, 1.0}) {
      for (double ap : {0.5, 0.9}) {
        for (double theta : {0.0, M_PI / 3, M_PI / 2}) {
          const InitialStateSpec s =
              spec_of(f, theta, M_PI / 4, 1.0, 1, 1, 0, f == Family::Entangled ? 0.7 : 0.0);
          const double phi_prime = 0.3;
          const CoherentCircuitRun run =
              run_coherent_engine(s, MeasurementStrength(a), MeasurementStrength(ap), phi_prime);
          auto [plus, minus] =
              coherent_branches(MeasurementStrength(a), MeasurementStrength(ap), phi_prime, s);
          for (const BranchResult* br : {&plus, &minus}) {
            if (br->degenerate) continue;
            const CircuitBranch& cb = br->outcome == Outcome::Plus ? run.plus : run.minus;
            CHECK(cb.probability == doctest::Approx(br->probability).epsilon(1e-9));
            CHECK(trace_distance(cb.medium, DensityOperator(branch_matrix(*br))) < 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("literal preparation mode") {
  // the fixed-angle recipe: theta_y1 = arccos(sqrt(tanh(beta eps)))
  const InitialStateSpec s = experimental(Family::Uncorrelated);
  const Circuit c = prep_circuit(s, MeasurementStrength(0.75), MeasurementStrength(0.75),
                                 PrepMode::Literal);
  REQUIRE(c.gates[0].kind == GateKind::RotY);
  CHECK(c.gates[0].angle ==
        doctest::Approx(std::acos(std::sqrt(std::tanh(1 / 1.65)))).epsilon(1e-14));
  CHECK(c.gates[0].angle == doctest::Approx(0.7447).epsilon(1e-3));

  // angle domain: meters below 1/2 are imaginary in literal mode
  CHECK_THROWS_AS(prep_circuit(s, MeasurementStrength(0.3), MeasurementStrength(0.7),
                               PrepMode::Literal),
                  AngleDomainError);
  InitialStateSpec tilted = s;
  tilted.angles.theta = 1.0;
  CHECK_THROWS_AS(prep_circuit(tilted, MeasurementStrength(0.75), MeasurementStrength(0.75),
                               PrepMode::Literal),
                  AngleDomainError);

  // the literal recipe runs but does not reproduce the exact channel; the
  // deviation is surfaced, not hidden
  const CoherentCircuitRun lit = run_coherent_engine(experimental(Family::Uncorrelated),
                                                     MeasurementStrength(0.75),
                                                     MeasurementStrength(0.75), 0.0,
                                                     PrepMode::Literal);
  const CoherentCircuitRun dil = run_coherent_engine(experimental(Family::Uncorrelated),
                                                     MeasurementStrength(0.75),
                                                     MeasurementStrength(0.75), 0.0);
  CHECK(lit.plus.probability + lit.minus.probability == doctest::Approx(1).epsilon(1e-12));
  CHECK(trace_distance(lit.joint, dil.joint) > 1e-3);
}

TEST_CASE("auxiliary qubit budget") {
  // general-zeta uncorrelated family: two prep ancillae plus two meter
  // dephasers exceed the budget only when both meters are mixed
  const InitialStateSpec s = spec_of(Family::Uncorrelated, 1.0, 0.5, 1.0, 0.5);
  CHECK_NOTHROW(prep_circuit(s, MeasurementStrength(1.0), MeasurementStrength(0.4)));
  CHECK_THROWS_AS(prep_circuit(s, MeasurementStrength(0.6), MeasurementStrength(0.4)),
                  CircuitBudgetError);
}

TEST_CASE("circuit serialization") {
  const Circuit c = engine_circuit(SwitchRunMode::Coherent, experimental(Family::Entangled),
                                   MeasurementStrength(0.3), MeasurementStrength(0.7), 0.4);
  const Circuit back = Circuit::from_text(c.to_text());
  REQUIRE(back.width == c.width);
  REQUIRE(back.gates.size() == c.gates.size());
  const Statevector a = statevector_run(c), b = statevector_run(back);
  for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) == 0);

  CHECK_THROWS_AS(Circuit::from_text("QUBITS 2\nFOO 0\n"), DomainError);
  CHECK_THROWS_AS(Circuit::from_text("QUBITS 2\nROTY 0\n"), IndexError);  // angle ate the target
  CHECK_THROWS_AS(Circuit::from_text("QUBITS 2\nCNOT 0 | 5\n"), IndexError);
}

TEST_CASE("binomial sampler statistics") {
  CounterRng rng(123);
  // large-n rejection regime
  {
    const long n = 80000;
    const double p = 0.3;
    const int draws = 2000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < draws; ++i) {
      const double k = static_cast<double>(binomial_draw(rng, n, p));
      sum += k;
      sum2 += k * k;
    }
    const double mean = sum / draws;
    const double var = sum2 / draws - mean * mean;
    const double expect_mean = n * p, expect_var = n * p * (1 - p);
    CHECK(std::abs(mean - expect_mean) < 5 * std::sqrt(expect_var / draws));
    CHECK(var > 0.8 * expect_var);
    CHECK(var < 1.2 * expect_var);
  }
  // small-n and inversion regimes, plus edge probabilities
  CHECK(binomial_draw(rng, 100, 0.0) == 0);
  CHECK(binomial_draw(rng, 100, 1.0) == 100);
  {
    const long n = 5000;
    const double p = 0.0005;  // n p << 10: cumulative inversion
    const int draws = 4000;
    double sum = 0;
    for (int i = 0; i < draws; ++i) sum += static_cast<double>(binomial_draw(rng, n, p));
    CHECK(std::abs(sum / draws - n * p) < 5 * std::sqrt(n * p / draws));
  }
  // multinomial counts always sum to n
  std::vector<long> out;
  const std::vector<double> probs = {0.1, 0.2, 0.3, 0.4};
  for (int i = 0; i < 100; ++i) {
    multinomial_draw(rng, probs, 777, out);
    long total = 0;
    for (long v : out) {
      CHECK(v >= 0);
      total += v;
    }
    CHECK(total == 777);
  }
}

TEST_CASE("shot tomography") {
  // near-infinite shots on a pure |0> circuit
  Circuit c;
  c.width = 1;
  const TomographyEstimate big = sample_and_tomograph(c, 10000000, 1, 42, {0});
  CHECK(max_abs_diff(big.rho_hat.matrix(), ket_bra(0, 0)) < 1e-3);

  // determinism: identical seeds give bit-identical output
  const Circuit ec = engine_circuit(SwitchRunMode::Incoherent, experimental(Family::Separable),
                                    MeasurementStrength(0.3), MeasurementStrength(0.7), 0.0);
  const TomographyEstimate t1 = sample_and_tomograph(ec, 500, 2, 7, {1, 0});
  const TomographyEstimate t2 = sample_and_tomograph(ec, 500, 2, 7, {1, 0});
  CHECK(max_abs_diff(t1.rho_hat.matrix(), t2.rho_hat.matrix()) == 0);
  for (size_t i = 0; i < t1.std_errors.size(); ++i)
    CHECK(t1.std_errors[i] == t2.std_errors[i]);
  const TomographyEstimate t3 = sample_and_tomograph(ec, 500, 2, 8, {1, 0});
  CHECK(max_abs_diff(t1.rho_hat.matrix(), t3.rho_hat.matrix()) > 0);

  // a single 8000 x 10 run lands within 5 sigma of the exact state
  const DensityOperator exact = tomography_exact(ec, {1, 0});
  const TomographyEstimate est = sample_and_tomograph(ec, 8000, 10, 3, {1, 0});
  int within = 0, total = 0;
  for (int r = 0; r < 4; ++r)
    for (int col = 0; col < 4; ++col) {
      const double err = std::abs(est.rho_hat(r, col) - exact(r, col));
      const double sigma = est.std_errors[static_cast<size_t>(r * 4 + col)];
      ++total;
      if (err <= 5 * sigma + 1e-12) ++within;
    }
  CHECK(within == total);

  CHECK_THROWS_AS(sample_and_tomograph(c, 0, 1, 1, {0}), DomainError);
}
