#include "doctest.h"

#include "sco/channels.hpp"
#include "sco/rng.hpp"
#include "sco/states.hpp"

#include <cmath>

using namespace sco;

namespace {

DensityOperator random_density(CounterRng& rng, int dim) {
  ComplexMatrix g(dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      g(r, c) = cplx(2 * rng.next_double() - 1, 2 * rng.next_double() - 1);
  ComplexMatrix m = g * g.adjoint();
  m *= 1.0 / m.trace().real();
  return DensityOperator(m);
}

DensityOperator plus_state() {
  ComplexMatrix m(2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = 0.5;
  return DensityOperator(m);
}

}  // namespace

TEST_CASE("measurement kraus set") {
  const KrausSet full = measurement_kraus(MeasurementStrength(1));
  CHECK(max_abs_diff(full.operators[0], ket_bra(0, 0)) < 1e-15);
  CHECK(max_abs_diff(full.operators[1], ket_bra(0, 1)) < 1e-15);
  CHECK(full.operators[2].max_abs() == 0);
  CHECK(full.operators[3].max_abs() == 0);

  const KrausSet none = measurement_kraus(MeasurementStrength(0));
  CHECK(none.operators[0].max_abs() == 0);
  CHECK(none.operators[1].max_abs() == 0);
  CHECK(max_abs_diff(none.operators[2], ket_bra(1, 0)) < 1e-15);
  CHECK(max_abs_diff(none.operators[3], ket_bra(1, 1)) < 1e-15);

  const KrausSet mid = measurement_kraus(MeasurementStrength(0.3));
  CHECK(mid.operators[0].max_abs() == doctest::Approx(std::sqrt(0.3)));
  CHECK(mid.operators[1].max_abs() == doctest::Approx(std::sqrt(0.3)));
  CHECK(mid.operators[2].max_abs() == doctest::Approx(std::sqrt(0.7)));
  CHECK(mid.operators[3].max_abs() == doctest::Approx(std::sqrt(0.7)));
  CHECK(mid.completeness_residual() < 1e-15);

  CHECK_THROWS_AS(MeasurementStrength(1.2), DomainError);
}

TEST_CASE("channel output is input independent") {
  CHECK(max_abs_diff(apply_channel(MeasurementStrength(0.3), plus_state()).matrix(),
                     ComplexMatrix::diag({0.3, 0.7})) < 1e-15);
  CHECK(max_abs_diff(apply_channel(MeasurementStrength(1), plus_state()).matrix(),
                     ket_bra(0, 0)) < 1e-15);
  ComplexMatrix half = ComplexMatrix::identity(2);
  half *= 0.5;
  CHECK(max_abs_diff(apply_channel(MeasurementStrength(0.5), gibbs_state({10})).matrix(), half) <
        1e-15);

  // brute-force Kraus application agrees with the fixed output for random inputs
  CounterRng rng(21);
  for (int i = 0; i < 200; ++i) {
    const double lam = rng.next_double();
    const DensityOperator rho = random_density(rng, 2);
    ComplexMatrix out(2);
    for (const ComplexMatrix& k : measurement_kraus(MeasurementStrength(lam)).operators)
      out += k * rho.matrix() * k.adjoint();
    CHECK(max_abs_diff(out, ComplexMatrix::diag({lam, 1 - lam})) < 1e-14);
  }
}

TEST_CASE("switch kraus completeness") {
  CHECK(switch_kraus(MeasurementStrength(1), MeasurementStrength(1)).completeness_residual() <
        1e-14);
  CHECK(switch_kraus(MeasurementStrength(0.3), MeasurementStrength(0.7)).completeness_residual() <
        1e-14);
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j)
      CHECK(switch_kraus(MeasurementStrength(i / 20.0), MeasurementStrength(j / 20.0))
                .completeness_residual() < 1e-12);
}

TEST_CASE("definite orders through the switch") {
  CounterRng rng(5);
  const MeasurementStrength a(0.25), ap(0.65);
  for (int ctrl = 0; ctrl < 2; ++ctrl) {
    const DensityOperator rho = random_density(rng, 2);
    const DensityOperator joint(tensor(rho.matrix(), ket_bra(ctrl, ctrl)));
    const DensityOperator out = apply_switch(a, ap, joint);
    // control |0>: A' acts last; control |1>: A acts last; control untouched
    const double last = ctrl == 0 ? ap.value : a.value;
    CHECK(max_abs_diff(out.matrix(),
                       tensor(ComplexMatrix::diag({last, 1 - last}), ket_bra(ctrl, ctrl))) <
          1e-14);
  }

  // a = a' = 1/2 on a product state with control |0>
  const DensityOperator joint(tensor(random_density(rng, 2).matrix(), ket_bra(0, 0)));
  const DensityOperator out =
      apply_switch(MeasurementStrength(0.5), MeasurementStrength(0.5), joint);
  CHECK(max_abs_diff(out.matrix(), tensor(ComplexMatrix::diag({0.5, 0.5}), ket_bra(0, 0))) <
        1e-14);

  // a = a' = 1 projects the medium onto the ground level for any input
  const DensityOperator any(tensor(random_density(rng, 2).matrix(),
                                   control_pure({1.2, 0.4}).matrix()));
  const DensityOperator proj = apply_switch(MeasurementStrength(1), MeasurementStrength(1), any);
  CHECK(max_abs_diff(partial_trace(proj, Subsystem::First).matrix(), ket_bra(0, 0)) < 1e-13);
}

TEST_CASE("switch decomposition closed forms") {
  CounterRng rng(7);
  const MeasurementStrength a(0.4), ap(0.8);

  // product with control |0>
  const DensityOperator p0(tensor(random_density(rng, 2).matrix(), ket_bra(0, 0)));
  SwitchDecomposition dec = switch_decomposition(a, ap, p0);
  CHECK(dec.lambda_weight == doctest::Approx(1));
  CHECK(dec.lambda_x.max_abs() < 1e-14);
  CHECK(dec.lambda_y.max_abs() < 1e-14);

  // control maximally mixed: no control coherence
  ComplexMatrix half = ComplexMatrix::identity(2);
  half *= 0.5;
  const DensityOperator pm(tensor(random_density(rng, 2).matrix(), half));
  dec = switch_decomposition(a, ap, pm);
  CHECK(dec.lambda_weight == doctest::Approx(0.5));
  CHECK(dec.lambda_x.max_abs() < 1e-14);
  CHECK(dec.lambda_y.max_abs() < 1e-14);

  // uncorrelated theta = pi/2, phi = 0, zeta = 1: Lambda_X = rho_a' rho0 rho_a / 2
  InitialStateSpec spec;
  spec.family = Family::Uncorrelated;
  spec.angles = {M_PI / 2, 0};
  spec.gibbs = {1};
  spec.zeta = 1;
  dec = switch_decomposition(a, ap, initial_state(spec));
  ComplexMatrix expected = channel_fixed_output(ap) * gibbs_state({1}).matrix() *
                           channel_fixed_output(a);
  expected *= 0.5;
  CHECK(max_abs_diff(dec.lambda_x, expected) < 1e-14);
  CHECK(dec.lambda_y.max_abs() < 1e-14);
  CHECK(dec.lambda_x.max_abs() > 0.01);  // the SCO block is genuinely nonzero

  // xi operator composition
  SwitchDecomposition zero;
  CHECK(xi_operator(zero, 0.7).max_abs() == 0);
  ComplexMatrix twice = dec.lambda_x;
  twice *= 2.0;
  CHECK(max_abs_diff(xi_operator(dec, 0), twice) < 1e-14);
  SwitchDecomposition dy = dec;
  dy.lambda_y = dec.lambda_x;
  dy.lambda_x = ComplexMatrix(2);
  CHECK(max_abs_diff(xi_operator(dy, M_PI / 2), twice) < 1e-12);
}

TEST_CASE("reconstruction and reduction properties") {
  CounterRng rng(13);
  double worst_rec = 0, worst_red = 0, worst_prob = 0;
  for (int i = 0; i < 1000; ++i) {
    const MeasurementStrength a(rng.next_double()), ap(rng.next_double());
    const DensityOperator rho = random_density(rng, 4);
    const DensityOperator out = apply_switch(a, ap, rho);
    const SwitchDecomposition dec = switch_decomposition(a, ap, rho);

    worst_rec = std::max(worst_rec,
                         max_abs_diff(out.matrix(), reconstruct_switch_output(a, ap, dec)));

    const double a_inc = dec.lambda_weight * ap.value + (1 - dec.lambda_weight) * a.value;
    worst_red = std::max(worst_red, max_abs_diff(partial_trace(out, Subsystem::First).matrix(),
                                                 ComplexMatrix::diag({a_inc, 1 - a_inc})));

    // p_pm from the Xi trace vs brute-force projection onto |pm>_c
    const double phi_prime = 2 * M_PI * rng.next_double();
    const ComplexMatrix xi = xi_operator(dec, phi_prime);
    const double tr_xi = (xi(0, 0) + xi(1, 1)).real();
    for (double sgn : {1.0, -1.0}) {
      ComplexMatrix ket(2);  // |pm><pm| in the control space
      const cplx e = std::polar(1.0, phi_prime);
      ket(0, 0) = 0.5;
      ket(1, 1) = 0.5;
      ket(0, 1) = 0.5 * sgn * std::conj(e);
      ket(1, 0) = 0.5 * sgn * e;
      const cplx p_brute = (tensor(ComplexMatrix::identity(2), ket) * out.matrix()).trace();
      worst_prob = std::max(worst_prob, std::abs(p_brute.real() - 0.5 * (1 + sgn * tr_xi)));
    }
  }
  CHECK(worst_rec < 1e-12);
  CHECK(worst_red < 1e-12);
  CHECK(worst_prob < 1e-12);
}
