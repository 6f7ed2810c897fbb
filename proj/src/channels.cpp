#include "sco/channels.hpp"

#include <cmath>

namespace sco {

double KrausSet::completeness_residual() const {
  if (operators.empty()) return 1.0;
  const int d = operators.front().dim();
  ComplexMatrix sum(d);
  for (const ComplexMatrix& k : operators) sum += k.adjoint() * k;
  sum -= ComplexMatrix::identity(d);
  return sum.max_abs();
}

KrausSet measurement_kraus(MeasurementStrength s) {
  const double r0 = std::sqrt(s.value), r1 = std::sqrt(1 - s.value);
  const double amps[4] = {r0, r0, r1, r1};
  const int rows[4] = {0, 0, 1, 1};
  const int cols[4] = {0, 1, 0, 1};
  KrausSet k;
  k.operators.reserve(4);
  for (int i = 0; i < 4; ++i) {
    ComplexMatrix m = ket_bra(rows[i], cols[i]);
    m *= amps[i];
    k.operators.push_back(std::move(m));
  }
  return k;
}

ComplexMatrix channel_fixed_output(MeasurementStrength s) {
  return ComplexMatrix::diag({s.value, 1 - s.value});
}

DensityOperator apply_channel(MeasurementStrength s, const DensityOperator& rho) {
  (void)rho;  // the channel output is independent of the input state
  return DensityOperator(channel_fixed_output(s));
}

KrausSet switch_kraus(MeasurementStrength a, MeasurementStrength a_prime) {
  const KrausSet ka = measurement_kraus(a);
  const KrausSet kap = measurement_kraus(a_prime);
  KrausSet out;
  out.operators.reserve(16);
  for (const ComplexMatrix& mi : ka.operators)
    for (const ComplexMatrix& mj : kap.operators) {
      ComplexMatrix k = tensor(mj * mi, ket_bra(0, 0));
      k += tensor(mi * mj, ket_bra(1, 1));
      out.operators.push_back(std::move(k));
    }
  return out;
}

DensityOperator apply_switch(MeasurementStrength a, MeasurementStrength a_prime,
                             const DensityOperator& rho_in) {
  if (rho_in.dim() != 4) throw DimensionMismatchError("apply_switch: expected dim 4");
  ComplexMatrix out(4);
  for (const ComplexMatrix& k : switch_kraus(a, a_prime).operators)
    out += k * rho_in.matrix() * k.adjoint();
  return DensityOperator(out);
}

SwitchDecomposition switch_decomposition(MeasurementStrength a, MeasurementStrength a_prime,
                                         const DensityOperator& rho_in) {
  if (rho_in.dim() != 4) throw DimensionMismatchError("switch_decomposition: expected dim 4");
  const ComplexMatrix& m = rho_in.matrix();
  SwitchDecomposition dec;
  dec.lambda_weight =
      0.5 * (1 + (m(0, 0) - m(1, 1) + m(2, 2) - m(3, 3)).real());  // tr[rho Z_c]

  // T = tr_c[rho |1>_c<0|] = the control-coherence block <.,0|rho|.,1>
  ComplexMatrix t(2);
  for (int q = 0; q < 2; ++q)
    for (int qp = 0; qp < 2; ++qp) t(q, qp) = m(2 * q + 0, 2 * qp + 1);

  const ComplexMatrix ra = channel_fixed_output(a);
  const ComplexMatrix rap = channel_fixed_output(a_prime);
  const ComplexMatrix g = rap * t * ra;
  const ComplexMatrix gd = g.adjoint();
  dec.lambda_x = g;
  dec.lambda_x += gd;
  dec.lambda_x *= 0.5;
  dec.lambda_y = g;
  dec.lambda_y -= gd;
  dec.lambda_y *= cplx(0, 0.5);
  return dec;
}

ComplexMatrix xi_operator(const SwitchDecomposition& dec, double phi_prime) {
  ComplexMatrix xi = dec.lambda_x;
  xi *= 2 * std::cos(phi_prime);
  ComplexMatrix y = dec.lambda_y;
  y *= 2 * std::sin(phi_prime);
  xi += y;
  return xi;
}

ComplexMatrix reconstruct_switch_output(MeasurementStrength a, MeasurementStrength a_prime,
                                        const SwitchDecomposition& dec) {
  ComplexMatrix out = tensor(channel_fixed_output(a_prime), ket_bra(0, 0));
  out *= dec.lambda_weight;
  ComplexMatrix t1 = tensor(channel_fixed_output(a), ket_bra(1, 1));
  t1 *= 1 - dec.lambda_weight;
  out += t1;
  out += tensor(dec.lambda_x, pauli_x());
  out += tensor(dec.lambda_y, pauli_y());
  return out;
}

}  // namespace sco
