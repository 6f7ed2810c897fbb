#pragma once

#include "sco/qmat.hpp"

#include <vector>

namespace sco {

struct MeasurementStrength {
  double value = 0.0;
  MeasurementStrength() = default;
  explicit MeasurementStrength(double v) : value(v) {
    if (!(v >= -1e-12 && v <= 1 + 1e-12)) throw DomainError("measurement strength outside [0,1]");
    if (v < 0) value = 0;
    if (v > 1) value = 1;
  }
};

struct KrausSet {
  std::vector<ComplexMatrix> operators;
  double completeness_residual() const;  // max |sum K^dag K - I|
};

/// lambda rho_{a'} (x) |0><0|_c + (1-lambda) rho_a (x) |1><1|_c + Lx (x) X_c + Ly (x) Y_c
struct SwitchDecomposition {
  double lambda_weight = 0.0;
  ComplexMatrix lambda_x{2};
  ComplexMatrix lambda_y{2};
};

KrausSet measurement_kraus(MeasurementStrength s);
DensityOperator apply_channel(MeasurementStrength s, const DensityOperator& rho);

// Joint operators on medium (x) control; medium is the first tensor factor.
KrausSet switch_kraus(MeasurementStrength a, MeasurementStrength a_prime);
DensityOperator apply_switch(MeasurementStrength a, MeasurementStrength a_prime,
                             const DensityOperator& rho_in);
SwitchDecomposition switch_decomposition(MeasurementStrength a, MeasurementStrength a_prime,
                                         const DensityOperator& rho_in);
ComplexMatrix xi_operator(const SwitchDecomposition& dec, double phi_prime);

// Fast path: rebuild the switch output from the decomposition.
ComplexMatrix reconstruct_switch_output(MeasurementStrength a, MeasurementStrength a_prime,
                                        const SwitchDecomposition& dec);

ComplexMatrix channel_fixed_output(MeasurementStrength s);  // diag(s, 1-s)

}  // namespace sco
