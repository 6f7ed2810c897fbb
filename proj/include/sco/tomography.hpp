#pragma once

#include "sco/circuit.hpp"
#include "sco/rng.hpp"

namespace sco {

struct TomographyEstimate {
  DensityOperator rho_hat;           // linear inversion projected to PSD, trace 1
  std::vector<double> std_errors;    // row-major, sqrt(Var[Re] + Var[Im]) per element
  int shots = 0;
  int repetitions = 0;
  uint64_t seed = 0;
};

/// Pauli-basis shot tomography of the listed qubits (1 or 2). Counts are
/// pooled over repetitions; errors come from Monte Carlo resampling of the
/// multinomial counts. Deterministic given (seed, shots, repetitions).
TomographyEstimate sample_and_tomograph(const Circuit& c, int shots, int repetitions,
                                        uint64_t seed, const std::vector<int>& keep = {1, 0},
                                        int resamples = 200);

/// Exact reduced state of the same qubits (the shots -> infinity limit).
DensityOperator tomography_exact(const Circuit& c, const std::vector<int>& keep = {1, 0});

}  // namespace sco
