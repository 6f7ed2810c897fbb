#include "sco/tomography.hpp"

#include "sco/sampling.hpp"

#include <array>
#include <cmath>

namespace sco {

namespace {

constexpr uint64_t kResampleStreamBase = uint64_t(1) << 20;

ComplexMatrix pauli(int label) {  // 0 = I, 1 = X, 2 = Y, 3 = Z
  switch (label) {
    case 1: return pauli_x();
    case 2: return pauli_y();
    case 3: return pauli_z();
    default: return ComplexMatrix::identity(2);
  }
}

// outcome probabilities of measuring the listed Paulis (labels in 1..3)
std::vector<double> setting_probs(const DensityOperator& rho, const std::vector<int>& labels) {
  const int k = static_cast<int>(labels.size());
  const int n_out = 1 << k;
  std::vector<double> p(n_out);
  for (int o = 0; o < n_out; ++o) {
    ComplexMatrix proj = ComplexMatrix::identity(1);
    for (int i = 0; i < k; ++i) {
      const double sign = (o >> (k - 1 - i)) & 1 ? -1.0 : 1.0;
      ComplexMatrix m = pauli(labels[i]);
      m *= sign;
      m += ComplexMatrix::identity(2);
      m *= 0.5;
      proj = tensor(proj, m);
    }
    p[o] = std::max(0.0, ((proj * rho.matrix()).trace()).real());
  }
  double s = 0;
  for (double v : p) s += v;
  for (double& v : p) v /= s;
  return p;
}

// linear inversion from pooled counts, then PSD projection
ComplexMatrix invert_counts(const std::vector<std::vector<int>>& settings,
                            const std::vector<std::vector<long>>& counts, int k, long total) {
  const int d = 1 << k;
  auto expectation_from = [&](int si, int mask) {  // mask selects which letters enter the sign
    const auto& cnt = counts[si];
    double e = 0;
    for (size_t o = 0; o < cnt.size(); ++o) {
      int sign = 1;
      for (int i = 0; i < k; ++i)
        if ((mask >> i) & 1 && (o >> (k - 1 - i)) & 1) sign = -sign;
      e += sign * static_cast<double>(cnt[o]);
    }
    return e / static_cast<double>(total);
  };

  ComplexMatrix rho(d);
  std::vector<int> label(k, 0);
  // iterate over all Pauli labels (I,X,Y,Z)^k
  const int n_paulis = 1 << (2 * k);
  for (int code = 0; code < n_paulis; ++code) {
    int mask = 0;
    bool identity_all = true;
    for (int i = 0; i < k; ++i) {
      label[i] = (code >> (2 * (k - 1 - i))) & 3;
      if (label[i] != 0) {
        mask |= 1 << i;
        identity_all = false;
      }
    }
    double coeff;
    if (identity_all) {
      coeff = 1.0;
    } else {
      // average the estimate over every compatible measurement setting
      double sum = 0;
      int n_compat = 0;
      for (size_t si = 0; si < settings.size(); ++si) {
        bool compat = true;
        for (int i = 0; i < k; ++i)
          if (label[i] != 0 && settings[si][i] != label[i]) compat = false;
        if (!compat) continue;
        sum += expectation_from(static_cast<int>(si), mask);
        ++n_compat;
      }
      coeff = sum / n_compat;
    }
    ComplexMatrix op = ComplexMatrix::identity(1);
    for (int i = 0; i < k; ++i) op = tensor(op, pauli(label[i]));
    op *= coeff / d;
    rho += op;
  }
  return rho;
}

ComplexMatrix project_psd(const ComplexMatrix& m) {
  const EigResult eig = eig_hermitian(m);
  const int d = m.dim();
  double tr = 0;
  std::vector<double> w(eig.eigenvalues);
  for (double& v : w) {
    v = std::max(v, 0.0);
    tr += v;
  }
  ComplexMatrix out(d);
  if (tr <= 0) {
    out = ComplexMatrix::identity(d);
    out *= cplx(1.0 / d, 0);
    return out;
  }
  for (int i = 0; i < d; ++i) {
    if (w[static_cast<size_t>(i)] == 0) continue;
    const double v = w[static_cast<size_t>(i)] / tr;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        out(r, c) += v * eig.eigenvectors(r, i) * std::conj(eig.eigenvectors(c, i));
  }
  return out;
}

}  // namespace

DensityOperator tomography_exact(const Circuit& c, const std::vector<int>& keep) {
  return reduced_density(statevector_run(c), keep);
}

TomographyEstimate sample_and_tomograph(const Circuit& c, int shots, int repetitions,
                                        uint64_t seed, const std::vector<int>& keep,
                                        int resamples) {
  if (shots < 1) throw DomainError("sample_and_tomograph: shots must be >= 1");
  if (repetitions < 1) throw DomainError("sample_and_tomograph: repetitions must be >= 1");
  const int k = static_cast<int>(keep.size());
  if (k < 1 || k > 2) throw DomainError("sample_and_tomograph: tomography of 1 or 2 qubits");
  resamples = std::max(resamples, 200);

  const DensityOperator rho = tomography_exact(c, keep);
  std::vector<std::vector<int>> settings;
  if (k == 1) {
    for (int l = 1; l <= 3; ++l) settings.push_back({l});
  } else {
    for (int l1 = 1; l1 <= 3; ++l1)
      for (int l2 = 1; l2 <= 3; ++l2) settings.push_back({l1, l2});
  }
  const int n_out = 1 << k;
  const long total = static_cast<long>(shots) * repetitions;

  std::vector<std::vector<long>> counts(settings.size(), std::vector<long>(n_out, 0));
  std::vector<long> buf(n_out);
  for (size_t si = 0; si < settings.size(); ++si) {
    const std::vector<double> p = setting_probs(rho, settings[si]);
    for (int rep = 0; rep < repetitions; ++rep) {
      CounterRng rng(seed, si * static_cast<uint64_t>(repetitions) + rep);
      multinomial_draw(rng, p, shots, buf);
      for (int o = 0; o < n_out; ++o) counts[si][o] += buf[o];
    }
  }

  const ComplexMatrix est = project_psd(invert_counts(settings, counts, k, total));

  // Monte Carlo error bars: resample counts from the empirical distribution.
  const int d = 1 << k;
  std::vector<double> mean_re(d * d, 0), mean_im(d * d, 0), m2_re(d * d, 0), m2_im(d * d, 0);
  std::vector<std::vector<double>> phat(settings.size());
  for (size_t si = 0; si < settings.size(); ++si) {
    phat[si].resize(n_out);
    for (int o = 0; o < n_out; ++o)
      phat[si][o] = static_cast<double>(counts[si][o]) / static_cast<double>(total);
  }
  std::vector<std::vector<long>> rcounts(settings.size(), std::vector<long>(n_out));
  for (int r = 0; r < resamples; ++r) {
    for (size_t si = 0; si < settings.size(); ++si) {
      CounterRng rng(seed, kResampleStreamBase + static_cast<uint64_t>(r) * settings.size() + si);
      multinomial_draw(rng, phat[si], total, rcounts[si]);
    }
    const ComplexMatrix sample = project_psd(invert_counts(settings, rcounts, k, total));
    for (int i = 0; i < d * d; ++i) {
      const cplx v = sample.entries()[static_cast<size_t>(i)];
      mean_re[i] += v.real();
      mean_im[i] += v.imag();
      m2_re[i] += v.real() * v.real();
      m2_im[i] += v.imag() * v.imag();
    }
  }
  TomographyEstimate out{DensityOperator(est), {}, shots, repetitions, seed};
  out.std_errors.resize(d * d);
  for (int i = 0; i < d * d; ++i) {
    const double n = resamples;
    const double var_re = std::max(0.0, m2_re[i] / n - (mean_re[i] / n) * (mean_re[i] / n));
    const double var_im = std::max(0.0, m2_im[i] / n - (mean_im[i] / n) * (mean_im[i] / n));
    out.std_errors[static_cast<size_t>(i)] = std::sqrt(var_re + var_im);
  }
  return out;
}

}  // namespace sco
