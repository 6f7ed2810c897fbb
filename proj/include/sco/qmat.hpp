#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sco {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotHermitianError : Error {
  using Error::Error;
};
struct DimensionMismatchError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct NotPositiveError : Error {
  using Error::Error;
};
struct ConsistencyError : Error {
  using Error::Error;
};

/// Dense square complex matrix, row-major storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim) : dim_(dim), entries_(static_cast<size_t>(dim) * dim) {}

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }
  static ComplexMatrix diag(const std::vector<double>& d);

  int dim() const { return dim_; }
  cplx& operator()(int r, int c) { return entries_[static_cast<size_t>(r) * dim_ + c]; }
  const cplx& operator()(int r, int c) const { return entries_[static_cast<size_t>(r) * dim_ + c]; }
  const std::vector<cplx>& entries() const { return entries_; }
  std::vector<cplx>& entries() { return entries_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  bool is_finite() const;
  double max_abs() const;                         // elementwise infinity norm
  double hermiticity_defect() const;              // max |m - m^dag| elementwise
  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  int dim_ = 0;
  std::vector<cplx> entries_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Pauli operators and basis projectors (dimensionless, computational basis).
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix ket_bra(int i, int j, int dim = 2);  // |i><j|

/// Hermitian, unit-trace, PSD matrix. Validates on construction.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m);
  const ComplexMatrix& matrix() const { return m_; }
  int dim() const { return m_.dim(); }
  cplx operator()(int r, int c) const { return m_(r, c); }

 private:
  ComplexMatrix m_;
};

enum class Subsystem { First, Second };

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
DensityOperator partial_trace(const DensityOperator& rho, Subsystem keep);

struct EigResult {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // columns, m = V diag(w) V^dag
};
EigResult eig_hermitian(const ComplexMatrix& m);

double von_neumann_entropy(const DensityOperator& rho);  // nats
double binary_entropy(double x);                         // nats
double expectation(const ComplexMatrix& obs, const DensityOperator& rho);

double trace_distance(const DensityOperator& a, const DensityOperator& b);

}  // namespace sco
