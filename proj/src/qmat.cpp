#include "sco/qmat.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace sco {

namespace {

constexpr double kHermTol = 1e-8;
constexpr double kDensityHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kEigFloor = -1e-10;
constexpr double kEntropyCut = 1e-14;

using EMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EMat> as_eigen(const ComplexMatrix& m) {
  return Eigen::Map<const EMat>(m.entries().data(), m.dim(), m.dim());
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diag(const std::vector<double>& d) {
  ComplexMatrix m(static_cast<int>(d.size()));
  for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<size_t>(i)];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) out(r, c) = std::conj((*this)(c, r));
  return out;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::is_finite() const {
  for (const cplx& v : entries_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double ComplexMatrix::max_abs() const {
  double m = 0;
  for (const cplx& v : entries_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::hermiticity_defect() const {
  double d = 0;
  for (int r = 0; r < dim_; ++r)
    for (int c = r; c < dim_; ++c)
      d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return d;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw DimensionMismatchError("matrix add: dimension mismatch");
  for (size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.dim_ != dim_) throw DimensionMismatchError("matrix sub: dimension mismatch");
  for (size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& v : entries_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatchError("matrix mul: dimension mismatch");
  ComplexMatrix out(a.dim());
  for (int r = 0; r < a.dim(); ++r)
    for (int k = 0; k < a.dim(); ++k) {
      const cplx av = a(r, k);
      if (av == cplx(0, 0)) continue;
      for (int c = 0; c < a.dim(); ++c) out(r, c) += av * b(k, c);
    }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatchError("max_abs_diff: dimension mismatch");
  double d = 0;
  for (size_t i = 0; i < a.entries().size(); ++i)
    d = std::max(d, std::abs(a.entries()[i] - b.entries()[i]));
  return d;
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2);
  m(0, 1) = 1;
  m(1, 0) = 1;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2);
  m(0, 1) = cplx(0, -1);
  m(1, 0) = cplx(0, 1);
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2);
  m(0, 0) = 1;
  m(1, 1) = -1;
  return m;
}

ComplexMatrix ket_bra(int i, int j, int dim) {
  ComplexMatrix m(dim);
  m(i, j) = 1;
  return m;
}

DensityOperator::DensityOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.is_finite()) throw DomainError("density operator: non-finite entries");
  if (m_.hermiticity_defect() > kDensityHermTol)
    throw NotHermitianError("density operator: hermiticity defect " +
                            std::to_string(m_.hermiticity_defect()));
  if (std::abs(m_.trace() - cplx(1, 0)) > kTraceTol)
    throw DomainError("density operator: trace != 1");
  const EigResult eig = eig_hermitian(m_);
  if (eig.eigenvalues.back() < kEigFloor)
    throw NotPositiveError("density operator: eigenvalue " +
                           std::to_string(eig.eigenvalues.back()));
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_finite() || !b.is_finite()) throw DomainError("tensor: non-finite input");
  const int da = a.dim(), db = b.dim();
  ComplexMatrix out(da * db);
  for (int r1 = 0; r1 < da; ++r1)
    for (int c1 = 0; c1 < da; ++c1) {
      const cplx av = a(r1, c1);
      if (av == cplx(0, 0)) continue;
      for (int r2 = 0; r2 < db; ++r2)
        for (int c2 = 0; c2 < db; ++c2) out(r1 * db + r2, c1 * db + c2) = av * b(r2, c2);
    }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, Subsystem keep) {
  if (rho.dim() != 4) throw DimensionMismatchError("partial_trace: expected dim 4");
  ComplexMatrix out(2);
  const ComplexMatrix& m = rho.matrix();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (int k = 0; k < 2; ++k) {
        if (keep == Subsystem::First)
          out(r, c) += m(2 * r + k, 2 * c + k);
        else
          out(r, c) += m(2 * k + r, 2 * k + c);
      }
  return DensityOperator(out);
}

EigResult eig_hermitian(const ComplexMatrix& m) {
  const double defect = m.hermiticity_defect();
  if (defect > kHermTol)
    throw NotHermitianError("eig_hermitian: hermiticity defect " + std::to_string(defect));
  // Symmetrize away roundoff before handing to the solver.
  EMat h = as_eigen(m);
  h = 0.5 * (h + h.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<EMat> solver(h);
  if (solver.info() != Eigen::Success) throw Error("eig_hermitian: solver failed");

  const int d = m.dim();
  EigResult out;
  out.eigenvalues.resize(static_cast<size_t>(d));
  out.eigenvectors = ComplexMatrix(d);
  for (int i = 0; i < d; ++i) {
    const int src = d - 1 - i;  // Eigen sorts ascending
    out.eigenvalues[static_cast<size_t>(i)] = solver.eigenvalues()(src);
    for (int r = 0; r < d; ++r) out.eigenvectors(r, i) = solver.eigenvectors()(r, src);
  }
  return out;
}

double von_neumann_entropy(const DensityOperator& rho) {
  const EigResult eig = eig_hermitian(rho.matrix());
  double s = 0;
  for (double w : eig.eigenvalues) {
    w = std::clamp(w, 0.0, 1.0);
    if (w > kEntropyCut) s -= w * std::log(w);
  }
  return s;
}

double binary_entropy(double x) {
  if (x < -1e-12 || x > 1 + 1e-12) throw DomainError("binary_entropy: x outside [0,1]");
  x = std::clamp(x, 0.0, 1.0);
  double s = 0;
  if (x > kEntropyCut) s -= x * std::log(x);
  if (1 - x > kEntropyCut) s -= (1 - x) * std::log(1 - x);
  return s;
}

double expectation(const ComplexMatrix& obs, const DensityOperator& rho) {
  if (obs.dim() != rho.dim()) throw DimensionMismatchError("expectation: dimension mismatch");
  const cplx t = (obs * rho.matrix()).trace();
  if (std::abs(t.imag()) > 1e-10)
    throw NotHermitianError("expectation: trace has imaginary part " + std::to_string(t.imag()));
  return t.real();
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  ComplexMatrix d = a.matrix();
  d -= b.matrix();
  const EigResult eig = eig_hermitian(d);
  double s = 0;
  for (double w : eig.eigenvalues) s += std::abs(w);
  return 0.5 * s;
}

}  // namespace sco
