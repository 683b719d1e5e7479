#include "charb/liouville.hpp"

#include <cmath>

namespace charb::liouville {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityVec vectorize(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols()) throw NumericalError("vectorize: non-square input");
  const int d = static_cast<int>(rho.rows());
  DensityVec r{d, Eigen::VectorXcd(d * d)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r.v(i * d + j) = rho(i, j);
  return r;
}

Eigen::MatrixXcd devectorize(const DensityVec& r) {
  const int d = r.dim;
  Eigen::MatrixXcd rho(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) rho(i, j) = r.v(i * d + j);
  return rho;
}

cd hs_inner(const DensityVec& a, const DensityVec& b) {
  if (a.dim != b.dim) throw NumericalError("hs_inner: dimension mismatch");
  return a.v.dot(b.v);  // Eigen dot conjugates the first argument
}

Superoperator identity_super(int dim) {
  return {dim, Eigen::MatrixXcd::Identity(dim * dim, dim * dim)};
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  Eigen::MatrixXcd g = u.adjoint() * u;
  g -= Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

Superoperator unitary_to_super(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols()) throw NumericalError("unitary_to_super: non-square input");
  if (unitarity_defect(u) > 1e-10)
    throw NumericalError("unitary_to_super: input not unitary within 1e-10");
  return {static_cast<int>(u.rows()), kron(u, u.conjugate())};
}

Superoperator kraus_to_super(int dim, const std::vector<Eigen::MatrixXcd>& kraus) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
  for (const auto& a : kraus) m += kron(a, a.conjugate());
  return {dim, std::move(m)};
}

Superoperator compose(const Superoperator& after, const Superoperator& before) {
  if (after.dim != before.dim) throw NumericalError("compose: dimension mismatch");
  return {after.dim, after.m * before.m};
}

DensityVec apply(const Superoperator& s, const DensityVec& r) {
  if (s.dim != r.dim) throw NumericalError("apply: dimension mismatch");
  return {r.dim, s.m * r.v};
}

double trace_preservation_defect(const Superoperator& s) {
  const int d = s.dim;
  DensityVec one = vectorize(Eigen::MatrixXcd::Identity(d, d));
  Eigen::RowVectorXcd row = one.v.adjoint() * s.m;
  return (row - one.v.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd choi_matrix(const Superoperator& s) {
  // C[(i,j),(k,l)] = S[(i,k),(j,l)]: reshuffle of the middle indices.
  const int d = s.dim;
  Eigen::MatrixXcd c(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) c(i * d + j, k * d + l) = s.m(i * d + k, j * d + l);
  return c;
}

double choi_min_eigenvalue(const Superoperator& s) {
  Eigen::MatrixXcd c = choi_matrix(s);
  Eigen::MatrixXcd h = 0.5 * (c + c.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double kraus_completeness_defect(int dim, const std::vector<Eigen::MatrixXcd>& kraus) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& a : kraus) g += a.adjoint() * a;
  g -= Eigen::MatrixXcd::Identity(dim, dim);
  return g.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd haar_unitary(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw NumericalError("haar_unitary: dim must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = cd(gauss(rng), gauss(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    cd rjj = r(j, j);
    cd phase = (std::abs(rjj) > 0) ? rjj / std::abs(rjj) : cd(1, 0);
    q.col(j) *= phase;
  }
  return q;
}

Eigen::MatrixXd haar_special_orthogonal(int dim, std::mt19937_64& rng) {
  if (dim < 2 || dim % 2 != 0)
    throw NumericalError("haar_special_orthogonal: dim must be even and >= 2");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  if (q.determinant() < 0) q.col(dim - 1) = -q.col(dim - 1);
  return q;
}

}  // namespace charb::liouville
