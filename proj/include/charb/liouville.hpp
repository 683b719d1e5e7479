#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "charb/common.hpp"

namespace charb::liouville {

/// Vectorized operator on a d-dimensional Hilbert space. Row-major
/// convention, fixed repo-wide: rho_ij sits at index i*d + j.
struct DensityVec {
  int dim = 0;
  Eigen::VectorXcd v;
};

/// d^2 x d^2 matrix acting on vectorized operators. A unitary U acts as
/// U (x) U*; composition of channels is matrix multiplication.
struct Superoperator {
  int dim = 0;
  Eigen::MatrixXcd m;
};

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

DensityVec vectorize(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd devectorize(const DensityVec& r);

/// <<a|b>> = Tr(a^dag b); first argument is conjugated.
cd hs_inner(const DensityVec& a, const DensityVec& b);

Superoperator identity_super(int dim);
Superoperator unitary_to_super(const Eigen::MatrixXcd& u);
Superoperator kraus_to_super(int dim, const std::vector<Eigen::MatrixXcd>& kraus);
Superoperator compose(const Superoperator& after, const Superoperator& before);

DensityVec apply(const Superoperator& s, const DensityVec& r);

/// ||U^dag U - 1||_inf
double unitarity_defect(const Eigen::MatrixXcd& u);
/// || <<1| Lambda - <<1| ||_inf
double trace_preservation_defect(const Superoperator& s);
/// Minimum eigenvalue of the (Hermitized) Choi matrix.
double choi_min_eigenvalue(const Superoperator& s);
Eigen::MatrixXcd choi_matrix(const Superoperator& s);
/// || sum A^dag A - 1 ||_inf for a Kraus set.
double kraus_completeness_defect(int dim, const std::vector<Eigen::MatrixXcd>& kraus);

Eigen::MatrixXcd haar_unitary(int dim, std::mt19937_64& rng);
Eigen::MatrixXd haar_special_orthogonal(int dim, std::mt19937_64& rng);

}  // namespace charb::liouville
