#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "charb/common.hpp"

namespace charb::matchgate {

/// Rotation e^{-(theta/2) c_ell c_m} mixing Majorana modes ell < m
/// (1-based). Nearest-neighbor iff ceil(m/2) - ceil(ell/2) <= 1.
struct MajoranaRotation {
  int ell = 0;
  int m = 0;
  double theta = 0.0;
};

struct MatchgateCircuit {
  int n = 0;  // qubit count
  std::vector<MajoranaRotation> gates;
};

bool is_nearest_neighbor(int ell, int m);

/// Jordan-Wigner Majorana operator c_k, k in 1..2n, as a 2^n x 2^n matrix.
Eigen::MatrixXcd majorana(int k, int n);

/// Product c_ell c_m as a signed Pauli string acting on computational
/// basis states: (c_ell c_m)|x> = coeff(x) |x ^ xmask>.
struct MajoranaPairAction {
  std::uint64_t xmask = 0;
  std::uint64_t zmask = 0;
  cd phase{1.0, 0.0};
  cd coeff(std::uint64_t x) const {
    int par = __builtin_popcountll(x & zmask) & 1;
    return par ? -phase : phase;
  }
};
MajoranaPairAction majorana_pair_action(int ell, int m, int n);

/// 2n x 2n Givens rotation with entries R[l][l]=R[m][m]=cos, R[l][m]=sin,
/// R[m][l]=-sin (1-based l < m).
Eigen::MatrixXd givens_matrix(int dim, int ell, int m, double theta);

/// Decomposes R in SO(2n) into at most n(2n-1) Givens rotations whose
/// matrix product in list order reconstructs R.
std::vector<MajoranaRotation> hoffman_decompose(const Eigen::MatrixXd& r);

/// Expands one (ell, m, theta) rotation into 2s+1 nearest-neighbor gates,
/// s = ceil(m/2) - ceil(ell/2) - 1, via pi/2 swap chains.
std::vector<MajoranaRotation> route_rotation(int ell, int m, double theta, int n);

/// Unitary of a nearest-neighbor gate: cos(theta/2) 1 - sin(theta/2) c_ell c_m.
/// Satisfies U c_ell U^dag = cos(theta) c_ell + sin(theta) c_m.
Eigen::MatrixXcd rotation_unitary(const MajoranaRotation& g, int n);

MatchgateCircuit compile(const Eigen::MatrixXd& r);

/// Hilbert-space unitary realizing R (up to the global spin-cover sign,
/// which cancels in the natural representation).
Eigen::MatrixXcd unitary_from_rotation(const Eigen::MatrixXd& r);
Eigen::MatrixXcd circuit_unitary(const MatchgateCircuit& c);

/// Rotation matrix with R[l][m] = Tr(c_m U c_l U^dag)/2^n. Throws if the
/// conjugated Majoranas leave the linear Majorana span (not a matchgate).
/// Note the induced map composes contravariantly: R(UV) = R(V) R(U).
Eigen::MatrixXd induced_rotation(const Eigen::MatrixXcd& u);

/// Rotation matrix of the circuit (product of its Givens factors in gate
/// order); equals induced_rotation(circuit_unitary(c)).
Eigen::MatrixXd circuit_rotation(const MatchgateCircuit& c);

std::string serialize_circuit(const MatchgateCircuit& c);
MatchgateCircuit parse_circuit(const std::string& text);

}  // namespace charb::matchgate
