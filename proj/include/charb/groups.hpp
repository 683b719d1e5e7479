#pragma once

#include <string>
#include <vector>

#include "charb/finite_group.hpp"
#include "charb/fitting.hpp"
#include "charb/liouville.hpp"
#include "charb/reptheory.hpp"

namespace charb::groups {

struct PlanFit {
  fitting::FitModel primary;
  bool model_select = false;  // offer both double-exponential variants
};

/// Per-irrep experiment recipe for a finite benchmarking group.
struct FinitePlan {
  std::string id;
  int irrep_dim = 0;  // dim(H_i) in the parent natural representation
  int multiplicity = 1;
  std::vector<std::uint32_t> subgroup;  // parent indices of Gbar
  std::vector<cd> chi;                  // character per subgroup element
  double divisor = 1.0;                 // dim(Hbar)
  liouville::Superoperator projector;
  liouville::DensityVec rho;
  liouville::DensityVec meas;
  PlanFit fit;
  cd post_rotation{1.0, 0.0};
};

/// Projection formula on a subgroup view of a larger group.
liouville::Superoperator subgroup_projector(const FiniteGroup& parent,
                                            const std::vector<std::uint32_t>& subgroup,
                                            const std::vector<cd>& chi, int irrep_dim,
                                            double tol = 1e-8);

// ---------------------------------------------------------------------------
// Qutrit Clifford / subspace group
// ---------------------------------------------------------------------------

/// Symplectic data of one qutrit Clifford: U X U^dag = w^ex X^ax Z^bx,
/// U Z U^dag = w^ez X^az Z^bz, with ax bz - az bx = 1 (mod 3).
struct QutritCliffordElement {
  int ax, az, bx, bz, ex, ez;
  Eigen::MatrixXcd u;  // canonical 3x3 unitary (largest entry real positive)
};

std::vector<QutritCliffordElement> qutrit_clifford_enumerate();

struct SubspaceMeta {
  int ax, az, bx, bz, ex, ez;
  int eta;  // singlet phase index
};

/// Two-qubit group {U_T + w^eta det(U_T)^{1/3}} preserving the
/// triplet/singlet split, with its plans and irrep table.
struct SubspaceCatalog {
  FiniteGroup group;  // 648 elements, d = 4
  std::vector<SubspaceMeta> meta;
  FiniteGroup qutrit_group;  // the 216-element d = 3 group itself
  std::vector<FinitePlan> plans;  // ids "0", "Tperp", "TS", "ST"
  std::vector<reptheory::IrrepDescriptor> irreps;
  Eigen::MatrixXcd block_basis;  // columns |00>, |T>, |11>, |S>
  // Full-group characters of the nontrivial subrepresentations.
  std::vector<cd> chi_tperp, chi_ts, chi_st;
};

SubspaceCatalog make_subspace_catalog();

// ---------------------------------------------------------------------------
// Leakage group
// ---------------------------------------------------------------------------

/// <R_X, R_Z> with R_X = X (+) Z and R_Z = Z (+) H on H1 (+) H2,
/// 16 elements in the natural representation.
struct LeakageCatalog {
  FiniteGroup group;  // d = 4
  int d1 = 2, d2 = 2;
  FinitePlan plan0;  // trivial character over the whole group
  std::vector<reptheory::IrrepDescriptor> irreps;
};

LeakageCatalog make_leakage_catalog();

// ---------------------------------------------------------------------------
// Matchgate group
// ---------------------------------------------------------------------------

struct MatchgatePlan {
  std::string id;
  int i = 0;  // character index, 0..n
  int irrep_dim = 0;
  int multiplicity = 1;
  double divisor = 1.0;
  liouville::Superoperator projector;
  liouville::DensityVec rho;
  liouville::DensityVec meas;
  PlanFit fit;
};

/// Compact benchmarking group SO(2n) realized by matchgate circuits.
/// Elements are rotation matrices; Hilbert-space unitaries are materialized
/// through the compiler. The diagonal subgroup (2^{2n-1} sign patterns with
/// product +1) supplies the character functions chi_i = sigma_1...sigma_i.
struct MatchgateCatalog {
  int n = 2;
  std::vector<MatchgatePlan> plans;  // i = 0..n
  std::vector<reptheory::IrrepDescriptor> irreps;
  FiniteGroup diagonal_subgroup;
  std::vector<std::vector<int>> subgroup_sigmas;  // sigma vector per element
};

MatchgateCatalog make_matchgate_catalog(int n);

/// Normalized Majorana monomial (prod_{k in s} c_k) / 2^{n/2}, vectorized.
/// Indices in s are 1-based and strictly increasing.
liouville::DensityVec monomial_vector(const std::vector<int>& s, int n);

/// Hodge-star image of a monomial: complement set and permutation sign.
std::pair<std::vector<int>, int> hodge_complement(const std::vector<int>& s, int n);

}  // namespace charb::groups
