#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "charb/finite_group.hpp"
#include "charb/liouville.hpp"

namespace charb::reptheory {

/// Character evaluated on a group element by index.
using CharacterFn = std::function<cd(std::uint32_t)>;

/// One irrep of the natural representation, with an orthonormal basis per
/// copy. Bases of different copies must be aligned: the matrix of every
/// group element is identical across copies.
struct IrrepDescriptor {
  std::string id;
  int dim = 0;
  int multiplicity = 1;
  std::vector<Eigen::MatrixXcd> copy_bases;  // each d^2 x dim, columns orthonormal
};

/// a_i x a_i commutant block per irrep; eigenvalues are the RB decay rates.
struct CommutantBlocks {
  std::vector<std::string> ids;
  std::vector<Eigen::MatrixXcd> blocks;
};

/// P = (dim/|G|) sum_U chi*(U) U_hat. Throws if the result is not an
/// orthogonal projector within tolerance (wrong character/dim pairing).
liouville::Superoperator projector_from_character(const FiniteGroup& g,
                                                  const CharacterFn& chi, int irrep_dim,
                                                  double tol = 1e-8);

/// (1/|G|) sum chi_i*(U) chi(U), rounded; throws if not near an integer.
int multiplicity_of_irrep(const FiniteGroup& g, const CharacterFn& rep_chi,
                          const CharacterFn& irrep_chi, double tol = 1e-8);

/// (1/|G|) sum |chi(U)|^2; equals 1 iff the character is irreducible.
double irreducibility_norm(const FiniteGroup& g, const CharacterFn& chi);

/// Character of the natural representation, chi(U) = Tr(U_hat) = |Tr U|^2.
CharacterFn natural_character(const FiniteGroup& g);

liouville::Superoperator exact_twirl(const liouville::Superoperator& channel,
                                     const FiniteGroup& g);

/// Q_i[j,j'] = (1/dim H_i) sum_n <psi_n^{i,j}| Lambda |psi_n^{i,j'}>.
/// For finite groups this equals the block structure of exact_twirl; for
/// compact groups it is the Haar-twirl projection onto the commutant.
CommutantBlocks commutant_blocks(const liouville::Superoperator& channel,
                                 const std::vector<IrrepDescriptor>& irreps);

/// Rebuilds sum_i Q_i (x) 1_i from blocks and bases.
liouville::Superoperator reassemble_commutant(const CommutantBlocks& blocks,
                                              const std::vector<IrrepDescriptor>& irreps,
                                              int dim);

std::vector<cd> all_commutant_eigenvalues(const CommutantBlocks& blocks);

struct TwoDesignReport {
  double max_deviation_deg1 = 0.0;
  double max_deviation_deg2 = 0.0;
};

/// Compares group averages of U D U^dag and U A U^dag B U C U^dag against
/// the Haar closed forms, over `trials` random operator draws.
TwoDesignReport two_design_check(const FiniteGroup& g, int trials, std::mt19937_64& rng);

/// Verifies copy-basis alignment on randomly sampled elements: the matrix
/// of U_hat restricted to each copy must agree across copies, and each
/// copy must be invariant. Throws on misalignment.
void check_copy_alignment(const FiniteGroup& g, const IrrepDescriptor& irrep,
                          int samples, std::mt19937_64& rng, double tol = 1e-8);

}  // namespace charb::reptheory
