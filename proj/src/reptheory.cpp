#include "charb/reptheory.hpp"

#include <omp.h>

#include <cmath>

namespace charb::reptheory {

namespace {

/// Deterministic pairwise reduction of per-element terms; the result does
/// not depend on how the term computation was partitioned across threads.
Eigen::MatrixXcd pairwise_sum(std::vector<Eigen::MatrixXcd>& terms) {
  if (terms.empty()) throw NumericalError("pairwise_sum: empty");
  std::size_t n = terms.size();
  while (n > 1) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) terms[i] += terms[i + half];
    n = half;
  }
  return terms[0];
}

}  // namespace

liouville::Superoperator projector_from_character(const FiniteGroup& g,
                                                  const CharacterFn& chi, int irrep_dim,
                                                  double tol) {
  const std::size_t n = g.size();
  std::vector<Eigen::MatrixXcd> terms(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k)
    terms[k] = std::conj(chi(static_cast<std::uint32_t>(k))) * g.super(static_cast<std::uint32_t>(k));
  Eigen::MatrixXcd p = (static_cast<double>(irrep_dim) / static_cast<double>(n)) * pairwise_sum(terms);
  if ((p * p - p).cwiseAbs().maxCoeff() > tol || (p - p.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw NumericalError("projector_from_character: result is not an orthogonal projector");
  return {g.dim(), std::move(p)};
}

int multiplicity_of_irrep(const FiniteGroup& g, const CharacterFn& rep_chi,
                          const CharacterFn& irrep_chi, double tol) {
  cd acc = 0.0;
  for (std::uint32_t k = 0; k < g.size(); ++k) acc += std::conj(irrep_chi(k)) * rep_chi(k);
  acc /= static_cast<double>(g.size());
  const double rounded = std::round(acc.real());
  if (std::abs(acc - cd(rounded, 0)) > tol)
    throw NumericalError("multiplicity_of_irrep: group sum not near an integer");
  return static_cast<int>(rounded);
}

double irreducibility_norm(const FiniteGroup& g, const CharacterFn& chi) {
  double acc = 0.0, comp = 0.0;  // Kahan
  for (std::uint32_t k = 0; k < g.size(); ++k) {
    const double term = std::norm(chi(k)) - comp;
    const double next = acc + term;
    comp = (next - acc) - term;
    acc = next;
  }
  return acc / static_cast<double>(g.size());
}

CharacterFn natural_character(const FiniteGroup& g) {
  return [&g](std::uint32_t k) { return g.super(k).trace(); };
}

liouville::Superoperator exact_twirl(const liouville::Superoperator& channel,
                                     const FiniteGroup& g) {
  if (channel.dim != g.dim()) throw NumericalError("exact_twirl: dimension mismatch");
  const std::size_t n = g.size();
  std::vector<Eigen::MatrixXcd> terms(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) {
    const auto& u = g.super(static_cast<std::uint32_t>(k));
    terms[k] = u.adjoint() * channel.m * u;
  }
  return {channel.dim, pairwise_sum(terms) / static_cast<double>(n)};
}

CommutantBlocks commutant_blocks(const liouville::Superoperator& channel,
                                 const std::vector<IrrepDescriptor>& irreps) {
  CommutantBlocks out;
  for (const auto& ir : irreps) {
    const int a = ir.multiplicity;
    if (static_cast<int>(ir.copy_bases.size()) != a)
      throw NumericalError("commutant_blocks: copy basis count != multiplicity");
    Eigen::MatrixXcd q(a, a);
    for (int j = 0; j < a; ++j)
      for (int jp = 0; jp < a; ++jp)
        q(j, jp) = (ir.copy_bases[j].adjoint() * channel.m * ir.copy_bases[jp]).trace() /
                   static_cast<double>(ir.dim);
    out.ids.push_back(ir.id);
    out.blocks.push_back(std::move(q));
  }
  return out;
}

liouville::Superoperator reassemble_commutant(const CommutantBlocks& blocks,
                                              const std::vector<IrrepDescriptor>& irreps,
                                              int dim) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
  for (std::size_t i = 0; i < irreps.size(); ++i) {
    const auto& ir = irreps[i];
    const auto& q = blocks.blocks[i];
    for (int j = 0; j < ir.multiplicity; ++j)
      for (int jp = 0; jp < ir.multiplicity; ++jp)
        m += q(j, jp) * (ir.copy_bases[j] * ir.copy_bases[jp].adjoint());
  }
  return {dim, std::move(m)};
}

std::vector<cd> all_commutant_eigenvalues(const CommutantBlocks& blocks) {
  std::vector<cd> out;
  for (const auto& q : blocks.blocks) {
    if (q.rows() == 1) {
      out.push_back(q(0, 0));
    } else {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(q);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        out.push_back(es.eigenvalues()(i));
    }
  }
  return out;
}

TwoDesignReport two_design_check(const FiniteGroup& g, int trials, std::mt19937_64& rng) {
  const int d = g.dim();
  TwoDesignReport rep;
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_op = [&]() {
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = cd(gauss(rng), gauss(rng));
    return m;
  };
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXcd a = random_op(), b = random_op(), c = random_op(), dd = random_op();
    Eigen::MatrixXcd lhs1 = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd lhs2 = Eigen::MatrixXcd::Zero(d, d);
    for (std::uint32_t k = 0; k < g.size(); ++k) {
      const auto& u = g.unitary(k);
      lhs1 += u * dd * u.adjoint();
      lhs2 += u * a * u.adjoint() * b * u * c * u.adjoint();
    }
    lhs1 /= static_cast<double>(g.size());
    lhs2 /= static_cast<double>(g.size());
    const Eigen::MatrixXcd rhs1 = dd.trace() / static_cast<double>(d) * id;
    // Haar closed form for E[U A U^dag B U C U^dag]
    const cd trac = (a * c).trace();
    const cd q = (static_cast<double>(d) * a.trace() * c.trace() - trac) /
                 (static_cast<double>(d) * (static_cast<double>(d) * d - 1.0));
    const Eigen::MatrixXcd rhs2 =
        q * (b - b.trace() / static_cast<double>(d) * id) +
        trac * b.trace() / static_cast<double>(d * d) * id;
    rep.max_deviation_deg1 = std::max(rep.max_deviation_deg1, (lhs1 - rhs1).cwiseAbs().maxCoeff());
    rep.max_deviation_deg2 = std::max(rep.max_deviation_deg2, (lhs2 - rhs2).cwiseAbs().maxCoeff());
  }
  return rep;
}

void check_copy_alignment(const FiniteGroup& g, const IrrepDescriptor& irrep,
                          int samples, std::mt19937_64& rng, double tol) {
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(g.size() - 1));
  for (int s = 0; s < samples; ++s) {
    const std::uint32_t k = pick(rng);
    Eigen::MatrixXcd ref;
    for (int j = 0; j < irrep.multiplicity; ++j) {
      const auto& basis = irrep.copy_bases[j];
      Eigen::MatrixXcd moved = g.super(k) * basis;
      Eigen::MatrixXcd rep = basis.adjoint() * moved;
      if ((moved - basis * rep).cwiseAbs().maxCoeff() > tol)
        throw NumericalError("check_copy_alignment: copy subspace not invariant");
      if (j == 0)
        ref = rep;
      else if ((rep - ref).cwiseAbs().maxCoeff() > tol)
        throw NumericalError("check_copy_alignment: copies are not aligned");
    }
  }
}

}  // namespace charb::reptheory
