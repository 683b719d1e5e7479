#include "charb/finite_group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "charb/rng.hpp"

namespace charb {

namespace {

std::uint64_t fingerprint(const Eigen::MatrixXcd& s) {
  // Quantized FNV hash of the matrix entries. Collisions and grid-boundary
  // misses are handled by verification plus a linear fallback in find().
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mixin = [&h](std::int64_t x) {
    h ^= static_cast<std::uint64_t>(x);
    h *= 0x100000001b3ull;
  };
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      mixin(std::llround(s(i, j).real() * 1e4));
      mixin(std::llround(s(i, j).imag() * 1e4));
    }
  return h;
}

bool super_equal(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (std::abs(a(i, j) - b(i, j)) > tol) return false;
  return true;
}

}  // namespace

std::uint32_t FiniteGroup::find_super(const Eigen::MatrixXcd& s, double tol) const {
  const std::uint64_t key = fingerprint(s);
  auto lo = std::lower_bound(index_.begin(), index_.end(),
                             std::make_pair(key, std::uint32_t{0}));
  for (auto it = lo; it != index_.end() && it->first == key; ++it)
    if (super_equal(supers_[it->second], s, tol)) return it->second;
  // Fallback: quantization landed on a different grid cell.
  for (std::uint32_t g = 0; g < size(); ++g)
    if (super_equal(supers_[g], s, tol)) return g;
  throw NumericalError("FiniteGroup: element not found (closure violation?)");
}

std::uint32_t FiniteGroup::find(const Eigen::MatrixXcd& u, double tol) const {
  return find_super(liouville::kron(u, u.conjugate()), tol);
}

void FiniteGroup::build_tables(double tol) {
  const std::size_t n = size();
  index_.clear();
  index_.reserve(n);
  for (std::uint32_t g = 0; g < n; ++g) index_.emplace_back(fingerprint(supers_[g]), g);
  std::sort(index_.begin(), index_.end());

  identity_ = find_super(Eigen::MatrixXcd::Identity(dim_ * dim_, dim_ * dim_), tol);

  mult_.assign(n * n, 0);
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b) {
      Eigen::MatrixXcd w = unitaries_[a] * unitaries_[b];
      mult_[a * n + b] = find_super(liouville::kron(w, w.conjugate()), tol);
    }

  inv_.assign(n, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    bool found = false;
    for (std::uint32_t b = 0; b < n; ++b)
      if (mult_[a * n + b] == identity_) {
        inv_[a] = b;
        found = true;
        break;
      }
    if (!found) throw NumericalError("FiniteGroup: element without inverse");
  }
}

FiniteGroup FiniteGroup::from_unitaries(int dim, std::vector<Eigen::MatrixXcd> us,
                                        double tol) {
  FiniteGroup g;
  g.dim_ = dim;
  g.unitaries_ = std::move(us);
  g.supers_.reserve(g.unitaries_.size());
  for (const auto& u : g.unitaries_) {
    if (liouville::unitarity_defect(u) > 1e-9)
      throw NumericalError("FiniteGroup: non-unitary element");
    g.supers_.push_back(liouville::kron(u, u.conjugate()));
  }
  g.build_tables(tol);
  return g;
}

FiniteGroup FiniteGroup::generate(int dim, const std::vector<Eigen::MatrixXcd>& gens,
                                  std::size_t max_size, double tol) {
  std::vector<Eigen::MatrixXcd> us{Eigen::MatrixXcd::Identity(dim, dim)};
  std::vector<Eigen::MatrixXcd> sups{Eigen::MatrixXcd::Identity(dim * dim, dim * dim)};
  auto contains = [&](const Eigen::MatrixXcd& s) {
    for (const auto& t : sups)
      if (super_equal(t, s, tol)) return true;
    return false;
  };
  std::deque<std::size_t> work;
  for (const auto& u : gens) {
    Eigen::MatrixXcd s = liouville::kron(u, u.conjugate());
    if (!contains(s)) {
      us.push_back(u);
      sups.push_back(std::move(s));
      work.push_back(us.size() - 1);
    }
  }
  // close under left-multiplication by generators
  while (!work.empty()) {
    const std::size_t k = work.front();
    work.pop_front();
    for (const auto& u : gens) {
      Eigen::MatrixXcd w = u * us[k];
      Eigen::MatrixXcd s = liouville::kron(w, w.conjugate());
      if (!contains(s)) {
        if (us.size() >= max_size)
          throw NumericalError("FiniteGroup::generate: closure exceeds safety bound");
        us.push_back(std::move(w));
        sups.push_back(std::move(s));
        work.push_back(us.size() - 1);
      }
    }
  }
  return from_unitaries(dim, std::move(us), tol);
}

}  // namespace charb
