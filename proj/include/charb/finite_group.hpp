#pragma once

#include <cstdint>
#include <vector>

#include "charb/liouville.hpp"

namespace charb {

/// Finite unitary group stored with one canonical unitary per element.
/// Element identity, multiplication table and inverses are all decided at
/// the natural-representation (phase-free) level, so global phases on the
/// canonical unitaries never leak into group structure.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  int dim() const { return dim_; }
  std::size_t size() const { return unitaries_.size(); }
  std::uint32_t identity() const { return identity_; }

  const Eigen::MatrixXcd& unitary(std::uint32_t g) const { return unitaries_[g]; }
  const Eigen::MatrixXcd& super(std::uint32_t g) const { return supers_[g]; }

  std::uint32_t product(std::uint32_t a, std::uint32_t b) const {
    return mult_[a * size() + b];
  }
  std::uint32_t inverse(std::uint32_t a) const { return inv_[a]; }

  /// Index of the element whose natural representation matches the given
  /// unitary within tolerance; throws if absent.
  std::uint32_t find(const Eigen::MatrixXcd& u, double tol = 1e-9) const;

  /// Builds the group from a closed set of unitaries (order preserved).
  /// Throws on closure violation or missing identity.
  static FiniteGroup from_unitaries(int dim, std::vector<Eigen::MatrixXcd> us,
                                    double tol = 1e-9);

  /// BFS closure of a generating set. Throws if the closure exceeds
  /// max_size elements (signals a phase-handling bug upstream).
  static FiniteGroup generate(int dim, const std::vector<Eigen::MatrixXcd>& gens,
                              std::size_t max_size, double tol = 1e-9);

 private:
  std::uint32_t find_super(const Eigen::MatrixXcd& s, double tol) const;
  void build_tables(double tol);

  int dim_ = 0;
  std::uint32_t identity_ = 0;
  std::vector<Eigen::MatrixXcd> unitaries_;
  std::vector<Eigen::MatrixXcd> supers_;
  std::vector<std::uint32_t> mult_, inv_;
  // quantized fingerprint -> candidate indices, with verified fallback
  std::vector<std::pair<std::uint64_t, std::uint32_t>> index_;
};

/// Subgroup given as parent-element indices.
struct Subgroup {
  std::vector<std::uint32_t> elements;
};

}  // namespace charb
