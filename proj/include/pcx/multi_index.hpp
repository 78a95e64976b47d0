#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pcx/errors.hpp"

namespace pcx {

/// Exponent vector of one multivariate basis term.
struct MultiIndex {
  std::vector<int> exponents;
  int total_degree = 0;  // always the sum of exponents

  bool operator==(const MultiIndex& other) const { return exponents == other.exponents; }
};

/// Number of multivariate terms with total degree <= max_degree in dimension
/// n, i.e. binomial(n + max_degree, max_degree). Computed by incremental
/// multiply/divide; throws std::overflow_error instead of wrapping.
std::uint64_t count_terms(int dimension, int max_degree);

/// All multi-indices with total degree <= max_degree, in graded order:
/// degree blocks are ascending, and inside a degree block indices are sorted
/// by largest exponent first, ties broken lexicographically descending (pure
/// powers of theta_1, theta_2, ... lead each block, mixed terms follow).
class MultiIndexSet {
 public:
  MultiIndexSet(int dimension, int max_degree);

  int dimension() const { return dimension_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& operator[](std::size_t k) const { return indices_[k]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// One line per index, space-separated exponents, graded order preserved.
  void write(std::ostream& os) const;
  static MultiIndexSet read(std::istream& is);

 private:
  MultiIndexSet() = default;
  int dimension_ = 0;
  int max_degree_ = 0;
  std::vector<MultiIndex> indices_;
};

}  // namespace pcx
