#include "pcx/multi_index.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "pcx/errors.hpp"

namespace pcx {

std::uint64_t count_terms(int dimension, int max_degree) {
  if (dimension < 1) throw ConfigError("count_terms: dimension must be >= 1");
  if (max_degree < 0) throw ConfigError("count_terms: max_degree must be >= 0");
  // binomial(n + l, l) = prod_{i=1..l} (n + i) / i, integer at every step.
  std::uint64_t r = 1;
  for (int i = 1; i <= max_degree; ++i) {
    std::uint64_t factor = static_cast<std::uint64_t>(dimension) + static_cast<std::uint64_t>(i);
    if (r > std::numeric_limits<std::uint64_t>::max() / factor)
      throw std::overflow_error("count_terms: binomial overflows 64-bit integer");
    r = r * factor / static_cast<std::uint64_t>(i);
  }
  return r;
}

namespace {

void compositions(int dims_left, int degree_left, std::vector<int>& current,
                  std::vector<MultiIndex>& out) {
  if (dims_left == 1) {
    current.push_back(degree_left);
    out.push_back(MultiIndex{current, std::accumulate(current.begin(), current.end(), 0)});
    current.pop_back();
    return;
  }
  for (int e = degree_left; e >= 0; --e) {
    current.push_back(e);
    compositions(dims_left - 1, degree_left - e, current, out);
    current.pop_back();
  }
}

bool block_order(const MultiIndex& a, const MultiIndex& b) {
  int ma = *std::max_element(a.exponents.begin(), a.exponents.end());
  int mb = *std::max_element(b.exponents.begin(), b.exponents.end());
  if (ma != mb) return ma > mb;
  return a.exponents > b.exponents;  // lexicographic, descending
}

}  // namespace

MultiIndexSet::MultiIndexSet(int dimension, int max_degree)
    : dimension_(dimension), max_degree_(max_degree) {
  std::uint64_t total = count_terms(dimension, max_degree);
  indices_.reserve(static_cast<std::size_t>(total));
  std::vector<int> current;
  for (int l = 0; l <= max_degree; ++l) {
    std::vector<MultiIndex> block;
    compositions(dimension, l, current, block);
    std::sort(block.begin(), block.end(), block_order);
    for (auto& mi : block) indices_.push_back(std::move(mi));
  }
}

void MultiIndexSet::write(std::ostream& os) const {
  for (const auto& mi : indices_) {
    for (int i = 0; i < dimension_; ++i) {
      if (i) os << ' ';
      os << mi.exponents[i];
    }
    os << '\n';
  }
}

MultiIndexSet MultiIndexSet::read(std::istream& is) {
  MultiIndexSet set;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    MultiIndex mi;
    int e;
    while (ls >> e) {
      if (e < 0) throw Error("MultiIndexSet::read: negative exponent");
      mi.exponents.push_back(e);
      mi.total_degree += e;
    }
    if (set.indices_.empty()) {
      set.dimension_ = static_cast<int>(mi.exponents.size());
    } else if (static_cast<int>(mi.exponents.size()) != set.dimension_) {
      throw DimensionError("MultiIndexSet::read: inconsistent dimension");
    }
    set.max_degree_ = std::max(set.max_degree_, mi.total_degree);
    set.indices_.push_back(std::move(mi));
  }
  if (set.indices_.empty()) throw Error("MultiIndexSet::read: empty input");
  return set;
}

}  // namespace pcx
