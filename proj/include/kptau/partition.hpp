#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kptau {

/// Integer partition stored densely as its nonzero parts, weakly decreasing.
///
/// The empty partition is the trivial partition (0). Trailing zero parts
/// passed to the constructor are dropped; anything else that is not a weakly
/// decreasing sequence of positive integers is rejected.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);
  Partition(std::initializer_list<int> parts)
      : Partition(std::vector<int>(parts)) {}

  std::span<const int> parts() const { return parts_; }
  int weight() const { return weight_; }
  int length() const { return static_cast<int>(parts_.size()); }
  bool empty() const { return parts_.empty(); }

  /// Part lambda_i with 1-based i; zero beyond the length.
  int part(int i) const {
    return (i >= 1 && i <= length()) ? parts_[static_cast<std::size_t>(i - 1)]
                                     : 0;
  }

  /// Shifted label lambda_j - j + N of the j-th occupied site (j is 1-based).
  int site(int j, int charge) const { return part(j) - j + charge; }

  /// "2,1" style text; "()" for the trivial partition.
  std::string to_string() const;
  static Partition parse(std::string_view text);

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

/// Graded order: by weight, then lexicographically descending. This is the
/// order produced by enumerate_partitions, and the iteration order of every
/// PartitionMap, so reductions over partitions are reproducible.
struct GradedLess {
  bool operator()(const Partition& a, const Partition& b) const {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return b < a;
  }
};

template <class T>
using PartitionMap = std::map<Partition, T, GradedLess>;

struct FrobeniusCoords {
  std::vector<int> alpha;  // arm lengths, strictly decreasing
  std::vector<int> beta;   // leg lengths, strictly decreasing
  int rank() const { return static_cast<int>(alpha.size()); }
  friend bool operator==(const FrobeniusCoords&,
                         const FrobeniusCoords&) = default;
};

inline constexpr int kMaxEnumerationWeight = 40;

/// All partitions with weight <= max_weight and length <= max_length in
/// graded order. Throws CapacityError when max_weight exceeds 40.
std::vector<Partition> enumerate_partitions(int max_weight, int max_length);

Partition conjugate(const Partition& lambda);
FrobeniusCoords to_frobenius(const Partition& lambda);
Partition from_frobenius(const FrobeniusCoords& coords);

/// Hook length of cell (i, j), both 1-based; the cell must lie in lambda.
int hook_length(const Partition& lambda, int i, int j);

/// Extended Pochhammer symbol: product over cells of (N - i + j).
double pochhammer_ext(double n, const Partition& lambda);

/// Dimension of the GL(N) irreducible of shape lambda (hook-content formula).
/// Zero when length(lambda) > N.
double dimension_glN(const Partition& lambda, int n);

}  // namespace kptau
