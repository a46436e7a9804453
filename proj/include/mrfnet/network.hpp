#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace mrfnet {

// One stored weight theta(s, l) with s <= l.
struct Triplet {
  std::size_t s;
  std::size_t l;
  double weight;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

struct Neighbor {
  std::size_t node;
  double weight;
};

// Sparse symmetric parameter matrix over p nodes. Only nonzero weights are
// stored; get(s, l) == get(l, s) always. Diagonal entries are self-potentials.
class SymmetricNetwork {
 public:
  SymmetricNetwork() = default;
  explicit SymmetricNetwork(std::size_t p);
  // Zero weights in `entries` are dropped; duplicates of the same unordered
  // pair are rejected.
  SymmetricNetwork(std::size_t p, const std::vector<Triplet>& entries);

  std::size_t p() const noexcept { return diag_.size(); }

  double get(std::size_t s, std::size_t l) const;
  // Setting 0 erases the entry. Non-finite weights are rejected.
  void set(std::size_t s, std::size_t l, double weight);

  double diagonal(std::size_t s) const { return diag_[s]; }
  // Off-diagonal neighbors of s, ascending by node.
  std::span<const Neighbor> neighbors(std::size_t s) const { return adj_[s]; }
  std::size_t degree(std::size_t s) const { return adj_[s].size(); }
  std::size_t max_degree() const noexcept;

  // Canonical triplets, lexicographic in (s, l), s <= l.
  std::vector<Triplet> entries() const;
  std::size_t nonzeros() const noexcept;  // stored upper-triangle entries incl. diagonal

  // Norms over ordered pairs l >= s (each off-diagonal pair counted once).
  double norm2() const;
  double norm1() const;

  // Packed upper triangle, row-major over s <= l; length p(p+1)/2.
  std::vector<double> to_packed() const;
  static SymmetricNetwork from_packed(std::size_t p, std::span<const double> packed);

  // Node relabeling: result(perm[s], perm[l]) = this(s, l).
  SymmetricNetwork permuted(std::span<const std::size_t> perm) const;
  // Restriction to `nodes` (in the given order); node nodes[i] becomes i.
  SymmetricNetwork restricted(std::span<const std::size_t> nodes) const;

  bool off_diagonal_nonnegative() const noexcept;

  friend bool operator==(const SymmetricNetwork& x, const SymmetricNetwork& y) {
    return x.p() == y.p() && x.entries() == y.entries();
  }

 private:
  void check_index(std::size_t s, std::size_t l) const;

  std::vector<double> diag_;
  std::vector<std::vector<Neighbor>> adj_;
};

SymmetricNetwork operator+(const SymmetricNetwork& x, const SymmetricNetwork& y);
SymmetricNetwork operator-(const SymmetricNetwork& x, const SymmetricNetwork& y);
SymmetricNetwork operator*(double c, const SymmetricNetwork& x);

inline std::size_t packed_index(std::size_t p, std::size_t s, std::size_t l) {
  if (s > l) std::swap(s, l);
  return s * p - s * (s + 1) / 2 + l;
}

inline std::size_t packed_size(std::size_t p) { return p * (p + 1) / 2; }

}  // namespace mrfnet
