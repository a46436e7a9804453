#include "mrfnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrfnet/errors.hpp"

namespace mrfnet {

SymmetricNetwork::SymmetricNetwork(std::size_t p) : diag_(p, 0.0), adj_(p) {}

SymmetricNetwork::SymmetricNetwork(std::size_t p, const std::vector<Triplet>& entries)
    : SymmetricNetwork(p) {
  for (const auto& t : entries) {
    if (t.weight != 0.0 && get(t.s, t.l) != 0.0)
      throw ArgumentError("duplicate entry for pair (" + std::to_string(t.s) + "," +
                          std::to_string(t.l) + ")");
    set(t.s, t.l, t.weight);
  }
}

void SymmetricNetwork::check_index(std::size_t s, std::size_t l) const {
  if (s >= p() || l >= p())
    throw ArgumentError("node index out of range: (" + std::to_string(s) + "," +
                        std::to_string(l) + ") with p=" + std::to_string(p()));
}

double SymmetricNetwork::get(std::size_t s, std::size_t l) const {
  check_index(s, l);
  if (s == l) return diag_[s];
  const auto& row = adj_[s];
  auto it = std::lower_bound(row.begin(), row.end(), l,
                             [](const Neighbor& n, std::size_t v) { return n.node < v; });
  return (it != row.end() && it->node == l) ? it->weight : 0.0;
}

void SymmetricNetwork::set(std::size_t s, std::size_t l, double weight) {
  check_index(s, l);
  if (!std::isfinite(weight)) throw ArgumentError("network weights must be finite");
  if (s == l) {
    diag_[s] = weight;
    return;
  }
  auto put = [weight](std::vector<Neighbor>& row, std::size_t v) {
    auto it = std::lower_bound(row.begin(), row.end(), v,
                               [](const Neighbor& n, std::size_t x) { return n.node < x; });
    const bool present = it != row.end() && it->node == v;
    if (weight == 0.0) {
      if (present) row.erase(it);
    } else if (present) {
      it->weight = weight;
    } else {
      row.insert(it, Neighbor{v, weight});
    }
  };
  put(adj_[s], l);
  put(adj_[l], s);
}

std::size_t SymmetricNetwork::max_degree() const noexcept {
  std::size_t d = 0;
  for (const auto& row : adj_) d = std::max(d, row.size());
  return d;
}

std::vector<Triplet> SymmetricNetwork::entries() const {
  std::vector<Triplet> out;
  for (std::size_t s = 0; s < p(); ++s) {
    if (diag_[s] != 0.0) out.push_back({s, s, diag_[s]});
    for (const auto& n : adj_[s])
      if (n.node > s) out.push_back({s, n.node, n.weight});
  }
  return out;
}

std::size_t SymmetricNetwork::nonzeros() const noexcept {
  std::size_t count = 0;
  for (std::size_t s = 0; s < p(); ++s) {
    if (diag_[s] != 0.0) ++count;
    for (const auto& n : adj_[s])
      if (n.node > s) ++count;
  }
  return count;
}

double SymmetricNetwork::norm2() const {
  double sum = 0.0;
  for (const auto& t : entries()) sum += t.weight * t.weight;
  return std::sqrt(sum);
}

double SymmetricNetwork::norm1() const {
  double sum = 0.0;
  for (const auto& t : entries()) sum += std::abs(t.weight);
  return sum;
}

std::vector<double> SymmetricNetwork::to_packed() const {
  std::vector<double> packed(packed_size(p()), 0.0);
  for (const auto& t : entries()) packed[packed_index(p(), t.s, t.l)] = t.weight;
  return packed;
}

SymmetricNetwork SymmetricNetwork::from_packed(std::size_t p, std::span<const double> packed) {
  if (packed.size() != packed_size(p)) throw ArgumentError("packed vector has wrong length");
  SymmetricNetwork net(p);
  for (std::size_t s = 0; s < p; ++s)
    for (std::size_t l = s; l < p; ++l) {
      const double w = packed[packed_index(p, s, l)];
      if (w != 0.0) net.set(s, l, w);
    }
  return net;
}

SymmetricNetwork SymmetricNetwork::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != p()) throw ArgumentError("permutation has wrong length");
  SymmetricNetwork out(p());
  for (const auto& t : entries()) out.set(perm[t.s], perm[t.l], t.weight);
  return out;
}

SymmetricNetwork SymmetricNetwork::restricted(std::span<const std::size_t> nodes) const {
  std::vector<std::size_t> local(p(), p());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    check_index(nodes[i], nodes[i]);
    local[nodes[i]] = i;
  }
  SymmetricNetwork out(nodes.size());
  for (const auto& t : entries()) {
    if (local[t.s] < p() && local[t.l] < p()) out.set(local[t.s], local[t.l], t.weight);
  }
  return out;
}

bool SymmetricNetwork::off_diagonal_nonnegative() const noexcept {
  for (const auto& row : adj_)
    for (const auto& n : row)
      if (n.weight < 0.0) return false;
  return true;
}

namespace {
SymmetricNetwork combine(const SymmetricNetwork& x, const SymmetricNetwork& y, double sign) {
  if (x.p() != y.p()) throw ArgumentError("network dimension mismatch");
  std::vector<double> px = x.to_packed();
  const std::vector<double> py = y.to_packed();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] += sign * py[i];
  return SymmetricNetwork::from_packed(x.p(), px);
}
}  // namespace

SymmetricNetwork operator+(const SymmetricNetwork& x, const SymmetricNetwork& y) {
  return combine(x, y, 1.0);
}

SymmetricNetwork operator-(const SymmetricNetwork& x, const SymmetricNetwork& y) {
  return combine(x, y, -1.0);
}

SymmetricNetwork operator*(double c, const SymmetricNetwork& x) {
  SymmetricNetwork out(x.p());
  for (const auto& t : x.entries()) out.set(t.s, t.l, c * t.weight);
  return out;
}

}  // namespace mrfnet
