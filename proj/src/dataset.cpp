#include "mrfnet/dataset.hpp"

#include <string>

#include "mrfnet/errors.hpp"

namespace mrfnet {

Dataset::Dataset(std::size_t n, std::size_t p, std::vector<Code> cells)
    : n_(n), p_(p), cells_(std::move(cells)) {
  if (n_ < 1 || p_ < 1) throw ArgumentError("dataset needs n >= 1 and p >= 1");
  if (cells_.size() != n_ * p_) throw ArgumentError("dataset cell count != n * p");
}

Dataset Dataset::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw ArgumentError("dataset needs n >= 1 and p >= 1");
  const std::size_t p = rows.front().size();
  std::vector<Code> cells;
  cells.reserve(rows.size() * p);
  for (const auto& r : rows) {
    if (r.size() != p) throw ArgumentError("ragged dataset rows");
    for (int v : r) {
      if (v < 0 || v >= static_cast<int>(Alphabet::kMaxSize))
        throw ArgumentError("dataset code out of range: " + std::to_string(v));
      cells.push_back(static_cast<Code>(v));
    }
  }
  return Dataset(rows.size(), p, std::move(cells));
}

void Dataset::check_alphabet(const Alphabet& alphabet) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t s = 0; s < p_; ++s)
      if (!alphabet.contains(at(i, s)))
        throw ArgumentError("invalid code " + std::to_string(at(i, s)) + " at row " +
                            std::to_string(i) + ", node " + std::to_string(s));
}

std::vector<std::size_t> Dataset::constant_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < p_; ++s) {
    bool constant = true;
    for (std::size_t i = 1; i < n_ && constant; ++i) constant = at(i, s) == at(0, s);
    if (constant) out.push_back(s);
  }
  return out;
}

}  // namespace mrfnet
