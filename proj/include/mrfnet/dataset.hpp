#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mrfnet/interaction.hpp"

namespace mrfnet {

using Code = std::uint8_t;

// n observations of p nodes, row-major, every cell an alphabet code.
class Dataset {
 public:
  Dataset(std::size_t n, std::size_t p, std::vector<Code> cells);
  // Convenience for tests and small literals.
  static Dataset from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }
  std::span<const Code> row(std::size_t i) const { return {cells_.data() + i * p_, p_}; }
  Code at(std::size_t i, std::size_t s) const { return cells_[i * p_ + s]; }
  const std::vector<Code>& cells() const noexcept { return cells_; }

  // Throws ArgumentError naming the first cell outside the alphabet.
  void check_alphabet(const Alphabet& alphabet) const;
  // Indices of columns holding a single value.
  std::vector<std::size_t> constant_columns() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<Code> cells_;
};

}  // namespace mrfnet
