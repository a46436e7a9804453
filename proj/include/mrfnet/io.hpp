#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mrfnet/dataset.hpp"
#include "mrfnet/network.hpp"

namespace mrfnet::io {

// Data CSV: header x0,x1,...,x{p-1}; one row per observation; integer codes; LF.
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);

// Estimate CSV: header s,l,weight; nonzero upper-triangle entries with
// 17 significant digits.
void write_network_csv(std::ostream& out, const SymmetricNetwork& theta);
// p defaults to 1 + the largest index mentioned.
SymmetricNetwork read_network_csv(std::istream& in, std::optional<std::size_t> p = std::nullopt);

// Shortest-exact decimal for doubles used in CSV/JSON outputs ("%.17g").
std::string format_double(double v);

void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace mrfnet::io
