#include "mrfnet/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "mrfnet/errors.hpp"

namespace mrfnet::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

template <class T>
T parse_number(const std::string& field, std::size_t line_no) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ArgumentError("line " + std::to_string(line_no) + ": cannot parse '" + field + "'");
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t s = 0; s < data.p(); ++s) out << (s ? ",x" : "x") << s;
  out << '\n';
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t s = 0; s < data.p(); ++s) {
      if (s) out << ',';
      out << static_cast<int>(data.at(i, s));
    }
    out << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("data CSV is empty");
  const std::size_t p = split(line).size();
  std::vector<Code> cells;
  std::size_t n = 0, line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != p)
      throw ArgumentError("line " + std::to_string(line_no) + ": expected " + std::to_string(p) +
                          " fields");
    for (const auto& f : fields) {
      const int v = parse_number<int>(f, line_no);
      if (v < 0 || v > 255) throw ArgumentError("line " + std::to_string(line_no) + ": bad code");
      cells.push_back(static_cast<Code>(v));
    }
    ++n;
  }
  if (n == 0) throw ArgumentError("data CSV has no rows");
  return Dataset(n, p, std::move(cells));
}

void write_network_csv(std::ostream& out, const SymmetricNetwork& theta) {
  out << "s,l,weight\n";
  for (const auto& t : theta.entries()) out << t.s << ',' << t.l << ',' << format_double(t.weight) << '\n';
}

SymmetricNetwork read_network_csv(std::istream& in, std::optional<std::size_t> p) {
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("estimate CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s,l,weight") throw ArgumentError("estimate CSV header must be s,l,weight");
  std::vector<Triplet> triplets;
  std::size_t max_index = 0, line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != 3)
      throw ArgumentError("line " + std::to_string(line_no) + ": expected s,l,weight");
    Triplet t{parse_number<std::size_t>(fields[0], line_no),
              parse_number<std::size_t>(fields[1], line_no),
              parse_number<double>(fields[2], line_no)};
    if (t.s > t.l) std::swap(t.s, t.l);
    max_index = std::max(max_index, t.l);
    triplets.push_back(t);
  }
  const std::size_t dim = p.value_or(triplets.empty() ? 1 : max_index + 1);
  return SymmetricNetwork(dim, triplets);
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw ArgumentError("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mrfnet::io
