#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"

#include "mrfnet/errors.hpp"
#include "mrfnet/io.hpp"

using namespace mrfnet;

TEST_CASE("dataset csv round trip") {
  const auto d = Dataset::from_rows({{0, 1, 2}, {2, 2, 0}});
  std::ostringstream out;
  io::write_dataset_csv(out, d);
  CHECK(out.str() == "x0,x1,x2\n0,1,2\n2,2,0\n");
  std::istringstream in(out.str());
  CHECK(io::read_dataset_csv(in) == d);
}

TEST_CASE("dataset csv rejects malformed input") {
  std::istringstream ragged("x0,x1\n0,1\n1\n");
  CHECK_THROWS_AS(io::read_dataset_csv(ragged), ArgumentError);
  std::istringstream word("x0,x1\n0,a\n");
  CHECK_THROWS_AS(io::read_dataset_csv(word), ArgumentError);
  std::istringstream negative("x0\n-1\n");
  CHECK_THROWS_AS(io::read_dataset_csv(negative), ArgumentError);
  std::istringstream crlf("x0,x1\r\n0,1\r\n");
  CHECK(io::read_dataset_csv(crlf) == Dataset::from_rows({{0, 1}}));
}

TEST_CASE("network csv round trip is exact") {
  SplitMix64 rng(4);
  const auto t = fixtures::random_network(7, 0.5, -1.0, 1.0, rng);
  std::ostringstream out;
  io::write_network_csv(out, t);
  CHECK(out.str().rfind("s,l,weight\n", 0) == 0);
  std::istringstream in(out.str());
  CHECK(io::read_network_csv(in, 7) == t);

  SymmetricNetwork small(3);
  small.set(2, 0, 0.1);
  std::ostringstream o2;
  io::write_network_csv(o2, small);
  CHECK(o2.str() == "s,l,weight\n0,2,0.10000000000000001\n");
}

TEST_CASE("network csv infers the dimension and checks bounds") {
  std::istringstream in("s,l,weight\n1,4,0.5\n");
  CHECK(io::read_network_csv(in).p() == 5);
  std::istringstream out_of_range("s,l,weight\n1,4,0.5\n");
  CHECK_THROWS_AS(io::read_network_csv(out_of_range, 3), ArgumentError);
  std::istringstream header("a,b,c\n");
  CHECK_THROWS_AS(io::read_network_csv(header), ArgumentError);
}
