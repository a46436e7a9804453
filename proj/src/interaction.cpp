#include "mrfnet/interaction.hpp"

#include <cmath>
#include <numeric>

#include "mrfnet/errors.hpp"

namespace mrfnet {

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size < 2 || size > kMaxSize)
    throw ArgumentError("alphabet size must be in [2, 64], got " + std::to_string(size));
}

Alphabet::Alphabet(const std::vector<int>& values) : Alphabet(values.size()) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != static_cast<int>(i))
      throw ArgumentError("alphabet codes must be 0..m-1 in ascending order");
  }
}

std::vector<int> Alphabet::values() const {
  std::vector<int> out(size_);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

void InteractionSpec::check_shapes() const {
  const std::size_t mm = alphabet.size();
  if (a.size() != mm || b0.size() != mm || b.size() != mm * mm)
    throw ArgumentError("interaction tables are not sized to the alphabet");
}

std::vector<std::string> validate_spec(const InteractionSpec& spec,
                                       const ValidateOptions& options) {
  spec.check_shapes();
  const std::size_t m = spec.m();
  std::vector<std::string> violations;

  bool symmetric = true;
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = u + 1; v < m; ++v)
      if (spec.B(u, v) != spec.B(v, u)) symmetric = false;
  if (!symmetric) violations.emplace_back("B not symmetric");

  if (options.require_diagonal_b0) {
    for (std::size_t u = 0; u < m; ++u) {
      if (spec.B(u, u) != spec.B0(u)) {
        violations.emplace_back("diag(B) != B0");
        break;
      }
    }
  }

  auto all_finite = [](const std::vector<double>& t) {
    for (double x : t)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!all_finite(spec.a)) violations.emplace_back("non-finite A");
  if (!all_finite(spec.b0)) violations.emplace_back("non-finite B0");
  if (!all_finite(spec.b)) violations.emplace_back("non-finite B");
  return violations;
}

InteractionSpec auto_logistic_spec() { return auto_binomial_spec(1); }

InteractionSpec auto_binomial_spec(int kappa) {
  if (kappa < 1) throw ArgumentError("auto-binomial kappa must be >= 1");
  if (static_cast<std::size_t>(kappa) + 1 > Alphabet::kMaxSize)
    throw ArgumentError("auto-binomial kappa exceeds the alphabet cap");
  const std::size_t m = static_cast<std::size_t>(kappa) + 1;
  InteractionSpec spec{Alphabet(m), std::vector<double>(m), std::vector<double>(m),
                       std::vector<double>(m * m)};
  for (std::size_t u = 0; u < m; ++u) {
    // log C(kappa, u) via lgamma; exact zero at the endpoints.
    const double k = kappa;
    const double x = static_cast<double>(u);
    spec.a[u] = (u == 0 || u == m - 1)
                    ? 0.0
                    : std::lgamma(k + 1) - std::lgamma(x + 1) - std::lgamma(k - x + 1);
    spec.b0[u] = x;
    for (std::size_t v = 0; v < m; ++v) spec.b[u * m + v] = x * static_cast<double>(v);
  }
  return spec;
}

bool is_supermodular(const InteractionSpec& spec) {
  const std::size_t m = spec.m();
  for (std::size_t u = 0; u + 1 < m; ++u)
    for (std::size_t v = 0; v + 1 < m; ++v) {
      const double d = spec.B(u + 1, v + 1) - spec.B(u, v + 1) - spec.B(u + 1, v) + spec.B(u, v);
      if (d < 0) return false;
    }
  return true;
}

}  // namespace mrfnet
