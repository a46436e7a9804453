#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mrfnet {

// Finite ordered alphabet of integer codes 0..m-1, 2 <= m <= 64.
class Alphabet {
 public:
  static constexpr std::size_t kMaxSize = 64;

  explicit Alphabet(std::size_t size);
  // Accepts an explicit code list; it must be exactly 0..m-1 in order.
  explicit Alphabet(const std::vector<int>& values);

  std::size_t size() const noexcept { return size_; }
  std::vector<int> values() const;
  bool contains(int code) const noexcept {
    return code >= 0 && static_cast<std::size_t>(code) < size_;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
};

// The functions A, B0 and B of an auto-model on a finite alphabet.
// `b` is stored row-major: b[u * m + v] = B(u, v).
struct InteractionSpec {
  Alphabet alphabet;
  std::vector<double> a;
  std::vector<double> b0;
  std::vector<double> b;

  std::size_t m() const noexcept { return alphabet.size(); }
  double A(std::size_t u) const { return a[u]; }
  double B0(std::size_t u) const { return b0[u]; }
  double B(std::size_t u, std::size_t v) const { return b[u * alphabet.size() + v]; }

  // Throws ArgumentError if the tables are not sized to the alphabet.
  void check_shapes() const;
};

struct ValidateOptions {
  // The paper-wide convention B(x, x) = B0(x). Auto-binomial with kappa >= 2
  // cannot satisfy it without changing the model, so it can be relaxed.
  bool require_diagonal_b0 = true;
};

// Names every violated invariant; empty means the spec is valid.
// Violation strings: "B not symmetric", "diag(B) != B0", "non-finite A",
// "non-finite B0", "non-finite B".
std::vector<std::string> validate_spec(const InteractionSpec& spec,
                                       const ValidateOptions& options = {});

// X = {0,1}, A = 0, B0(u) = u, B(u,v) = uv.
InteractionSpec auto_logistic_spec();

// X = {0..kappa}, A(u) = log C(kappa,u), B0(u) = u, B(u,v) = uv.
// Node conditionals are Binomial(kappa, logistic(theta(s,s) + sum theta(s,l) x_l)).
// For kappa >= 2 the table keeps B(u,u) = u*u, so the diag(B) = B0 check fails
// unless ValidateOptions::require_diagonal_b0 is off.
InteractionSpec auto_binomial_spec(int kappa);

// True when B(u+1,v+1) - B(u,v+1) - B(u+1,v) + B(u,v) >= 0 for all u, v,
// i.e. attractive couplings make node conditionals stochastically monotone.
bool is_supermodular(const InteractionSpec& spec);

}  // namespace mrfnet
