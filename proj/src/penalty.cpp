#include "mrfnet/penalty.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mrfnet/errors.hpp"

namespace mrfnet {

void PenaltyConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ArgumentError("penalty lambda must be finite and >= 0");
  if (!(scad_a > 2.0)) throw ArgumentError("SCAD shape a must be > 2");
}

PenaltyValue penalty(const PenaltyConfig& pen, double t) {
  if (!(t >= 0.0)) throw ArgumentError("penalty argument must be >= 0");
  const double lam = pen.lambda;
  if (pen.family == PenaltyFamily::L1) return {lam * t, lam};

  const double a = pen.scad_a;
  if (t <= lam) return {lam * t, lam};
  if (t <= a * lam)
    return {(2.0 * a * lam * t - t * t - lam * lam) / (2.0 * (a - 1.0)),
            (a * lam - t) / (a - 1.0)};
  return {lam * lam * (a + 1.0) / 2.0, 0.0};
}

double penalty_prox(const PenaltyConfig& pen, double v, double step) {
  const double w = std::abs(v);
  const double sign = v < 0.0 ? -1.0 : 1.0;
  const double lam = pen.lambda;
  if (pen.family == PenaltyFamily::L1) return sign * std::max(w - step * lam, 0.0);
  if (lam == 0.0) return v;

  // The scalar problem is piecewise quadratic on [0, lam], [lam, a lam] and
  // [a lam, inf); take the best of the clamped per-piece minimizers.
  const double a = pen.scad_a;
  auto phi = [&](double z) { return 0.5 * (z - w) * (z - w) + step * penalty(pen, z).value; };
  std::array<double, 6> candidates{};
  std::size_t count = 0;
  candidates[count++] = std::clamp(w - step * lam, 0.0, lam);
  const double curvature = 1.0 - step / (a - 1.0);
  if (curvature > 0.0) {
    candidates[count++] =
        std::clamp((w * (a - 1.0) - step * a * lam) / (a - 1.0 - step), lam, a * lam);
  } else {
    candidates[count++] = lam;
    candidates[count++] = a * lam;
  }
  candidates[count++] = std::max(w, a * lam);
  candidates[count++] = 0.0;

  double best = candidates[0];
  double best_val = phi(best);
  for (std::size_t i = 1; i < count; ++i) {
    const double val = phi(candidates[i]);
    if (val < best_val) {
      best_val = val;
      best = candidates[i];
    }
  }
  return sign * best;
}

const char* to_string(PenaltyFamily family) {
  return family == PenaltyFamily::L1 ? "l1" : "scad";
}

PenaltyFamily penalty_family_from_string(const char* name) {
  const std::string s(name);
  if (s == "l1" || s == "L1") return PenaltyFamily::L1;
  if (s == "scad" || s == "SCAD") return PenaltyFamily::SCAD;
  throw ArgumentError("unknown penalty family '" + s + "' (expected l1 or scad)");
}

}  // namespace mrfnet
