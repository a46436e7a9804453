#pragma once

namespace mrfnet {

enum class PenaltyFamily { L1, SCAD };

struct PenaltyConfig {
  PenaltyFamily family = PenaltyFamily::L1;
  double lambda = 0.0;
  double scad_a = 3.7;

  // Throws ArgumentError unless lambda >= 0 (finite) and scad_a > 2.
  void validate() const;
};

struct PenaltyValue {
  double value;
  double derivative;
};

// q_lambda(t) and q'_lambda(t) for t >= 0. At t = 0 the derivative is the
// right limit.
PenaltyValue penalty(const PenaltyConfig& pen, double t);

// argmin_z 0.5 (z - v)^2 + step * q_lambda(|z|): soft-thresholding for L1,
// the exact global minimizer of the piecewise-quadratic problem for SCAD.
double penalty_prox(const PenaltyConfig& pen, double v, double step);

const char* to_string(PenaltyFamily family);
PenaltyFamily penalty_family_from_string(const char* name);

}  // namespace mrfnet
