#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "realitygame/errors.hpp"

namespace rg {

enum class MapKind {
  constant,        // q(p) = c
  self_defeating,  // q(p) = 1 - p
  arctan_family,   // sigmoid through (1/2, 1/2) with slope alpha there
  identity,        // q(p) = p
  multimodal,      // q(p) = 3p mod 1
  piecewise_linear
};

struct FixedPointInfo {
  double location = 0.0;
  double slope = 0.0;          // NaN for discontinuity markers
  bool stable = false;         // slope < 1; always true for markers (they attract)
  bool boundary = false;       // location is 0 or 1
  bool discontinuity = false;  // jump the dynamics pin to, not a root of q(p) = p
};

struct FixedPointScan {
  bool continuum = false;  // every p is fixed (identity); points is then empty
  std::vector<FixedPointInfo> points;
};

// How the objective heads probability reacts to the crowd's aggregate bet.
class RealityMap {
 public:
  static RealityMap constant(double c = 0.5);
  static RealityMap self_defeating();
  // q(p) = 1/2 + atan(pi a (p - 1/2) / (1 - (2p-1)^2)) / pi, continued to
  // q(0) = 0, q(1) = 1. `a` is the slope at the center and must be positive.
  static RealityMap arctan_family(double a);
  static RealityMap identity();
  static RealityMap multimodal();
  static RealityMap piecewise_linear(std::vector<double> ps, std::vector<double> qs);

  // Two columns "p q" per line, '#' comments. p must be strictly increasing
  // and start at 0 / end at 1; q values are clamped into [0,1].
  static RealityMap load_piecewise(const std::string& path);
  static RealityMap parse_piecewise(std::istream& in, const std::string& origin = "<stream>");

  MapKind kind() const { return kind_; }
  double alpha() const { return param_; }  // arctan family
  double constant_value() const { return param_; }

  // "arctan(1.5)", "self-defeating", ... for reports and file names.
  std::string label() const;
  // Family name without parameters: "arctan", "constant", ...
  std::string family() const;

  // q(p); DomainError outside [0,1]. The multimodal jumps at 1/3 and 2/3 take
  // the lower branch when 3p lands on an integer to numerical precision,
  // except at p = 1 where the last segment closes at q = 1.
  double evaluate(double p) const;

  // dq/dp. Analytic for built-ins (one-sided limits at the arctan endpoints);
  // central finite difference (h = 1e-6, one-sided at 0 and 1) for piecewise
  // tables. NotDifferentiableError at a jump.
  double slope_at(double p) const;

  // Roots of q(p) = p with slope/stability, plus attractor markers at jumps.
  // Piecewise tables are scanned per segment by sign-change bisection.
  FixedPointScan fixed_points() const;

 private:
  RealityMap(MapKind kind, double param) : kind_(kind), param_(param) {}

  MapKind kind_;
  double param_ = 0.0;        // c or alpha
  std::vector<double> xs_;    // piecewise breakpoints
  std::vector<double> ys_;
};

}  // namespace rg
