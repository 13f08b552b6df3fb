#include "realitygame/reality_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace rg {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Multiples of 1/3 are not representable; treat 3p within this of an integer
// as sitting on the jump itself.
constexpr double kJumpSnap = 1e-12;

void check_domain(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("aggregate bet outside [0,1]");
}

std::string trim_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

RealityMap RealityMap::constant(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError("constant map level outside [0,1]");
  return RealityMap(MapKind::constant, c);
}

RealityMap RealityMap::self_defeating() { return RealityMap(MapKind::self_defeating, 0.0); }

RealityMap RealityMap::arctan_family(double a) {
  if (!(a > 0.0)) throw DomainError("arctan family needs a positive center slope");
  return RealityMap(MapKind::arctan_family, a);
}

RealityMap RealityMap::identity() { return RealityMap(MapKind::identity, 0.0); }

RealityMap RealityMap::multimodal() { return RealityMap(MapKind::multimodal, 0.0); }

RealityMap RealityMap::piecewise_linear(std::vector<double> ps, std::vector<double> qs) {
  if (ps.size() != qs.size() || ps.size() < 2)
    throw DomainError("piecewise map needs >= 2 (p, q) pairs of equal count");
  if (ps.front() != 0.0 || ps.back() != 1.0)
    throw DomainError("piecewise breakpoints must start at 0 and end at 1");
  for (std::size_t i = 1; i < ps.size(); ++i)
    if (!(ps[i] > ps[i - 1])) throw DomainError("piecewise breakpoints must be strictly increasing");
  for (double& q : qs) q = std::clamp(q, 0.0, 1.0);
  RealityMap m(MapKind::piecewise_linear, 0.0);
  m.xs_ = std::move(ps);
  m.ys_ = std::move(qs);
  return m;
}

RealityMap RealityMap::parse_piecewise(std::istream& in, const std::string& origin) {
  std::vector<double> ps, qs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double p, q;
    if (!(row >> p)) continue;  // blank or comment-only line
    if (!(row >> q)) throw ParseError(origin, lineno, 1, "expected two columns 'p q'");
    std::string extra;
    if (row >> extra) throw ParseError(origin, lineno, 1, "trailing text after the two columns");
    ps.push_back(p);
    qs.push_back(q);
  }
  if (ps.size() < 2) throw ParseError(origin, lineno, 1, "need at least two (p, q) rows");
  return piecewise_linear(std::move(ps), std::move(qs));
}

RealityMap RealityMap::load_piecewise(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open piecewise map file: " + path);
  return parse_piecewise(in, path);
}

std::string RealityMap::family() const {
  switch (kind_) {
    case MapKind::constant: return "constant";
    case MapKind::self_defeating: return "self-defeating";
    case MapKind::arctan_family: return "arctan";
    case MapKind::identity: return "identity";
    case MapKind::multimodal: return "multimodal";
    case MapKind::piecewise_linear: return "piecewise";
  }
  return "?";
}

std::string RealityMap::label() const {
  switch (kind_) {
    case MapKind::constant: return "constant(" + trim_number(param_) + ")";
    case MapKind::arctan_family: return "arctan(" + trim_number(param_) + ")";
    case MapKind::piecewise_linear:
      return "piecewise(" + std::to_string(xs_.size()) + " pts)";
    default: return family();
  }
}

double RealityMap::evaluate(double p) const {
  check_domain(p);
  switch (kind_) {
    case MapKind::constant:
      return param_;
    case MapKind::self_defeating:
      return 1.0 - p;
    case MapKind::identity:
      return p;
    case MapKind::arctan_family: {
      if (p == 0.0) return 0.0;  // continuation of the 0/0 endpoint
      if (p == 1.0) return 1.0;
      const double den = 4.0 * p * (1.0 - p);  // = 1 - (2p-1)^2
      const double q = 0.5 + std::atan(kPi * param_ * (p - 0.5) / den) / kPi;
      return std::clamp(q, 0.0, 1.0);
    }
    case MapKind::multimodal: {
      const double x = 3.0 * p;
      const double k = std::round(x);
      if (std::abs(x - k) <= kJumpSnap) {
        // On the jump: lower branch (3p mod 1 = 0), except p = 1 where the
        // final segment closes at q = 1 and the diagonal crossing survives.
        return k == 3.0 ? 1.0 : 0.0;
      }
      return x - std::floor(x);
    }
    case MapKind::piecewise_linear: {
      auto hi = std::upper_bound(xs_.begin(), xs_.end(), p);
      if (hi == xs_.end()) return ys_.back();  // p == 1
      if (hi == xs_.begin()) return ys_.front();
      const std::size_t j = static_cast<std::size_t>(hi - xs_.begin());
      const double t = (p - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
      return ys_[j - 1] + t * (ys_[j] - ys_[j - 1]);
    }
  }
  throw Error("unreachable map kind");
}

double RealityMap::slope_at(double p) const {
  check_domain(p);
  switch (kind_) {
    case MapKind::constant:
      return 0.0;
    case MapKind::self_defeating:
      return -1.0;
    case MapKind::identity:
      return 1.0;
    case MapKind::arctan_family: {
      // d/dp of the arctan form simplifies to
      //   a (p^2 + (1-p)^2) / (8 p^2 (1-p)^2 + pi^2 a^2 (p - 1/2)^2 / 2),
      // finite on all of [0,1]: a at the center, 8/(pi^2 a) at the endpoints.
      const double a = param_;
      const double u = p * (1.0 - p);
      const double num = a * (p * p + (1.0 - p) * (1.0 - p));
      const double den = 8.0 * u * u + 0.5 * kPi * kPi * a * a * (p - 0.5) * (p - 0.5);
      return num / den;
    }
    case MapKind::multimodal: {
      const double x = 3.0 * p;
      if (std::abs(x - 1.0) <= kJumpSnap || std::abs(x - 2.0) <= kJumpSnap)
        throw NotDifferentiableError("multimodal map jumps at p = 1/3 and 2/3");
      return 3.0;
    }
    case MapKind::piecewise_linear: {
      const double h = 1e-6;
      if (p < h) return (evaluate(p + h) - evaluate(p)) / h;
      if (p > 1.0 - h) return (evaluate(p) - evaluate(p - h)) / h;
      return (evaluate(p + h) - evaluate(p - h)) / (2.0 * h);
    }
  }
  throw Error("unreachable map kind");
}

FixedPointScan RealityMap::fixed_points() const {
  FixedPointScan scan;
  auto add = [&](double loc, double slope, bool jump = false) {
    FixedPointInfo fp;
    fp.location = loc;
    fp.slope = slope;
    fp.stable = jump || slope < 1.0;
    fp.boundary = loc == 0.0 || loc == 1.0;
    fp.discontinuity = jump;
    scan.points.push_back(fp);
  };
  switch (kind_) {
    case MapKind::constant:
      add(param_, 0.0);
      return scan;
    case MapKind::self_defeating:
      add(0.5, -1.0);
      return scan;
    case MapKind::identity:
      scan.continuum = true;
      return scan;
    case MapKind::arctan_family: {
      const double boundary_slope = 8.0 / (kPi * kPi * param_);
      add(0.0, boundary_slope);
      add(0.5, param_);
      add(1.0, boundary_slope);
      return scan;
    }
    case MapKind::multimodal: {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      add(0.0, 3.0);
      add(1.0 / 3.0, nan, /*jump=*/true);
      add(0.5, 3.0);
      add(2.0 / 3.0, nan, /*jump=*/true);
      add(1.0, 3.0);
      return scan;
    }
    case MapKind::piecewise_linear: {
      std::vector<double> roots;
      auto f = [&](double p) { return evaluate(p) - p; };
      for (std::size_t j = 1; j < xs_.size(); ++j) {
        double lo = xs_[j - 1], hi = xs_[j];
        double flo = f(lo), fhi = f(hi);
        if (flo == 0.0 && fhi == 0.0) {
          // Segment rides the diagonal: a continuum, like the identity map.
          scan.continuum = true;
          roots.push_back(lo);
          roots.push_back(hi);
          continue;
        }
        if (flo == 0.0) roots.push_back(lo);
        if (fhi == 0.0) roots.push_back(hi);
        if (flo * fhi < 0.0) {
          for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (fm == 0.0) { lo = hi = mid; break; }
            if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; } else { hi = mid; }
          }
          roots.push_back(0.5 * (lo + hi));
        }
      }
      std::sort(roots.begin(), roots.end());
      for (double r : roots) {
        if (!scan.points.empty() && std::abs(scan.points.back().location - r) < 1e-9) continue;
        add(r, slope_at(r));
      }
      return scan;
    }
  }
  throw Error("unreachable map kind");
}

}  // namespace rg
