#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace tropsvm {

// Additive identity of the max-plus semiring. Used only inside scalar
// operations; points never store it.
inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// a (+) b = max(a, b)
double trop_add(double a, double b);

// a (.) b = a + b, absorbing -inf
double trop_mul(double a, double b);

// A point of the tropical projective torus R^d / R*1, stored in canonical
// form: the representative with first coordinate 0. Torus equality is then
// plain componentwise comparison.
class TropPoint {
 public:
  explicit TropPoint(std::vector<double> coords);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }  // 0-based
  const std::vector<double>& coords() const { return coords_; }

  bool operator==(const TropPoint&) const = default;

 private:
  std::vector<double> coords_;
};

// Normal vector of a tropical hyperplane H_omega. Kept raw (not normalized);
// hyperplanes defined by vectors differing by a constant shift coincide.
struct TropHyperplane {
  std::vector<double> omega;
  std::size_t dim() const { return omega.size(); }
};

// 1-based coordinate indices, sorted ascending.
using SectorSet = std::vector<int>;

// a (.) v (+) b (.) w, coordinatewise, renormalized.
TropPoint trop_combine(double a, const TropPoint& v, double b, const TropPoint& w);

// Generalized Hilbert projective metric:
// max_i(v_i - w_i) - min_i(v_i - w_i).
double trop_distance(const TropPoint& v, const TropPoint& w);

// Tropical distance from x to H_omega: largest minus second largest
// coordinate of omega + x.
double dist_to_hyperplane(const TropPoint& x, const TropHyperplane& h);

// Indices i with omega_i + x_i within tol of max_k(omega_k + x_k).
// Singleton: x lies in that open sector. Two or more: x on the hyperplane.
SectorSet sector_membership(const TropPoint& x, const TropHyperplane& h,
                            double tol = 1e-9);

// Breakpoints (pseudo-vertices) of the tropical line segment tconv({v, w}),
// ordered from v to w. At most d points.
std::vector<TropPoint> trop_segment(const TropPoint& v, const TropPoint& w);

}  // namespace tropsvm
