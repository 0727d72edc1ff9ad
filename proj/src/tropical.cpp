#include "tropsvm/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace tropsvm {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

double trop_add(double a, double b) { return std::max(a, b); }

double trop_mul(double a, double b) {
  if (a == neg_inf || b == neg_inf) return neg_inf;
  return a + b;
}

TropPoint::TropPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw std::invalid_argument("TropPoint: dimension must be at least 2");
  }
  const double shift = coords_[0];
  if (!std::isfinite(shift)) {
    throw std::invalid_argument("TropPoint: coordinates must be finite");
  }
  coords_[0] = 0.0;
  for (std::size_t i = 1; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw std::invalid_argument("TropPoint: coordinates must be finite");
    }
    coords_[i] -= shift;
  }
}

TropPoint trop_combine(double a, const TropPoint& v, double b, const TropPoint& w) {
  require_same_dim(v.dim(), w.dim(), "trop_combine");
  std::vector<double> out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    out[i] = std::max(trop_mul(a, v[i]), trop_mul(b, w[i]));
    if (out[i] == neg_inf) {
      throw std::invalid_argument("trop_combine: both scalars are -inf");
    }
  }
  return TropPoint(std::move(out));
}

double trop_distance(const TropPoint& v, const TropPoint& w) {
  require_same_dim(v.dim(), w.dim(), "trop_distance");
  double lo = v[0] - w[0];
  double hi = lo;
  for (std::size_t i = 1; i < v.dim(); ++i) {
    const double diff = v[i] - w[i];
    lo = std::min(lo, diff);
    hi = std::max(hi, diff);
  }
  return hi - lo;
}

double dist_to_hyperplane(const TropPoint& x, const TropHyperplane& h) {
  require_same_dim(x.dim(), h.dim(), "dist_to_hyperplane");
  double top = neg_inf, second = neg_inf;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double y = h.omega[i] + x[i];
    if (y > top) {
      second = top;
      top = y;
    } else if (y > second) {
      second = y;
    }
  }
  return top - second;
}

SectorSet sector_membership(const TropPoint& x, const TropHyperplane& h, double tol) {
  require_same_dim(x.dim(), h.dim(), "sector_membership");
  double top = neg_inf;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    top = std::max(top, h.omega[i] + x[i]);
  }
  SectorSet out;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (h.omega[i] + x[i] >= top - tol) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

std::vector<TropPoint> trop_segment(const TropPoint& v, const TropPoint& w) {
  require_same_dim(v.dim(), w.dim(), "trop_segment");
  // Points of the segment are x(t) = 0 (.) v (+) t (.) w. The argmax pattern
  // of max(v_i, t + w_i) changes exactly at the thresholds t = v_i - w_i;
  // below the smallest threshold x = v, above the largest x = w.
  std::set<double> thresholds;
  for (std::size_t i = 0; i < v.dim(); ++i) thresholds.insert(v[i] - w[i]);
  std::vector<TropPoint> out;
  for (double t : thresholds) {
    TropPoint x = trop_combine(0.0, v, t, w);
    if (out.empty() || !(out.back() == x)) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace tropsvm
