#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tropsvm/rng.hpp"
#include "tropsvm/svm_hard.hpp"
#include "tropsvm/tropical.hpp"

namespace tropsvm::testutil {

inline TropPoint random_point(std::size_t d, Rng& rng, double lo = 0.0, double hi = 10.0) {
  std::vector<double> c(d);
  for (double& v : c) v = rng.uniform(lo, hi);
  return TropPoint(std::move(c));
}

inline Points random_points(std::size_t n, std::size_t d, Rng& rng, double lo = 0.0,
                            double hi = 10.0) {
  Points out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(random_point(d, rng, lo, hi));
  return out;
}

// Residual of the hard-margin system at (z, omega): max over all rows of
// (lhs - rhs).
inline double hard_residual(const Points& p, const Points& q, const IndexAssignment& a,
                            double z, const TropHyperplane& w) {
  double worst = -1e300;
  auto rows_for = [&](const Points& pts, int i, int j) {
    for (const auto& x : pts) {
      const double xi = x[static_cast<std::size_t>(i - 1)];
      const double xj = x[static_cast<std::size_t>(j - 1)];
      const double wi = w.omega[static_cast<std::size_t>(i - 1)];
      const double wj = w.omega[static_cast<std::size_t>(j - 1)];
      worst = std::max(worst, z + xj + wj - xi - wi);
      worst = std::max(worst, wj - wi - (xi - xj));
      for (int l = 1; l <= static_cast<int>(x.dim()); ++l) {
        if (l == i || l == j) continue;
        const double xl = x[static_cast<std::size_t>(l - 1)];
        const double wl = w.omega[static_cast<std::size_t>(l - 1)];
        worst = std::max(worst, wl - wj - (xj - xl));
      }
    }
  };
  rows_for(p, a.i_p, a.j_p);
  rows_for(q, a.i_q, a.j_q);
  return worst;
}

// Samples a point whose largest coordinate of omega + x is i and second
// largest is j, with gap at least `margin` between them and at least a
// further small gap down to the rest.
inline TropPoint planted_point(const TropHyperplane& w, int i, int j, double margin, Rng& rng) {
  const std::size_t d = w.dim();
  std::vector<double> y(d);
  for (double& v : y) v = rng.uniform(0.0, 4.0);
  double rest_max = -1e300;
  for (std::size_t l = 0; l < d; ++l) {
    if (static_cast<int>(l) + 1 == i || static_cast<int>(l) + 1 == j) continue;
    rest_max = std::max(rest_max, y[l]);
  }
  y[static_cast<std::size_t>(j - 1)] = rest_max + rng.uniform(0.1, 1.0);
  y[static_cast<std::size_t>(i - 1)] =
      y[static_cast<std::size_t>(j - 1)] + margin + rng.uniform(0.0, 1.0);
  std::vector<double> x(d);
  for (std::size_t l = 0; l < d; ++l) x[l] = y[l] - w.omega[l];
  return TropPoint(std::move(x));
}

struct PlantedInstance {
  Points p, q;
  IndexAssignment assignment;
  TropHyperplane omega;
  double min_distance = 0.0;  // smallest distance of any point to the hyperplane
};

// Builds a feasible instance for the requested case pattern by planting a
// hyperplane and sampling each class with constant (i, j) indices.
inline PlantedInstance plant_instance(AssignmentCase kind, std::size_t d, std::size_t n,
                                      Rng& rng, double margin = 0.5) {
  const std::size_t needed = kind == AssignmentCase::Case1 ? 4
                             : kind == AssignmentCase::Case3 ? 2
                                                             : 3;
  if (d < needed) throw std::invalid_argument("plant_instance: dimension too small for case");
  PlantedInstance inst;
  std::vector<double> w(d);
  for (double& v : w) v = rng.uniform(-2.0, 2.0);
  inst.omega = TropHyperplane{std::move(w)};

  auto pick_distinct = [&](std::vector<int> taken) {
    for (;;) {
      const int v = 1 + static_cast<int>(rng.below(d));
      if (std::find(taken.begin(), taken.end(), v) == taken.end()) return v;
    }
  };
  int ip = pick_distinct({});
  int iq = pick_distinct({ip});
  int jp = 0, jq = 0;
  switch (kind) {
    case AssignmentCase::Case1:
      jp = pick_distinct({ip, iq});
      jq = pick_distinct({ip, iq, jp});
      break;
    case AssignmentCase::Case2a:
      jp = pick_distinct({ip, iq});
      jq = ip;
      break;
    case AssignmentCase::Case2b:
      jq = pick_distinct({ip, iq});
      jp = iq;
      break;
    case AssignmentCase::Case3:
      jp = iq;
      jq = ip;
      break;
    case AssignmentCase::Case4:
      jp = jq = pick_distinct({ip, iq});
      break;
  }
  inst.assignment = {ip, jp, iq, jq};
  inst.min_distance = 1e300;
  for (std::size_t k = 0; k < n; ++k) {
    inst.p.push_back(planted_point(inst.omega, ip, jp, margin, rng));
    inst.q.push_back(planted_point(inst.omega, iq, jq, margin, rng));
    inst.min_distance = std::min({inst.min_distance,
                                  dist_to_hyperplane(inst.p.back(), inst.omega),
                                  dist_to_hyperplane(inst.q.back(), inst.omega)});
  }
  return inst;
}

}  // namespace tropsvm::testutil
