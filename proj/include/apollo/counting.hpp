#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "apollo/cusp_quotient.hpp"
#include "apollo/packing.hpp"

namespace apollo {

/// Hausdorff dimension of the Apollonian limit set, used as the reference exponent.
inline constexpr double kApollonianDelta = 1.305688;

struct CountSeries {
  std::string mode;  // "curvature" or "intersection"
  std::vector<double> thresholds;
  std::vector<std::uint64_t> counts;
};

struct ExponentFit {
  double delta_hat = 0;
  double lo = 0, hi = 0;
  double residual = 0;  // sum of squared residuals of the log-log fit
  std::size_t n_points = 0;
  std::string method = "ols-loglog";
};

/// Thresholds 10^(j/per_decade) in [lo, hi].
inline std::vector<double> geometric_grid(double lo, double hi, int per_decade = 32) {
  if (!(lo > 0) || !(hi >= lo)) throw DomainError("grid needs 0 < lo <= hi");
  const long j0 = static_cast<long>(std::ceil(per_decade * std::log10(lo) - 1e-9));
  const long j1 = static_cast<long>(std::floor(per_decade * std::log10(hi) + 1e-9));
  std::vector<double> out;
  for (long j = j0; j <= j1; ++j) out.push_back(std::pow(10.0, static_cast<double>(j) / per_decade));
  return out;
}

/// Least-squares slope of log(count) against log(threshold) over [lo, hi].
inline ExponentFit fit_exponent(const CountSeries& s, double lo, double hi) {
  std::vector<double> x, y;
  const double eps = 1e-9;
  for (std::size_t i = 0; i < s.thresholds.size(); ++i) {
    const double t = s.thresholds[i];
    if (t < lo * (1 - eps) || t > hi * (1 + eps) || s.counts[i] < 10) continue;
    x.push_back(std::log(t));
    y.push_back(std::log(static_cast<double>(s.counts[i])));
  }
  if (x.size() < 5)
    throw InsufficientData("exponent fit needs at least 5 points with count >= 10 in range; have " +
                           std::to_string(x.size()));
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) throw InsufficientData("exponent fit needs distinct thresholds");
  ExponentFit f;
  f.delta_hat = sxy / sxx;
  const double icpt = my - f.delta_hat * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (icpt + f.delta_hat * x[i]);
    f.residual += r * r;
  }
  f.lo = lo;
  f.hi = hi;
  f.n_points = x.size();
  return f;
}

/// floor(t^2) on a geometric grid; exponent 2 by construction.
inline CountSeries synthetic_square_series(double lo = 10, double hi = 1000) {
  CountSeries s;
  s.mode = "synthetic";
  s.thresholds = geometric_grid(lo, hi);
  for (double t : s.thresholds) s.counts.push_back(static_cast<std::uint64_t>(std::floor(t * t)));
  return s;
}

// ------------------------------------------------------------ curvature mode

struct CurvatureCount {
  CountSeries series;
  QuotientRecord record;
  std::vector<double> curvatures;  // chart curvature of each representative, ascending
  Integer max_h;
};

/// Counts orbit elements of the face class, one per cusp-translation class, by chart curvature.
/// The strip packing has infinitely many circles of each curvature, so the count is per period.
inline CurvatureCount count_by_curvature(const Case& c, double t_max, unsigned workers = 1,
                                         std::size_t max_elements = 20'000'000) {
  if (!c.face) throw ConfigError("case has no face vector");
  if (!(t_max > 0)) throw DomainError("T_max must be positive");
  const auto chart = make_chart(c);
  const GeneratorSet gs = packing_generators(c, GeneratorChoice::Derived);
  const Integer nn = -norm(c.ctx, *c.face);
  // curvature <= T  <=>  h^2 <= T^2 scale^2 (-n.n)
  const Rational tq(t_max);
  const Rational bound = tq * tq * chart->scale_sq() * nn;
  CurvatureCount out;
  out.max_h = isqrt(floor(bound));
  CuspQuotient q(c.ctx, *chart, gs);
  QuotientBudget b;
  b.max_h = out.max_h;
  b.workers = workers;
  b.max_elements = max_elements;
  out.record = q.enumerate(*c.face, b);

  out.series.mode = "curvature";
  out.series.thresholds = geometric_grid(1.0, t_max);
  const double s2 = to_double(chart->scale_sq()), nd = to_double(nn);
  for (const auto& h : out.record.h) {
    const double hd = to_double(h);
    out.curvatures.push_back(std::sqrt(hd * hd / nd / s2));
  }
  for (double t : out.series.thresholds) {
    const Rational tr(t);
    const Rational lim = tr * tr * chart->scale_sq() * nn;
    // h sorted ascending; count h with h^2 <= lim
    const auto it = std::partition_point(out.record.h.begin(), out.record.h.end(),
                                         [&](const Integer& h) { return Rational(h * h) <= lim; });
    out.series.counts.push_back(static_cast<std::uint64_t>(it - out.record.h.begin()));
  }
  return out;
}

// ------------------------------------------------------------- orbital mode

struct OrbitalCount {
  CountSeries series;
  LatticeVector D;
  std::vector<Integer> values;  // |x.D| for every counted element, ascending
  std::size_t descent_checked = 0;
  std::size_t descent_violations = 0;
};

/// Counts Gamma-images x of C with |x.D| < B, best-first in |x.D|.
/// Completeness rests on every image having a generator neighbour with smaller |x.D|;
/// that is checked for each element found and violations are reported.
inline OrbitalCount count_orbital(const GramContext& ctx, const LatticeVector& E, const LatticeVector& face,
                                  const GeneratorSet& gs, const LatticeVector& C, const LatticeVector& D,
                                  double b_max, unsigned workers = 1, std::size_t max_elements = 20'000'000) {
  if (norm(ctx, D) <= 0) throw ChamberError("D.D = " + norm(ctx, D).str() + " is not positive");
  const auto walls = gs.normals();
  const auto eps = inward_orientation(ctx, E, walls);
  const auto verdict = chamber_test(ctx, E, face, walls, eps, D);
  if (!verdict.ok) throw ChamberError("D = " + D.to_string() + " fails the chamber test: " + verdict.reason);

  const std::size_t k = ctx.dim();
  const PackedMat J = PackedMat::from(ctx.gram());
  const PackedVec je = J.apply(pack(E));
  const PackedVec jd = J.apply(pack(D));
  std::vector<PackedMat> mats;
  for (const auto& g : gs.gens) mats.push_back(PackedMat::from(g.matrix.integer_entries()));
  const i128 B = static_cast<i128>(std::ceil(b_max));  // strict bound x.D < b_max
  auto value = [&](const PackedVec& v) {
    const i128 a = dot_wide(jd, v, k);
    return a < 0 ? -a : a;
  };

  OrbitalCount out;
  out.D = D;
  std::unordered_set<PackedVec, PackedVecHash> seen;
  std::map<std::int64_t, std::vector<PackedVec>> pending;
  const PackedVec s0 = canonical_packed(pack(C), je, k);
  std::vector<std::pair<std::int64_t, PackedVec>> done;
  if (value(s0) < B) {
    seen.insert(s0);
    pending[narrow(value(s0))].push_back(s0);
  }
  while (!pending.empty()) {
    auto it = pending.begin();
    const std::int64_t a = it->first;
    std::vector<PackedVec> batch = std::move(it->second);
    pending.erase(it);
    std::sort(batch.begin(), batch.end());
    std::vector<std::vector<PackedVec>> nb(batch.size());
    std::vector<char> descends(batch.size(), 0);
    parallel_for(batch.size(), workers, [&](std::size_t i) {
      for (const auto& m : mats) {
        const PackedVec y = canonical_packed(m.apply(batch[i]), je, k);
        const i128 ay = value(y);
        if (ay < a) descends[i] = 1;
        if (ay < B) nb[i].push_back(y);
      }
    });
    for (std::size_t i = 0; i < batch.size(); ++i) {
      done.emplace_back(a, batch[i]);
      if (!(batch[i] == s0)) {
        ++out.descent_checked;
        if (!descends[i]) ++out.descent_violations;
      }
      for (const auto& y : nb[i])
        if (seen.insert(y).second) pending[narrow(value(y))].push_back(y);
    }
    if (seen.size() > max_elements)
      throw BudgetExceeded("orbital count exceeded " + std::to_string(max_elements) + " elements; complete below B = " +
                           std::to_string(a));
  }
  std::sort(done.begin(), done.end());
  for (const auto& [a, v] : done) out.values.emplace_back(static_cast<long long>(a));

  out.series.mode = "intersection";
  const double start = std::max(1.0, to_double(pair(ctx, C, D) < 0 ? Integer(-pair(ctx, C, D)) : pair(ctx, C, D)));
  out.series.thresholds = geometric_grid(start, b_max);
  for (double t : out.series.thresholds) {
    const Rational tr(t);
    const auto it = std::partition_point(out.values.begin(), out.values.end(),
                                         [&](const Integer& a) { return Rational(a) < tr; });
    out.series.counts.push_back(static_cast<std::uint64_t>(it - out.values.begin()));
  }
  return out;
}

/// The B-interval over which the orbital counts run from n_lo to n_hi.
inline std::pair<double, double> matched_range(const OrbitalCount& oc, std::uint64_t n_lo, std::uint64_t n_hi) {
  if (n_lo == 0 || n_hi < n_lo || n_hi > oc.values.size())
    throw InsufficientData("orbital enumeration does not reach the requested counts");
  // count(B) = #{a < B}; count reaches n at B = a_(n) + 1
  return {to_double(oc.values[n_lo - 1]) + 1.0, to_double(oc.values[n_hi - 1]) + 1.0};
}

}  // namespace apollo
