#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apollo/lattice.hpp"

namespace apollo {

/// Primitive representative with E.n >= 0; ties broken by first nonzero coordinate positive.
inline LatticeVector canonicalize(const GramContext& ctx, const LatticeVector& E, const LatticeVector& n) {
  if (n.is_zero()) throw DomainError("cannot canonicalize the zero vector");
  LatticeVector p = n.primitive();
  const Integer h = pair(ctx, E, p);
  bool flip = h < 0;
  if (h == 0) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != 0) {
        flip = p[i] < 0;
        break;
      }
  }
  return flip ? -p : p;
}

/// (E.n)^2 / (-n.n), the squared curvature before any chart rescaling.
inline Rational curvature_sq(const GramContext& ctx, const LatticeVector& E, const LatticeVector& n) {
  if (norm(ctx, E) != 0) throw DomainError("cusp vector " + E.to_string() + " is not null");
  const Integer nn = norm(ctx, n);
  if (nn >= 0) throw DomainError("normal " + n.to_string() + " is not spacelike");
  const Integer h = pair(ctx, E, n);
  return ratio(h * h, -nn);
}

enum class PairClass { Intersecting, Tangent, Disjoint };

inline const char* to_string(PairClass c) {
  switch (c) {
    case PairClass::Intersecting: return "intersecting";
    case PairClass::Tangent: return "tangent";
    case PairClass::Disjoint: return "disjoint";
  }
  return "?";
}

/// Compares (n.m)^2 with (n.n)(m.m). Identical walls count as intersecting.
inline PairClass classify_pair(const GramContext& ctx, const LatticeVector& n, const LatticeVector& m) {
  const Integer nn = norm(ctx, n), mm = norm(ctx, m);
  if (nn >= 0 || mm >= 0) throw DomainError("classify_pair needs spacelike vectors");
  const Integer nm = pair(ctx, n, m);
  const Integer lhs = nm * nm, rhs = nn * mm;
  if (lhs < rhs) return PairClass::Intersecting;
  if (lhs == rhs) {
    // proportional vectors give the same wall
    if (n.primitive() == m.primitive() || n.primitive() == -m.primitive()) return PairClass::Intersecting;
    return PairClass::Tangent;
  }
  return PairClass::Disjoint;
}

/// (sum t)^2 == n * sum t^2 for n+2 mutually tangent spheres in R^n.
template <class T>
bool descartes_exact(const std::vector<T>& t, int n) {
  T s = 0, q = 0;
  for (const auto& x : t) {
    s += x;
    q += x * x;
  }
  return s * s == T(n) * q;
}

inline double descartes_defect(const std::vector<double>& t, int n) {
  double s = 0, q = 0;
  for (double x : t) {
    s += x;
    q += x * x;
  }
  return std::abs(s * s - n * q) / std::max(1.0, s * s);
}

inline bool descartes_float(const std::vector<double>& t, int n, double tol = 1e-9) {
  return descartes_defect(t, n) <= tol;
}

/// One element of a packing as seen in the boundary chart.
struct BoundarySphere {
  LatticeVector normal;
  Rational curvature_sq;  // (E.n)^2/(-n.n), unscaled
  double curvature = 0;   // chart curvature, sqrt(curvature_sq)/scale
  std::vector<double> center;  // empty for lines and planes
  double radius = 0;
  std::vector<double> line_normal;  // set for curvature 0: points X with X.g = offset
  double line_offset = 0;
  std::vector<int> word;

  bool is_flat() const { return center.empty(); }
};

/// Upper half-space chart of the boundary with E at infinity and F at the origin.
class BoundaryChart {
 public:
  /// Plain chart: F is the first small null vector with E.F != 0, scale 1.
  BoundaryChart(const GramContext& ctx, const LatticeVector& E) : ctx_(&ctx), E_(E) {
    init(std::nullopt);
  }

  /// Strip chart: the parallel walls u and v become X_last = 0 and X_last = 1.
  BoundaryChart(const GramContext& ctx, const LatticeVector& E, const LatticeVector& u, const LatticeVector& v)
      : ctx_(&ctx), E_(E) {
    init(std::make_pair(u, v));
  }

  const GramContext& ctx() const { return *ctx_; }
  const LatticeVector& E() const { return E_; }
  const LatticeVector& F() const { return F_; }
  double scale() const { return scale_; }
  const Rational& scale_sq() const { return scale_sq_; }
  std::size_t chart_dim() const { return v_.size(); }
  const std::vector<LatticeVector>& complement_basis() const { return v_; }
  bool strip_mode() const { return strip_; }

  /// Chart coordinates of a null vector P not proportional to E.
  std::vector<double> chart_point(const LatticeVector& P) const {
    if (norm(*ctx_, P) != 0) throw DomainError("chart_point needs a null vector, got " + P.to_string());
    const Integer pe = pair(*ctx_, P, E_);
    if (pe == 0) throw DomainError("point " + P.to_string() + " is the point at infinity");
    return coords(P, pe);
  }

  /// Chart coordinates of the centre R_n(E) of a sphere with nonzero curvature.
  std::vector<double> sphere_center(const LatticeVector& n) const {
    const Integer nn = norm(*ctx_, n);
    if (nn >= 0) throw DomainError("normal " + n.to_string() + " is not spacelike");
    const Integer h = pair(*ctx_, n, E_);
    if (h == 0) throw DomainError("center at infinity: " + n.to_string() + " has zero curvature");
    LatticeVector P = nn * E_ - (2 * h) * n;
    if (norm(*ctx_, P) != 0) throw DomainError("reflected cusp is not null");
    // P.v_j / P.E reduces to (n.v_j)/h since E.v_j = 0
    return coords(n, h);
  }

  /// Squared chart distance from the exact formula scale^2 * 2 P.Q / ((P.E)(Q.E)).
  Rational metric_sq(const LatticeVector& P, const LatticeVector& Q) const {
    const Integer pe = pair(*ctx_, P, E_), qe = pair(*ctx_, Q, E_);
    if (pe == 0 || qe == 0) throw DomainError("metric at the point at infinity");
    return scale_sq_ * ratio(2 * pair(*ctx_, P, Q), pe * qe);
  }

  BoundarySphere element(const LatticeVector& n, std::vector<int> word = {}) const {
    BoundarySphere b;
    b.normal = n;
    b.curvature_sq = apollo::curvature_sq(*ctx_, E_, n);
    b.curvature = std::sqrt(to_double(b.curvature_sq)) / scale_;
    b.word = std::move(word);
    if (b.curvature_sq > 0) {
      b.center = sphere_center(n);
      b.radius = scale_ / std::sqrt(to_double(b.curvature_sq));
    } else {
      // X.g = scale (F.n)/(E.F), with g_i = f_i . n
      b.line_normal.assign(v_.size(), 0.0);
      std::vector<double> nv(v_.size());
      for (std::size_t j = 0; j < v_.size(); ++j) nv[j] = to_double(pair(*ctx_, n, v_[j]));
      for (std::size_t i = 0; i < v_.size(); ++i)
        for (std::size_t j = 0; j < v_.size(); ++j) b.line_normal[i] += c_[i][j] * nv[j];
      b.line_offset = scale_ * to_double(ratio(pair(*ctx_, F_, n), ef_));
    }
    return b;
  }

 private:
  std::vector<double> coords(const LatticeVector& x, const Integer& denom) const {
    std::vector<double> q(v_.size());
    for (std::size_t j = 0; j < v_.size(); ++j) q[j] = to_double(ratio(pair(*ctx_, x, v_[j]), denom));
    std::vector<double> out(v_.size(), 0.0);
    for (std::size_t i = 0; i < v_.size(); ++i) {
      double s = 0;
      for (std::size_t j = 0; j < v_.size(); ++j) s += c_[i][j] * q[j];
      out[i] = scale_ * s;
    }
    return out;
  }

  /// (E.F) times the projection of x onto span{E,F}^perp; integral.
  LatticeVector project(const LatticeVector& x) const {
    const Integer xf = pair(*ctx_, x, F_), xe = pair(*ctx_, x, E_);
    return ef_ * x - xf * E_ - xe * F_;
  }

  void find_F(const std::optional<LatticeVector>& perp_to) {
    const std::size_t k = ctx_->dim();
    for (int height = 1; height <= 4; ++height) {
      std::vector<int> c(k, -height);
      while (true) {
        int mx = 0;
        for (int x : c) mx = std::max(mx, std::abs(x));
        if (mx == height) {
          LatticeVector f(k);
          for (std::size_t i = 0; i < k; ++i) f[i] = c[i];
          if (norm(*ctx_, f) == 0 && pair(*ctx_, f, E_) != 0 && (!perp_to || pair(*ctx_, f, *perp_to) == 0)) {
            F_ = pair(*ctx_, f, E_) > 0 ? f : -f;
            return;
          }
        }
        std::size_t i = 0;
        while (i < k && c[i] == height) c[i++] = -height;
        if (i == k) break;
        ++c[i];
      }
    }
    throw NoSolution("no small null vector pairs nontrivially with the cusp");
  }

  void init(const std::optional<std::pair<LatticeVector, LatticeVector>>& strip) {
    const GramContext& ctx = *ctx_;
    ctx.check(E_);
    if (norm(ctx, E_) != 0) throw DomainError("cusp vector " + E_.to_string() + " is not null");
    if (E_.is_zero()) throw DomainError("cusp vector is zero");
    strip_ = strip.has_value();
    if (strip_) {
      const auto& [u, v] = *strip;
      if (pair(ctx, u, E_) != 0 || pair(ctx, v, E_) != 0) throw DomainError("strip walls must pass through the cusp");
      if (norm(ctx, u) >= 0) throw DomainError("strip wall is not spacelike");
      find_F(u);
    } else {
      find_F(std::nullopt);
    }
    ef_ = pair(ctx, E_, F_);

    // spanning set of the complement, strip wall first
    std::vector<LatticeVector> cand;
    if (strip_) cand.push_back(strip->first);
    for (std::size_t i = 0; i < ctx.dim(); ++i) cand.push_back(project(ctx.basis(i)));
    const std::size_t m = ctx.dim() - 2;
    std::vector<LatticeVector> chosen;
    for (const auto& c : cand) {
      if (c.is_zero()) continue;
      RationalMatrix a(chosen.size() + 1, ctx.dim());
      for (std::size_t r = 0; r < chosen.size(); ++r)
        for (std::size_t j = 0; j < ctx.dim(); ++j) a(r, j) = chosen[r][j];
      for (std::size_t j = 0; j < ctx.dim(); ++j) a(chosen.size(), j) = c[j];
      if (rank(a) == chosen.size() + 1) chosen.push_back(c.primitive());
      if (chosen.size() == m) break;
    }
    if (chosen.size() != m) throw DomainError("could not span the chart complement");

    // Gram-Schmidt under the negated form, in the basis of `chosen`
    std::vector<std::vector<double>> g(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) g[i][j] = -to_double(pair(ctx, chosen[i], chosen[j]));
    auto ip = [&](const std::vector<double>& a, const std::vector<double>& b) {
      double s = 0;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) s += a[i] * g[i][j] * b[j];
      return s;
    };
    std::vector<std::vector<double>> f;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> w(m, 0.0);
      w[i] = 1.0;
      for (const auto& prev : f) {
        const double p = ip(w, prev);
        for (std::size_t j = 0; j < m; ++j) w[j] -= p * prev[j];
      }
      const double nrm = std::sqrt(ip(w, w));
      if (!(nrm > 0)) throw DomainError("degenerate chart frame");
      for (auto& x : w) x /= nrm;
      f.push_back(std::move(w));
    }

    scale_ = 1.0;
    scale_sq_ = 1;
    if (strip_) {
      const auto& [u, v] = *strip;
      // u + v = lambda E; v becomes the line at height lambda / |u|
      const LatticeVector s = u + v;
      Rational lambda;
      bool found = false;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (E_[i] != 0) {
          lambda = ratio(s[i], E_[i]);
          found = true;
          break;
        }
      }
      if (!found || lambda == 0 || (to_rational(s) != [&] {
            RationalVector r = to_rational(E_);
            for (auto& x : r) x *= lambda;
            return r;
          }()))
        throw DomainError("strip walls are not parallel (u + v is not a multiple of E)");
      const Integer uu = -norm(ctx, u);
      scale_sq_ = Rational(uu) / (lambda * lambda);
      scale_ = std::sqrt(to_double(scale_sq_));
      // f[0] is u/|u|; move it last and orient it so v sits at +1
      std::vector<double> first = f.front();
      if (lambda < 0)
        for (auto& x : first) x = -x;
      f.erase(f.begin());
      f.push_back(first);
    }
    v_ = std::move(chosen);
    c_ = std::move(f);
  }

  const GramContext* ctx_;
  LatticeVector E_;
  LatticeVector F_;
  Integer ef_;
  std::vector<LatticeVector> v_;
  std::vector<std::vector<double>> c_;
  double scale_ = 1.0;
  Rational scale_sq_ = 1;
  bool strip_ = false;
};

}  // namespace apollo
