#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "apollo/geometry.hpp"
#include "apollo/group.hpp"

namespace apollo {

// Orbits modulo the translations fixing the cusp.
//
// The stabiliser of E is generated by the walls through E. Its unipotent elements are
// Eichler translations T_w(x) = x + (x.E) w - (x.w) E - (w.w)/2 (x.E) E with w in E^perp,
// acting on the affine chart p_j(y) = (y.v_j)/(y.E) by p -> p + (w.v_j). The orbit is
// enumerated best-first in h = E.n with one representative per translation class.

struct TranslationLattice {
  int rank = 0;
  std::vector<RationalVector> displacement;  // basis rows in p-coordinates
  std::vector<RationalVector> w;             // Eichler vectors in lattice coordinates
  std::vector<IntegerMatrix> matrices;
  std::size_t words_examined = 0;
  std::size_t unipotent_found = 0;
};

namespace detail {

/// Hermite-style row reduction; returns a basis of the row lattice.
inline std::vector<std::vector<Integer>> lattice_basis(std::vector<std::vector<Integer>> rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        const Integer q = floor_div(rows[i][c], rows[r][c]);
        for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][c] != 0) {
      if (rows[r][c] < 0)
        for (auto& x : rows[r]) x = -x;
      ++r;
    }
  }
  rows.resize(r);
  return rows;
}

inline IntegerMatrix eichler_matrix(const GramContext& ctx, const LatticeVector& E, const RationalVector& w) {
  const std::size_t k = ctx.dim();
  const Rational ww = pair(ctx, w, w);
  const RationalVector er = to_rational(E);
  IntegerMatrix m(k, k);
  for (std::size_t c = 0; c < k; ++c) {
    const LatticeVector ec = ctx.basis(c);
    const Rational xe = Rational(pair(ctx, ec, E));
    const Rational xw = pair(ctx, to_rational(ec), w);
    for (std::size_t i = 0; i < k; ++i) {
      const Rational v = Rational(ec[i]) + xe * w[i] - xw * er[i] - ww / 2 * xe * er[i];
      if (denominator(v) != 1) throw DomainError("translation is not integral on the lattice");
      m(i, c) = numerator(v);
    }
  }
  return m;
}

}  // namespace detail

/// Finds the translation subgroup of the cusp stabiliser from words in the walls through E.
inline TranslationLattice find_translations(const GramContext& ctx, const BoundaryChart& chart, const GeneratorSet& gs,
                                            int max_word = 8) {
  const std::size_t k = ctx.dim();
  const LatticeVector& E = chart.E();
  std::vector<PackedMat> walls;
  for (const auto& g : gs.gens)
    if (pair(ctx, g.normal, E) == 0) walls.push_back(PackedMat::from(g.matrix.integer_entries()));

  TranslationLattice tl;
  std::set<PackedMat> seen{PackedMat::identity(k)};
  std::vector<PackedMat> level{PackedMat::identity(k)};
  std::vector<PackedMat> unipotent;
  for (int len = 1; len <= max_word && !level.empty(); ++len) {
    std::vector<PackedMat> next;
    for (const auto& m : level)
      for (const auto& r : walls) {
        PackedMat p = m * r;
        if (seen.insert(p).second) next.push_back(p);
      }
    level = std::move(next);
    for (const auto& m : level) {
      PackedMat n = m;
      for (std::size_t i = 0; i < k; ++i) n.a[i][i] -= 1;
      PackedMat n3 = n * n * n;
      bool zero = true;
      for (std::size_t i = 0; i < k && zero; ++i)
        for (std::size_t j = 0; j < k && zero; ++j) zero = n3.a[i][j] == 0;
      if (zero) unipotent.push_back(m);
    }
  }
  tl.words_examined = seen.size();
  tl.unipotent_found = unipotent.size();

  const auto& v = chart.complement_basis();
  const std::size_t m = v.size();
  const LatticeVector& F = chart.F();
  const Integer fe = pair(ctx, F, E);
  std::vector<std::vector<Integer>> rows;
  Integer den = 1;
  std::vector<RationalVector> disp;
  for (const auto& u : unipotent) {
    const LatticeVector uf = unpack(u.apply(pack(F)), k);
    RationalVector d(m);
    for (std::size_t j = 0; j < m; ++j) {
      d[j] = ratio(pair(ctx, uf, v[j]), fe);
      den = lcm(den, denominator(d[j]));
    }
    disp.push_back(std::move(d));
  }
  for (const auto& d : disp) {
    std::vector<Integer> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = numerator(d[j] * den);
    rows.push_back(std::move(row));
  }
  const auto basis = detail::lattice_basis(rows);
  tl.rank = static_cast<int>(basis.size());

  RationalMatrix gv(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) gv(i, j) = pair(ctx, v[i], v[j]);
  const RationalMatrix gvi = inverse(gv);
  for (const auto& b : basis) {
    RationalVector d(m);
    for (std::size_t j = 0; j < m; ++j) d[j] = Rational(b[j]) / den;
    // w = sum alpha_l v_l with Gv alpha = d
    RationalVector w(k, Rational(0));
    for (std::size_t l = 0; l < m; ++l) {
      Rational alpha = 0;
      for (std::size_t j = 0; j < m; ++j) alpha += gvi(l, j) * d[j];
      for (std::size_t i = 0; i < k; ++i) w[i] += alpha * Rational(v[l][i]);
    }
    IntegerMatrix t = detail::eichler_matrix(ctx, E, w);
    if (!preserves_form(ctx, to_rational(t))) throw DomainError("translation does not preserve the form");
    tl.displacement.push_back(std::move(d));
    tl.w.push_back(std::move(w));
    tl.matrices.push_back(std::move(t));
  }
  return tl;
}

struct QuotientBudget {
  Integer max_h = 0;  // enumerate representatives with E.n <= max_h
  std::size_t max_elements = 20'000'000;
  unsigned workers = 1;
};

struct QuotientRecord {
  std::vector<LatticeVector> elements;  // sorted by (E.n, coordinates)
  std::vector<Integer> h;
  int translation_rank = 0;
  std::vector<RationalVector> translation_basis;
  std::size_t descent_checked = 0;
  std::size_t descent_violations = 0;
  std::vector<LatticeVector> descent_counterexamples;
  bool complete = true;
  Integer complete_through = 0;
};

/// Enumerates the orbit of `seed` modulo cusp translations, one element per class, with E.n <= max_h.
class CuspQuotient {
 public:
  CuspQuotient(const GramContext& ctx, const BoundaryChart& chart, const GeneratorSet& gs)
      : ctx_(ctx), chart_(chart), k_(ctx.dim()) {
    const LatticeVector& E = chart.E();
    J_ = PackedMat::from(ctx.gram());
    je_ = J_.apply(pack(E));
    e_ = pack(E);
    tl_ = find_translations(ctx, chart, gs);
    if (tl_.rank == 0) throw DomainError("no translations fix the cusp; the quotient is not needed");
    r_ = static_cast<std::size_t>(tl_.rank);

    for (const auto& g : gs.gens) {
      PackedMat m = PackedMat::from(g.matrix.integer_entries());
      if (pair(ctx, g.normal, E) == 0)
        cusp_walls_.push_back(m);
      else
        moving_.push_back({m, {}});
    }
    for (auto& mv : moving_) {
      // E.(G z) = (G^T J E) . z
      for (std::size_t j = 0; j < k_; ++j) {
        i128 s = 0;
        for (std::size_t i = 0; i < k_; ++i) s += static_cast<i128>(mv.g.a[i][j]) * je_.c[i];
        mv.s.c[j] = narrow(s);
      }
    }
    for (const auto& t : tl_.matrices) {
      PackedMat n = PackedMat::from(t);
      for (std::size_t i = 0; i < k_; ++i) n.a[i][i] -= 1;
      n_.push_back(n);
    }
    // w_i as doubles and J w_i for the quadratic bounds
    wd_.assign(r_, std::vector<double>(k_));
    jw_.assign(r_, std::vector<double>(k_, 0.0));
    ww_.assign(r_, std::vector<double>(r_));
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t c = 0; c < k_; ++c) wd_[i][c] = to_double(tl_.w[i][c]);
      for (std::size_t a = 0; a < k_; ++a)
        for (std::size_t b = 0; b < k_; ++b) jw_[i][a] += to_double(ctx.gram()(a, b)) * wd_[i][b];
    }
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < r_; ++j) ww_[i][j] = to_double(pair(ctx, tl_.w[i], tl_.w[j]));

    // coordinates t = (y.v_S) B_S^{-1} / h on an invertible r x r minor of the displacement basis
    const auto& v = chart.complement_basis();
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < v.size() && cols.size() < r_; ++c) {
      RationalMatrix a(r_, cols.size() + 1);
      for (std::size_t i = 0; i < r_; ++i) {
        for (std::size_t q = 0; q < cols.size(); ++q) a(i, q) = tl_.displacement[i][cols[q]];
        a(i, cols.size()) = tl_.displacement[i][c];
      }
      if (rank(a) == cols.size() + 1) cols.push_back(c);
    }
    RationalMatrix bs(r_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t q = 0; q < r_; ++q) bs(i, q) = tl_.displacement[i][cols[q]];
    const RationalMatrix binv = inverse(bs);
    Integer den = 1;
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < r_; ++j) den = lcm(den, denominator(binv(i, j)));
    bden_ = to_int64(den);
    bnum_.assign(r_, std::vector<std::int64_t>(r_));
    for (std::size_t j = 0; j < r_; ++j)
      for (std::size_t i = 0; i < r_; ++i) bnum_[j][i] = to_int64(numerator(binv(j, i) * den));
    for (auto c : cols) jv_.push_back(J_.apply(pack(v[c])));

    check_normalizes();
  }

  const TranslationLattice& translations() const { return tl_; }

  /// Representative of y's translation class: canonical sign, lattice coordinates in [0,1)^r.
  PackedVec reduce(const PackedVec& y) const {
    const i128 h = dot_wide(je_, y, k_);
    if (h == 0) {
      for (const auto& n : n_)
        if (!(n.apply(y) == PackedVec{}))
          throw DomainError("a flat element is moved by the cusp translations: " + to_string(y, k_));
      return y;
    }
    std::vector<i128> a(r_);
    for (std::size_t q = 0; q < r_; ++q) a[q] = dot_wide(jv_[q], y, k_);
    PackedVec z = y;
    for (std::size_t i = 0; i < r_; ++i) {
      i128 num = 0;
      for (std::size_t q = 0; q < r_; ++q) num += a[q] * bnum_[q][i];
      const i128 d = static_cast<i128>(bden_) * h;
      i128 fl = num / d;
      if ((num % d != 0) && ((num < 0) != (d < 0))) --fl;
      if (fl != 0) z = power(i, -narrow(fl), z);
    }
    return z;
  }

  QuotientRecord enumerate(const LatticeVector& seed, const QuotientBudget& budget) const {
    ctx_.check(seed);
    if (norm(ctx_, seed) >= 0) throw DomainError("seed is not spacelike");
    const std::int64_t H = to_int64(budget.max_h);
    QuotientRecord rec;
    rec.translation_rank = tl_.rank;
    rec.translation_basis = tl_.displacement;

    std::unordered_set<PackedVec, PackedVecHash> seen;
    std::map<std::int64_t, std::vector<PackedVec>> pending;
    const PackedVec s0 = reduce(canonical_packed(pack(seed), je_, k_));
    if (dot(je_, s0, k_) <= H) {
      seen.insert(s0);
      pending[dot(je_, s0, k_)].push_back(s0);
    }
    std::vector<std::pair<std::int64_t, PackedVec>> done;
    // descent bookkeeping: walls through the cusp keep E.n, so a plateau descends if any member does
    std::unordered_map<PackedVec, std::size_t, PackedVecHash> index;
    std::vector<char> down;
    std::vector<std::vector<PackedVec>> level_nb;
    const std::size_t nc = cusp_walls_.size();
    while (!pending.empty()) {
      auto it = pending.begin();
      const std::int64_t h = it->first;
      std::vector<PackedVec> batch = std::move(it->second);
      pending.erase(it);
      std::sort(batch.begin(), batch.end());
      std::vector<std::vector<PackedVec>> out(batch.size());
      std::vector<char> descends(batch.size(), 0);
      parallel_for(batch.size(), budget.workers, [&](std::size_t i) { expand(batch[i], h, H, out[i], descends[i]); });
      for (std::size_t i = 0; i < batch.size(); ++i) {
        done.emplace_back(h, batch[i]);
        index.emplace(batch[i], down.size());
        down.push_back(h == 0 || descends[i] || batch[i] == s0);
        level_nb.emplace_back(out[i].begin(), out[i].begin() + static_cast<std::ptrdiff_t>(nc));
        for (const auto& y : out[i]) {
          if (!seen.insert(y).second) continue;
          pending[dot(je_, y, k_)].push_back(y);
        }
      }
      if (seen.size() > budget.max_elements) {
        rec.complete = false;
        rec.complete_through = h;
        break;
      }
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < down.size(); ++i) {
        if (down[i]) continue;
        for (const auto& y : level_nb[i]) {
          auto f = index.find(y);
          if (f != index.end() && down[f->second]) {
            down[i] = 1;
            changed = true;
            break;
          }
        }
      }
    }
    for (std::size_t i = 0; i < done.size(); ++i) {
      if (done[i].first == 0 || done[i].second == s0) continue;
      ++rec.descent_checked;
      if (!down[i]) {
        ++rec.descent_violations;
        if (rec.descent_counterexamples.size() < 8) rec.descent_counterexamples.push_back(unpack(done[i].second, k_));
      }
    }
    if (rec.complete) rec.complete_through = budget.max_h;
    std::sort(done.begin(), done.end());
    for (const auto& [h, v] : done) {
      if (!rec.complete && h > to_int64(rec.complete_through)) break;
      rec.elements.push_back(unpack(v, k_));
      rec.h.emplace_back(static_cast<long long>(h));
    }
    if (!rec.complete)
      throw BudgetExceeded("quotient enumeration exceeded " + std::to_string(budget.max_elements) +
                           " elements; complete through E.n = " + rec.complete_through.str());
    return rec;
  }

 private:
  struct Moving {
    PackedMat g;
    PackedVec s;  // functional z -> E.(g z)
  };

  /// T_i^e y for the i-th basis translation, via (I+N)^e = I + eN + e(e-1)/2 N^2.
  PackedVec power(std::size_t i, std::int64_t e, const PackedVec& y) const {
    const PackedVec a = n_[i].apply(y);
    const PackedVec b = n_[i].apply(a);
    const i128 c2 = static_cast<i128>(e) * (e - 1) / 2;
    PackedVec z;
    for (std::size_t j = 0; j < k_; ++j) z.c[j] = narrow(static_cast<i128>(y.c[j]) + static_cast<i128>(e) * a.c[j] + c2 * b.c[j]);
    return z;
  }

  void check_normalizes() const {
    // each wall through E must conjugate every basis translation into the lattice
    for (const auto& r : cusp_walls_)
      for (std::size_t i = 0; i < r_; ++i) {
        const PackedMat t = PackedMat::from(tl_.matrices[i]);
        const PackedMat c = r * t * r;
        // a conjugated translation acts on the chart by a displacement; measure it on F
        const PackedVec f = pack(chart_.F());
        const PackedVec cf = c.apply(f);
        const PackedVec red = reduce_translate(cf);
        if (!(red == f)) throw DomainError("a wall through the cusp does not normalize the translation lattice");
      }
  }

  /// Reduces a null point's chart position by the lattice (used only in the normalizer check).
  PackedVec reduce_translate(const PackedVec& y) const {
    const i128 h = dot_wide(je_, y, k_);
    std::vector<i128> a(r_);
    for (std::size_t q = 0; q < r_; ++q) a[q] = dot_wide(jv_[q], y, k_);
    PackedVec z = y;
    for (std::size_t i = 0; i < r_; ++i) {
      i128 num = 0;
      for (std::size_t q = 0; q < r_; ++q) num += a[q] * bnum_[q][i];
      const i128 d = static_cast<i128>(bden_) * h;
      if (num % d != 0) return z;  // not a lattice displacement
      z = power(i, -narrow(num / d), z);
    }
    return z;
  }

  PackedVec translate(const PackedVec& y, const std::vector<std::int64_t>& kv) const {
    PackedVec z = y;
    for (std::size_t i = 0; i < r_; ++i)
      if (kv[i] != 0) z = power(i, kv[i], z);
    return z;
  }

  void expand(const PackedVec& y, std::int64_t h, std::int64_t H, std::vector<PackedVec>& out, char& descends) const {
    for (const auto& r : cusp_walls_) out.push_back(reduce(canonical_packed(r.apply(y), je_, k_)));
    for (const auto& mv : moving_) {
      if (h == 0) {
        // flat elements are translation invariant: a single image
        const PackedVec img = mv.g.apply(y);
        const std::int64_t h2 = std::abs(dot(je_, img, k_));
        if (h2 <= H) out.push_back(reduce(canonical_packed(img, je_, k_)));
        continue;
      }
      enumerate_translates(mv, y, h, H, [&](const std::vector<std::int64_t>& kv) {
        const PackedVec img = mv.g.apply(translate(y, kv));
        const std::int64_t h2 = std::abs(dot(je_, img, k_));
        if (h2 > H) return;
        if (h2 < h) descends = 1;
        out.push_back(reduce(canonical_packed(img, je_, k_)));
      });
    }
  }

  /// Calls f(k) for every integer k (a superset is filtered by the caller) with
  /// f(k) = E.(G T^k y) <= H, where f is a positive definite quadratic in k.
  template <class Fn>
  void enumerate_translates(const Moving& mv, const PackedVec& y, std::int64_t h, std::int64_t H, Fn&& f) const {
    const double hd = static_cast<double>(h);
    double sE = 0, c0 = 0;
    for (std::size_t j = 0; j < k_; ++j) {
      sE += static_cast<double>(mv.s.c[j]) * e_.c[j];
      c0 += static_cast<double>(mv.s.c[j]) * y.c[j];
    }
    std::vector<double> l(r_), sw(r_), yw(r_);
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t j = 0; j < k_; ++j) {
        sw[i] += static_cast<double>(mv.s.c[j]) * wd_[i][j];
        yw[i] += jw_[i][j] * static_cast<double>(y.c[j]);
      }
      l[i] = hd * sw[i] - yw[i] * sE;
    }
    // f(k) = c0 + l.k + 1/2 k^T A k with A = -h (s.E) (w_i.w_j)
    std::vector<std::vector<double>> A(r_, std::vector<double>(r_));
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < r_; ++j) A[i][j] = -hd * sE * ww_[i][j];
    // LDL^T
    std::vector<std::vector<double>> L(r_, std::vector<double>(r_, 0.0));
    std::vector<double> D(r_);
    for (std::size_t j = 0; j < r_; ++j) {
      double d = A[j][j];
      for (std::size_t q = 0; q < j; ++q) d -= L[j][q] * L[j][q] * D[q];
      if (!(d > 0)) throw DomainError("translate height is not a definite quadratic");
      D[j] = d;
      L[j][j] = 1;
      for (std::size_t i = j + 1; i < r_; ++i) {
        double s = A[i][j];
        for (std::size_t q = 0; q < j; ++q) s -= L[i][q] * L[j][q] * D[q];
        L[i][j] = s / d;
      }
    }
    // centre k* = -A^{-1} l via the factorization
    std::vector<double> z(r_), kstar(r_);
    for (std::size_t i = 0; i < r_; ++i) {
      double s = -l[i];
      for (std::size_t q = 0; q < i; ++q) s -= L[i][q] * z[q];
      z[i] = s;
    }
    for (std::size_t i = 0; i < r_; ++i) z[i] /= D[i];
    for (std::size_t ii = r_; ii-- > 0;) {
      double s = z[ii];
      for (std::size_t q = ii + 1; q < r_; ++q) s -= L[q][ii] * kstar[q];
      kstar[ii] = s;
    }
    double fmin = c0;
    for (std::size_t i = 0; i < r_; ++i) fmin += 0.5 * l[i] * kstar[i];
    const double slack = 1e-6 * (std::abs(static_cast<double>(H)) + std::abs(fmin) + 1.0);
    double R = 2.0 * (static_cast<double>(H) - fmin) + slack;
    if (R < 0) return;

    // (k-k*)^T A (k-k*) = sum_i D_i (u_i + sum_{j>i} L_ji u_j)^2, enumerated from the last index
    std::vector<std::int64_t> kv(r_);
    std::vector<double> u(r_);
    auto rec = [&](auto&& self, std::size_t level, double budget) -> void {
      const std::size_t i = level - 1;
      double c = 0;
      for (std::size_t j = i + 1; j < r_; ++j) c += L[j][i] * u[j];
      const double rad = std::sqrt(std::max(budget, 0.0) / D[i]);
      const double centre = kstar[i] - c;
      const std::int64_t lo = static_cast<std::int64_t>(std::floor(centre - rad)) - 1;
      const std::int64_t hi = static_cast<std::int64_t>(std::ceil(centre + rad)) + 1;
      for (std::int64_t x = lo; x <= hi; ++x) {
        kv[i] = x;
        u[i] = static_cast<double>(x) - kstar[i];
        const double t = u[i] + c;
        const double rest = budget - D[i] * t * t;
        if (i == 0) {
          f(kv);  // the caller filters exactly
        } else {
          self(self, i, rest);
        }
      }
    };
    rec(rec, r_, R);
  }

  const GramContext& ctx_;
  const BoundaryChart& chart_;
  std::size_t k_;
  PackedMat J_;
  PackedVec je_, e_;
  TranslationLattice tl_;
  std::size_t r_ = 0;
  std::vector<PackedMat> cusp_walls_;
  std::vector<Moving> moving_;
  std::vector<PackedMat> n_;
  std::vector<std::vector<double>> wd_, jw_, ww_;
  std::vector<std::vector<std::int64_t>> bnum_;
  std::int64_t bden_ = 1;
  std::vector<PackedVec> jv_;
};

}  // namespace apollo
