#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apollo/exact.hpp"
#include "apollo/matrix.hpp"

namespace apollo {

/// Integer coordinates in the e-basis of a lattice.
class LatticeVector {
 public:
  LatticeVector() = default;
  explicit LatticeVector(std::size_t dim) : c_(dim, Integer(0)) {}
  explicit LatticeVector(std::vector<Integer> coords) : c_(std::move(coords)) {}
  LatticeVector(std::initializer_list<long long> coords) {
    c_.reserve(coords.size());
    for (long long v : coords) c_.emplace_back(v);
  }

  static LatticeVector basis(std::size_t dim, std::size_t i) {
    LatticeVector v(dim);
    v.c_.at(i) = 1;
    return v;
  }

  std::size_t size() const { return c_.size(); }
  const Integer& operator[](std::size_t i) const { return c_[i]; }
  Integer& operator[](std::size_t i) { return c_[i]; }
  const std::vector<Integer>& coords() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Integer& v) { return v == 0; });
  }

  Integer content() const {
    Integer g = 0;
    for (const auto& v : c_) g = gcd(g, v);
    return g;
  }

  /// Divides out the gcd of the coordinates (zero stays zero).
  LatticeVector primitive() const {
    Integer g = content();
    if (g <= 1) return *this;
    LatticeVector r(*this);
    for (auto& v : r.c_) v /= g;
    return r;
  }

  LatticeVector operator-() const {
    LatticeVector r(*this);
    for (auto& v : r.c_) v = -v;
    return r;
  }

  LatticeVector& operator+=(const LatticeVector& o) {
    check_dim(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  LatticeVector& operator-=(const LatticeVector& o) {
    check_dim(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  LatticeVector& operator*=(const Integer& s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) { return a += b; }
  friend LatticeVector operator-(LatticeVector a, const LatticeVector& b) { return a -= b; }
  friend LatticeVector operator*(const Integer& s, LatticeVector a) { return a *= s; }

  friend bool operator==(const LatticeVector& a, const LatticeVector& b) { return a.c_ == b.c_; }
  friend bool operator!=(const LatticeVector& a, const LatticeVector& b) { return !(a == b); }
  friend bool operator<(const LatticeVector& a, const LatticeVector& b) {
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ", ";
      s += c_[i].str();
    }
    return s + "]";
  }

 private:
  void check_dim(const LatticeVector& o) const {
    if (o.size() != size()) throw DimensionMismatch("vector dimensions differ");
  }
  std::vector<Integer> c_;
};

using RationalVector = std::vector<Rational>;

inline bool is_integral(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return denominator(q) == 1; });
}

inline LatticeVector to_lattice(const RationalVector& v) {
  std::vector<Integer> c;
  c.reserve(v.size());
  for (const auto& q : v) {
    if (denominator(q) != 1) throw DomainError("vector has non-integer entries");
    c.push_back(numerator(q));
  }
  return LatticeVector(std::move(c));
}

/// Smallest integer multiple of a rational vector, as a primitive lattice vector.
inline LatticeVector clear_denominators(const RationalVector& v) {
  Integer l = 1;
  for (const auto& q : v) l = lcm(l, denominator(q));
  std::vector<Integer> c;
  c.reserve(v.size());
  for (const auto& q : v) c.push_back(numerator(q) * (l / denominator(q)));
  return LatticeVector(std::move(c)).primitive();
}

struct Signature {
  int pos = 0;
  int neg = 0;
  int zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Exact inertia of a symmetric rational matrix by congruence diagonalization.
inline Signature inertia(RationalMatrix a) {
  const std::size_t n = a.rows();
  if (!a.is_symmetric()) throw DomainError("inertia of non-symmetric matrix");
  Signature s;
  for (std::size_t i = 0; i < n; ++i) {
    if (a(i, i) == 0) {
      std::size_t p = i + 1;
      while (p < n && a(p, p) == 0) ++p;
      if (p < n) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a(i, j), a(p, j));
        for (std::size_t j = 0; j < n; ++j) std::swap(a(j, i), a(j, p));
      } else {
        std::size_t q = i + 1;
        while (q < n && a(i, q) == 0) ++q;
        if (q == n) {
          ++s.zero;
          continue;
        }
        // e_i <- e_i + e_q makes the pivot 2 a(i,q), nonzero as both diagonals vanish
        for (std::size_t j = 0; j < n; ++j) a(i, j) += a(q, j);
        for (std::size_t j = 0; j < n; ++j) a(j, i) += a(j, q);
      }
    }
    const Rational piv = a(i, i);
    for (std::size_t r = i + 1; r < n; ++r) {
      if (a(r, i) == 0) continue;
      const Rational f = a(r, i) / piv;
      for (std::size_t j = i; j < n; ++j) a(r, j) -= f * a(i, j);
      for (std::size_t j = i; j < n; ++j) a(j, r) = a(r, j);
    }
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0;
    if (piv > 0)
      ++s.pos;
    else
      ++s.neg;
  }
  return s;
}

/// Symmetric even integer Gram matrix of Lorentzian signature, with an optional null cusp.
class GramContext {
 public:
  GramContext() = default;
  GramContext(IntegerMatrix gram, std::optional<std::size_t> cusp_index = std::nullopt,
              std::vector<std::string> labels = {})
      : gram_(std::move(gram)), cusp_(cusp_index), labels_(std::move(labels)) {
    const std::size_t k = gram_.rows();
    if (k == 0 || gram_.cols() != k) throw ConfigError("Gram matrix must be square and nonempty");
    if (!gram_.is_symmetric()) throw ConfigError("Gram matrix is not symmetric");
    for (std::size_t i = 0; i < k; ++i)
      if (gram_(i, i) % 2 != 0) throw ConfigError("Gram matrix has odd diagonal entry (lattice not even)");
    sig_ = inertia(to_rational(gram_));
    if (sig_.pos != 1 || sig_.zero != 0 || sig_.neg != static_cast<int>(k) - 1)
      throw ConfigError("Gram matrix does not have signature (1, " + std::to_string(k - 1) + ")");
    if (cusp_) {
      if (*cusp_ >= k) throw ConfigError("cusp index out of range");
      if (gram_(*cusp_, *cusp_) != 0) throw ConfigError("cusp basis vector is not null");
    }
    if (labels_.empty())
      for (std::size_t i = 0; i < k; ++i) labels_.push_back("e" + std::to_string(i + 1));
  }

  std::size_t dim() const { return gram_.rows(); }
  const IntegerMatrix& gram() const { return gram_; }
  Signature signature() const { return sig_; }
  bool has_cusp() const { return cusp_.has_value(); }
  std::size_t cusp_index() const {
    if (!cusp_) throw DomainError("lattice has no designated cusp");
    return *cusp_;
  }
  LatticeVector cusp() const { return basis(cusp_index()); }
  LatticeVector basis(std::size_t i) const { return LatticeVector::basis(dim(), i); }
  const std::vector<std::string>& labels() const { return labels_; }

  void check(const LatticeVector& v) const {
    if (v.size() != dim())
      throw DimensionMismatch("vector of length " + std::to_string(v.size()) + " in rank " +
                              std::to_string(dim()) + " lattice");
  }

  /// J v as an integer vector.
  LatticeVector apply_gram(const LatticeVector& v) const {
    check(v);
    LatticeVector r(dim());
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) r[i] += gram_(i, j) * v[j];
    return r;
  }

 private:
  IntegerMatrix gram_;
  std::optional<std::size_t> cusp_;
  std::vector<std::string> labels_;
  Signature sig_;
};

inline Signature signature(const GramContext& ctx) { return ctx.signature(); }

inline Integer pair(const GramContext& ctx, const LatticeVector& u, const LatticeVector& v) {
  ctx.check(u);
  ctx.check(v);
  const auto& g = ctx.gram();
  Integer s = 0;
  for (std::size_t i = 0; i < ctx.dim(); ++i) {
    if (u[i] == 0) continue;
    Integer row = 0;
    for (std::size_t j = 0; j < ctx.dim(); ++j) row += g(i, j) * v[j];
    s += u[i] * row;
  }
  return s;
}

inline Integer norm(const GramContext& ctx, const LatticeVector& v) { return pair(ctx, v, v); }

inline Rational pair(const GramContext& ctx, const RationalVector& u, const RationalVector& v) {
  if (u.size() != ctx.dim() || v.size() != ctx.dim()) throw DimensionMismatch("vector dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < ctx.dim(); ++i)
    for (std::size_t j = 0; j < ctx.dim(); ++j) s += u[i] * Rational(ctx.gram()(i, j)) * v[j];
  return s;
}

inline RationalVector to_rational(const LatticeVector& v) {
  RationalVector r;
  r.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r.emplace_back(v[i]);
  return r;
}

/// x - 2 (n.x)/(n.n) n, exactly.
inline RationalVector reflect(const GramContext& ctx, const LatticeVector& n, const RationalVector& x) {
  const Integer nn = norm(ctx, n);
  if (nn == 0) throw NullNormal("reflection through null vector " + n.to_string());
  const Rational f = 2 * pair(ctx, to_rational(n), x) / Rational(nn);
  RationalVector r = x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= f * Rational(n[i]);
  return r;
}

inline RationalVector reflect(const GramContext& ctx, const LatticeVector& n, const LatticeVector& x) {
  return reflect(ctx, n, to_rational(x));
}

struct IsometryMatrix {
  RationalMatrix entries;
  bool integral = false;
  std::optional<LatticeVector> source_normal;

  RationalVector apply(const RationalVector& x) const {
    RationalVector r(entries.rows(), Rational(0));
    for (std::size_t i = 0; i < entries.rows(); ++i)
      for (std::size_t j = 0; j < entries.cols(); ++j) r[i] += entries(i, j) * x[j];
    return r;
  }

  IntegerMatrix integer_entries() const {
    if (!integral) throw DomainError("isometry is not integral");
    IntegerMatrix m(entries.rows(), entries.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = numerator(entries(i, j));
    return m;
  }
};

inline bool all_integer(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (denominator(m(i, j)) != 1) return false;
  return true;
}

/// Divisibility form of the integrality test on the primitive vector p:
/// 2 (p.e_i) divisible by p.p for all i.
inline bool reflection_is_integral(const GramContext& ctx, const LatticeVector& n) {
  const LatticeVector p = n.primitive();
  const Integer nn = norm(ctx, p);
  if (nn == 0) throw NullNormal("reflection through null vector " + n.to_string());
  const LatticeVector jn = ctx.apply_gram(p);
  for (std::size_t i = 0; i < ctx.dim(); ++i)
    if ((2 * jn[i]) % nn != 0) return false;
  return true;
}

/// Entries (nn delta_ij - 2 n_i (Jn)_j) / nn.
inline IsometryMatrix reflection_matrix(const GramContext& ctx, const LatticeVector& n) {
  const std::size_t k = ctx.dim();
  const Integer nn = norm(ctx, n);
  if (nn == 0) throw NullNormal("reflection through null vector " + n.to_string());
  const LatticeVector jn = ctx.apply_gram(n);
  IsometryMatrix m;
  m.entries = RationalMatrix(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m.entries(i, j) = ratio((i == j ? nn : Integer(0)) - 2 * n[i] * jn[j], nn);
  m.integral = reflection_is_integral(ctx, n);
  m.source_normal = n;
  return m;
}

/// m = num / den with den the least common denominator.
inline std::pair<IntegerMatrix, Integer> common_denominator(const RationalMatrix& m) {
  Integer den = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) den = lcm(den, denominator(m(i, j)));
  IntegerMatrix num(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) num(i, j) = numerator(m(i, j)) * (den / denominator(m(i, j)));
  return {num, den};
}

/// M^T J M == J, checked as N^T J N == d^2 J on the integer numerators.
inline bool preserves_form(const GramContext& ctx, const RationalMatrix& m) {
  const auto [num, den] = common_denominator(m);
  const IntegerMatrix lhs = num.transpose() * ctx.gram() * num;
  const Integer d2 = den * den;
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t j = 0; j < lhs.cols(); ++j)
      if (lhs(i, j) != d2 * ctx.gram()(i, j)) return false;
  return true;
}

inline bool is_involution(const RationalMatrix& m) {
  const auto [num, den] = common_denominator(m);
  const IntegerMatrix sq = num * num;
  const Integer d2 = den * den;
  for (std::size_t i = 0; i < sq.rows(); ++i)
    for (std::size_t j = 0; j < sq.cols(); ++j)
      if (sq(i, j) != (i == j ? d2 : Integer(0))) return false;
  return true;
}

}  // namespace apollo
