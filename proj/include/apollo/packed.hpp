#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "apollo/lattice.hpp"

namespace apollo {

/// Hot-loop vector representation: fixed capacity, 64-bit coordinates.
/// Arithmetic accumulates in 128 bits and throws ArithmeticOverflow rather than wrapping.
inline constexpr std::size_t kMaxDim = 12;

using i128 = __int128;

struct PackedVec {
  std::array<std::int64_t, kMaxDim> c{};

  friend bool operator==(const PackedVec& a, const PackedVec& b) { return a.c == b.c; }
  friend bool operator<(const PackedVec& a, const PackedVec& b) { return a.c < b.c; }
};

struct PackedVecHash {
  std::size_t operator()(const PackedVec& v) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::int64_t x : v.c) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

inline std::int64_t narrow(i128 v) {
  if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN))
    throw ArithmeticOverflow("packed coordinate exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

inline PackedVec pack(const LatticeVector& v) {
  if (v.size() > kMaxDim) throw DimensionMismatch("rank exceeds packed capacity");
  PackedVec p;
  for (std::size_t i = 0; i < v.size(); ++i) p.c[i] = to_int64(v[i]);
  return p;
}

inline LatticeVector unpack(const PackedVec& p, std::size_t dim) {
  LatticeVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = p.c[i];
  return v;
}

inline i128 dot_wide(const PackedVec& a, const PackedVec& b, std::size_t dim) {
  i128 s = 0;
  for (std::size_t i = 0; i < dim; ++i) s += static_cast<i128>(a.c[i]) * b.c[i];
  return s;
}

inline std::int64_t dot(const PackedVec& a, const PackedVec& b, std::size_t dim) {
  return narrow(dot_wide(a, b, dim));
}

/// Dense k x k integer matrix for the hot loops.
struct PackedMat {
  std::size_t dim = 0;
  std::array<std::array<std::int64_t, kMaxDim>, kMaxDim> a{};

  static PackedMat from(const IntegerMatrix& m) {
    if (m.rows() != m.cols() || m.rows() > kMaxDim) throw DimensionMismatch("bad packed matrix shape");
    PackedMat p;
    p.dim = m.rows();
    for (std::size_t i = 0; i < p.dim; ++i)
      for (std::size_t j = 0; j < p.dim; ++j) p.a[i][j] = to_int64(m(i, j));
    return p;
  }

  static PackedMat identity(std::size_t dim) {
    PackedMat p;
    p.dim = dim;
    for (std::size_t i = 0; i < dim; ++i) p.a[i][i] = 1;
    return p;
  }

  PackedVec apply(const PackedVec& x) const {
    PackedVec r;
    for (std::size_t i = 0; i < dim; ++i) {
      i128 s = 0;
      for (std::size_t j = 0; j < dim; ++j) s += static_cast<i128>(a[i][j]) * x.c[j];
      r.c[i] = narrow(s);
    }
    return r;
  }

  friend PackedMat operator*(const PackedMat& x, const PackedMat& y) {
    PackedMat r;
    r.dim = x.dim;
    for (std::size_t i = 0; i < x.dim; ++i)
      for (std::size_t j = 0; j < x.dim; ++j) {
        i128 s = 0;
        for (std::size_t k = 0; k < x.dim; ++k) s += static_cast<i128>(x.a[i][k]) * y.a[k][j];
        r.a[i][j] = narrow(s);
      }
    return r;
  }

  friend bool operator==(const PackedMat& x, const PackedMat& y) { return x.dim == y.dim && x.a == y.a; }
  friend bool operator<(const PackedMat& x, const PackedMat& y) { return x.a < y.a; }

  bool is_identity() const { return *this == identity(dim); }
};

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  std::uint64_t x = a < 0 ? -static_cast<std::uint64_t>(a) : a;
  std::uint64_t y = b < 0 ? -static_cast<std::uint64_t>(b) : b;
  while (y) {
    std::uint64_t t = x % y;
    x = y;
    y = t;
  }
  return static_cast<std::int64_t>(x);
}

/// Packed counterpart of canonicalize(): primitive, sign fixed by the pairing with E.
/// je is J E, so that E.x = je . x.
inline PackedVec canonical_packed(PackedVec x, const PackedVec& je, std::size_t dim) {
  std::int64_t g = 0;
  for (std::size_t i = 0; i < dim; ++i) g = gcd64(g, x.c[i]);
  if (g > 1)
    for (std::size_t i = 0; i < dim; ++i) x.c[i] /= g;
  const i128 h = dot_wide(je, x, dim);
  bool flip = h < 0;
  if (h == 0) {
    for (std::size_t i = 0; i < dim; ++i)
      if (x.c[i] != 0) {
        flip = x.c[i] < 0;
        break;
      }
  }
  if (flip)
    for (std::size_t i = 0; i < dim; ++i) x.c[i] = -x.c[i];
  return x;
}

inline std::string to_string(const PackedVec& v, std::size_t dim) { return unpack(v, dim).to_string(); }

}  // namespace apollo
