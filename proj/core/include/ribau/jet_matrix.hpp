#pragma once

/// \file
/// Small dense matrices over Jet<M>.

#include <array>
#include <cmath>
#include <utility>

#include "ribau/errors.hpp"
#include "ribau/jet.hpp"

namespace ribau {

/// Relative singularity screen: |det| < kSingularTolerance * (max |entry|)^N.
inline constexpr double kSingularTolerance = 1e-10;

template <int M, int R, int C = R>
struct JetMatrix {
  using Entry = Jet<M>;
  static constexpr int kRows = R;
  static constexpr int kCols = C;

  std::array<Entry, R * C> entries{};

  constexpr Entry& operator()(int r, int c) noexcept { return entries[r * C + c]; }
  constexpr const Entry& operator()(int r, int c) const noexcept { return entries[r * C + c]; }

  static constexpr JetMatrix identity() noexcept {
    static_assert(R == C);
    JetMatrix m;
    for (int i = 0; i < R; ++i) m(i, i) = Entry::constant(1.0);
    return m;
  }

  double max_abs_value() const noexcept {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.value));
    return m;
  }
};

template <int M, int R, int K, int C>
JetMatrix<M, R, C> operator*(const JetMatrix<M, R, K>& a, const JetMatrix<M, K, C>& b) {
  JetMatrix<M, R, C> out;
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      Jet<M> acc;
      for (int k = 0; k < K; ++k) acc += a(r, k) * b(k, c);
      out(r, c) = acc;
    }
  }
  return out;
}

template <int M, int R, int C>
JetMatrix<M, C, R> transpose(const JetMatrix<M, R, C>& a) {
  JetMatrix<M, C, R> t;
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c) t(c, r) = a(r, c);
  return t;
}

namespace detail {

template <int M, int N>
Jet<M> cofactor_det(const JetMatrix<M, N>& a) {
  if constexpr (N == 1) {
    return a(0, 0);
  } else if constexpr (N == 2) {
    return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  } else {
    static_assert(N == 3);
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }
}

inline bool below_singular_screen(double det, double max_entry, int n, double tol) {
  return std::abs(det) < tol * std::pow(max_entry, n) || max_entry == 0.0;
}

// Partial-pivoting LU on jets. Pivots are chosen by value; the permutation is
// locally constant, so the jet slots are those of the true inverse.
template <int M, int N>
JetMatrix<M, N> lu_inverse(const JetMatrix<M, N>& a, double tol) {
  JetMatrix<M, N> lu = a;
  std::array<int, N> perm{};
  for (int i = 0; i < N; ++i) perm[i] = i;
  double det_value = 1.0;
  for (int k = 0; k < N; ++k) {
    int p = k;
    for (int r = k + 1; r < N; ++r)
      if (std::abs(lu(r, k).value) > std::abs(lu(p, k).value)) p = r;
    if (p != k) {
      for (int c = 0; c < N; ++c) std::swap(lu(k, c), lu(p, c));
      std::swap(perm[k], perm[p]);
      det_value = -det_value;
    }
    det_value *= lu(k, k).value;
    if (lu(k, k).value == 0.0) break;
    const Jet<M> inv_pivot = 1.0 / lu(k, k);
    for (int r = k + 1; r < N; ++r) {
      lu(r, k) = lu(r, k) * inv_pivot;
      for (int c = k + 1; c < N; ++c) lu(r, c) -= lu(r, k) * lu(k, c);
    }
  }
  if (below_singular_screen(det_value, a.max_abs_value(), N, tol)) {
    throw SingularMatrix("jet matrix is singular at the value level");
  }
  JetMatrix<M, N> inv;
  for (int col = 0; col < N; ++col) {
    std::array<Jet<M>, N> y{};
    for (int r = 0; r < N; ++r) {
      Jet<M> s = perm[r] == col ? Jet<M>::constant(1.0) : Jet<M>{};
      for (int c = 0; c < r; ++c) s -= lu(r, c) * y[c];
      y[r] = s;
    }
    for (int r = N - 1; r >= 0; --r) {
      Jet<M> s = y[r];
      for (int c = r + 1; c < N; ++c) s -= lu(r, c) * inv(c, col);
      inv(r, col) = s / lu(r, r);
    }
  }
  return inv;
}

}  // namespace detail

/// Determinant in jet arithmetic (cofactor expansion, N <= 3).
template <int M, int N>
Jet<M> determinant(const JetMatrix<M, N>& a) {
  static_assert(N <= 3, "determinant() is only provided for N <= 3");
  return detail::cofactor_det(a);
}

/// Two-sided inverse in jet arithmetic. Explicit cofactor formula for N <= 3,
/// LU otherwise. Throws SingularMatrix when the value-level determinant fails
/// the relative screen |det| < tol * (max |entry|)^N.
template <int M, int N>
JetMatrix<M, N> inverse(const JetMatrix<M, N>& a, double tol = kSingularTolerance) {
  if constexpr (N <= 3) {
    const Jet<M> det = detail::cofactor_det(a);
    if (detail::below_singular_screen(det.value, a.max_abs_value(), N, tol)) {
      throw SingularMatrix("jet matrix is singular at the value level");
    }
    const Jet<M> inv_det = 1.0 / det;
    JetMatrix<M, N> inv;
    if constexpr (N == 1) {
      inv(0, 0) = inv_det;
    } else if constexpr (N == 2) {
      inv(0, 0) = a(1, 1) * inv_det;
      inv(0, 1) = -a(0, 1) * inv_det;
      inv(1, 0) = -a(1, 0) * inv_det;
      inv(1, 1) = a(0, 0) * inv_det;
    } else {
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          // adjugate: transpose of the cofactor matrix
          const int r1 = (c + 1) % 3, r2 = (c + 2) % 3;
          const int c1 = (r + 1) % 3, c2 = (r + 2) % 3;
          inv(r, c) = (a(r1, c1) * a(r2, c2) - a(r1, c2) * a(r2, c1)) * inv_det;
        }
      }
    }
    return inv;
  } else {
    return detail::lu_inverse(a, tol);
  }
}

}  // namespace ribau
