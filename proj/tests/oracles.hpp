#pragma once

// Reference computations that share no code with the library. They are slow
// and only meant for small universes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

inline double lin(const std::vector<double>& c, std::uint64_t mask) {
  double v = c[0];
  for (std::size_t i = 1; i < c.size(); ++i) {
    if ((mask >> (i - 1)) & 1U) v += c[i];
  }
  return v;
}

/// Max |f(S)+f(T)-f(S|T)-f(S&T)| over every ordered pair of masks.
inline double eps(const std::vector<double>& table, int n, bool weak) {
  const std::uint64_t size = std::uint64_t{1} << n;
  double best = 0.0;
  for (std::uint64_t s = 0; s < size; ++s) {
    for (std::uint64_t t = 0; t < size; ++t) {
      if (weak && (s & t) != 0) continue;
      best = std::max(best, std::abs(table[s] + table[t] - table[s | t] - table[s & t]));
    }
  }
  return best;
}

/// Solve a small dense system by Gaussian elimination with partial pivoting.
/// Returns false when the matrix is (numerically) singular.
template <std::size_t N>
bool solve(std::array<std::array<double, N + 1>, N> a, std::array<double, N>& x) {
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < N; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (std::abs(a[p][c]) < 1e-12) return false;
    std::swap(a[p], a[c]);
    for (std::size_t r = 0; r < N; ++r) {
      if (r == c) continue;
      const double m = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= N; ++k) a[r][k] -= m * a[c][k];
    }
  }
  for (std::size_t c = 0; c < N; ++c) x[c] = a[c][N] / a[c][c];
  return true;
}

/// Chebyshev distance to the linear functions for n = 3 by enumerating LP
/// vertices: every choice of 5 tight constraints s * (f(S) - g(S)) = t.
inline double chebyshev3(const std::vector<double>& table) {
  constexpr int kRows = 16;
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < kRows; ++a)
    for (int b = a + 1; b < kRows; ++b)
      for (int c = b + 1; c < kRows; ++c)
        for (int d = c + 1; d < kRows; ++d)
          for (int e = d + 1; e < kRows; ++e) {
            const std::array<int, 5> pick{a, b, c, d, e};
            // Unknowns c0, c1, c2, c3, t. Row r: set r / 2, sign + or -.
            std::array<std::array<double, 6>, 5> m{};
            for (std::size_t i = 0; i < 5; ++i) {
              const auto mask = static_cast<std::uint64_t>(pick[i] / 2);
              const double sign = pick[i] % 2 == 0 ? 1.0 : -1.0;
              // sign * (f - c0 - sum c_j) - t = 0
              m[i][0] = sign;
              for (int j = 0; j < 3; ++j) m[i][static_cast<std::size_t>(j + 1)] = ((mask >> j) & 1U) ? sign : 0.0;
              m[i][4] = 1.0;
              m[i][5] = sign * table[mask];
            }
            std::array<double, 5> x{};
            if (!solve<5>(m, x)) continue;
            const std::vector<double> coeffs{x[0], x[1], x[2], x[3]};
            double worst = 0.0;
            for (std::uint64_t s = 0; s < 8; ++s) worst = std::max(worst, std::abs(table[s] - lin(coeffs, s)));
            if (worst <= x[4] + 1e-9) best = std::min(best, worst);
          }
  return best;
}

/// Coordinate descent on mu * log sum exp(+-(f - g) / mu), with the smoothing
/// parameter lowered geometrically. Returns the true max residual of the final
/// coefficients, which upper-bounds the Chebyshev distance.
inline double chebyshev_descent(const std::vector<double>& table, int n, std::vector<double>* coeffs_out = nullptr) {
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  // Start from the mean so the constant term is sensible.
  double mean = 0.0;
  for (double v : table) mean += v;
  c[0] = mean / static_cast<double>(size);
  std::vector<double> r(size);
  const auto residuals = [&] {
    for (std::uint64_t s = 0; s < size; ++s) r[s] = table[s] - lin(c, s);
  };
  // First and second derivative of the smoothed objective along coordinate j
  // after a step h.
  const auto derivs = [&](std::size_t j, double h, double mu, double& d1, double& d2) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::uint64_t s = 0; s < size; ++s) {
      const bool in = j == 0 || ((s >> (j - 1)) & 1U);
      top = std::max(top, std::abs(r[s] - (in ? h : 0.0)));
    }
    double num = 0.0;
    double mass = 0.0;
    double den = 0.0;
    for (std::uint64_t s = 0; s < size; ++s) {
      const bool in = j == 0 || ((s >> (j - 1)) & 1U);
      const double v = r[s] - (in ? h : 0.0);
      const double wp = std::exp((v - top) / mu);
      const double wm = std::exp((-v - top) / mu);
      den += wp + wm;
      if (in) {
        num += wm - wp;
        mass += wp + wm;
      }
    }
    d1 = num / den;
    d2 = (mass / den - d1 * d1) / mu;
  };
  double span = 0.0;
  for (double v : table) span = std::max(span, std::abs(v));
  span = std::max(span, 1.0);
  for (double mu = span; mu > 1e-7; mu *= 0.25) {
    for (int sweep = 0; sweep < 3000; ++sweep) {
      double moved = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) {
        residuals();
        // The slope is increasing in h: bracket its root, then Newton steps
        // that fall back to bisection when they leave the bracket.
        double d1 = 0.0;
        double d2 = 0.0;
        double lo = -mu;
        double hi = mu;
        for (derivs(j, lo, mu, d1, d2); d1 > 0; derivs(j, lo, mu, d1, d2)) lo *= 2.0;
        for (derivs(j, hi, mu, d1, d2); d1 < 0; derivs(j, hi, mu, d1, d2)) hi *= 2.0;
        double h = 0.0;
        for (int it = 0; it < 200 && hi - lo > 1e-13 * span; ++it) {
          derivs(j, h, mu, d1, d2);
          if (d1 == 0) break;
          (d1 > 0 ? hi : lo) = h;
          const double next = h - d1 / d2;
          h = (d2 > 0 && next > lo && next < hi) ? next : 0.5 * (lo + hi);
          if (std::abs(d1) < 1e-15) break;
        }
        c[j] += h;
        moved = std::max(moved, std::abs(h));
      }
      if (moved < 1e-10 * span) break;
    }
  }
  residuals();
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  if (coeffs_out) *coeffs_out = c;
  return worst;
}

}  // namespace oracle
