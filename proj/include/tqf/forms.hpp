#pragma once

// Classically integral positive definite ternary quadratic forms.
//
// A form is stored by its six coefficients
//   c1 x^2 + c2 y^2 + c3 z^2 + c23 yz + c13 xz + c12 xy
// with even cross coefficients, so the Gram matrix
//   [[c1, c12/2, c13/2], [c12/2, c2, c23/2], [c13/2, c23/2, c3]]
// is integral. Transforms act on the right: g = U^T f U.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tqf/arith.hpp"

namespace tqf {

using Vec3 = std::array<i64, 3>;
using Mat3 = std::array<std::array<i64, 3>, 3>;

struct TernaryForm {
  i64 c1 = 0, c2 = 0, c3 = 0;
  i64 c23 = 0, c13 = 0, c12 = 0;

  auto tie() const { return std::tie(c1, c2, c3, c23, c13, c12); }
  bool operator==(const TernaryForm&) const = default;
  auto operator<=>(const TernaryForm& o) const { return tie() <=> o.tie(); }
};

/// U with U^T Gram(f) U = Gram(g) for a certified pair (f, g).
struct EquivalenceCertificate {
  Mat3 U{};
  bool operator==(const EquivalenceCertificate&) const = default;
};

// ---------------------------------------------------------------- matrices

inline constexpr Mat3 identity3() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline i64 det3(const Mat3& m) {
  i128 d = static_cast<i128>(m[0][0]) * (static_cast<i128>(m[1][1]) * m[2][2] - static_cast<i128>(m[1][2]) * m[2][1]) -
           static_cast<i128>(m[0][1]) * (static_cast<i128>(m[1][0]) * m[2][2] - static_cast<i128>(m[1][2]) * m[2][0]) +
           static_cast<i128>(m[0][2]) * (static_cast<i128>(m[1][0]) * m[2][1] - static_cast<i128>(m[1][1]) * m[2][0]);
  return static_cast<i64>(d);
}

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      i128 s = 0;
      for (int k = 0; k < 3; ++k) s += static_cast<i128>(a[i][k]) * b[k][j];
      c[i][j] = static_cast<i64>(s);
    }
  return c;
}

inline Mat3 transpose(const Mat3& a) {
  Mat3 t{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = a[j][i];
  return t;
}

inline Vec3 apply(const Mat3& u, const Vec3& v) {
  Vec3 w{};
  for (int i = 0; i < 3; ++i) {
    i128 s = 0;
    for (int k = 0; k < 3; ++k) s += static_cast<i128>(u[i][k]) * v[k];
    w[i] = static_cast<i64>(s);
  }
  return w;
}

/// Inverse of a unimodular integer matrix (adjugate times det).
inline Mat3 inverse_unimodular(const Mat3& m) {
  i64 d = det3(m);
  if (d != 1 && d != -1) throw invalid_input("matrix is not unimodular");
  Mat3 inv{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, k0 = (i + 1) % 3, k1 = (i + 2) % 3;
      inv[i][j] = d * (m[r0][k0] * m[r1][k1] - m[r0][k1] * m[r1][k0]);
    }
  return inv;
}

// ---------------------------------------------------------------- form basics

inline Mat3 gram(const TernaryForm& f) {
  return {{{f.c1, f.c12 / 2, f.c13 / 2}, {f.c12 / 2, f.c2, f.c23 / 2}, {f.c13 / 2, f.c23 / 2, f.c3}}};
}

inline TernaryForm from_gram(const Mat3& g) {
  return {g[0][0], g[1][1], g[2][2], 2 * g[1][2], 2 * g[0][2], 2 * g[0][1]};
}

inline i64 determinant(const TernaryForm& f) { return det3(gram(f)); }

inline bool is_positive_definite(const TernaryForm& f) {
  Mat3 g = gram(f);
  i128 m2 = static_cast<i128>(g[0][0]) * g[1][1] - static_cast<i128>(g[0][1]) * g[0][1];
  return g[0][0] > 0 && m2 > 0 && det3(g) > 0;
}

/// Throws unless f is classically integral and positive definite.
inline void validate(const TernaryForm& f) {
  if (f.c23 % 2 != 0 || f.c13 % 2 != 0 || f.c12 % 2 != 0)
    throw integrality_error("cross coefficients must be even");
  if (!is_positive_definite(f)) throw definiteness_error("form is not positive definite");
}

inline TernaryForm make_form(i64 c1, i64 c2, i64 c3, i64 c23 = 0, i64 c13 = 0, i64 c12 = 0) {
  TernaryForm f{c1, c2, c3, c23, c13, c12};
  validate(f);
  return f;
}

inline i128 evaluate_wide(const TernaryForm& f, const Vec3& v) {
  i128 x = v[0], y = v[1], z = v[2];
  return f.c1 * x * x + f.c2 * y * y + f.c3 * z * z + f.c23 * y * z + f.c13 * x * z + f.c12 * x * y;
}

inline i64 evaluate(const TernaryForm& f, const Vec3& v) { return static_cast<i64>(evaluate_wide(f, v)); }

/// Bilinear form B(u, v) = u^T Gram v.
inline i128 inner(const Mat3& g, const Vec3& u, const Vec3& v) {
  i128 s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += static_cast<i128>(u[i]) * g[i][j] * v[j];
  return s;
}

/// The form with Gram U^T Gram(f) U.
inline TernaryForm transform(const TernaryForm& f, const Mat3& u) {
  return from_gram(matmul(matmul(transpose(u), gram(f)), u));
}

inline bool certifies(const EquivalenceCertificate& cert, const TernaryForm& f, const TernaryForm& g) {
  i64 d = det3(cert.U);
  return (d == 1 || d == -1) && transform(f, cert.U) == g;
}

// ---------------------------------------------------------------- text

inline std::string format_form(const TernaryForm& f) {
  return std::to_string(f.c1) + "," + std::to_string(f.c2) + "," + std::to_string(f.c3) + "," +
         std::to_string(f.c23) + "," + std::to_string(f.c13) + "," + std::to_string(f.c12);
}

inline TernaryForm parse_form(std::string_view text) {
  std::array<i64, 6> c{};
  std::size_t pos = 0;
  for (int i = 0; i < 6; ++i) {
    std::size_t end = text.find(',', pos);
    if ((i < 5) != (end != std::string_view::npos)) throw parse_error("form must have exactly six comma-separated coefficients");
    std::string_view tok = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), c[i]);
    if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size())
      throw parse_error("bad coefficient '" + std::string(tok) + "'");
    pos = end + 1;
  }
  return make_form(c[0], c[1], c[2], c[3], c[4], c[5]);
}

/// Human-readable polynomial, e.g. "x^2+2y^2+2yz+3z^2".
inline std::string to_polynomial(const TernaryForm& f) {
  std::string out;
  auto term = [&](i64 c, const char* mono) {
    if (c == 0) return;
    if (c < 0) out += "-";
    else if (!out.empty()) out += "+";
    if (c != 1 && c != -1) out += std::to_string(c < 0 ? -c : c);
    out += mono;
  };
  term(f.c1, "x^2");
  term(f.c2, "y^2");
  term(f.c3, "z^2");
  term(f.c12, "xy");
  term(f.c13, "xz");
  term(f.c23, "yz");
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- short vectors

/// Calls fn(v, value) for every nonzero v with f(v) <= bound. Fincke-Pohst over the
/// Cholesky decomposition in long double, with exact integer filtering.
template <class Fn>
void for_each_short_vector(const TernaryForm& f, i64 bound, Fn&& fn) {
  using ld = long double;
  Mat3 g = gram(f);
  ld q11 = g[0][0];
  ld q12 = g[0][1] / q11, q13 = g[0][2] / q11;
  ld q22 = g[1][1] - g[0][1] * q12;
  ld q23 = (g[1][2] - g[0][1] * q13) / q22;
  ld q33 = static_cast<ld>(det3(g)) / (q11 * q22);
  const ld B = static_cast<ld>(bound);
  const ld slack = 1e-9L * (B + 1) + 1e-9L;
  i64 zmax = static_cast<i64>(std::floor(std::sqrt(B / q33 + slack))) + 1;
  for (i64 z = -zmax; z <= zmax; ++z) {
    ld r3 = B - q33 * z * z;
    if (r3 < -slack * q33) continue;
    ld cy = -q23 * z;
    ld ry = std::sqrt(std::max<ld>(r3, 0) / q22) + 1e-6L;
    for (i64 y = static_cast<i64>(std::ceil(cy - ry)) - 1; y <= static_cast<i64>(std::floor(cy + ry)) + 1; ++y) {
      ld t = y + q23 * z;
      ld r2 = r3 - q22 * t * t;
      if (r2 < -1e-6L * (B + 1)) continue;
      ld cx = -(q12 * y + q13 * z);
      ld rx = std::sqrt(std::max<ld>(r2, 0) / q11) + 1e-6L;
      for (i64 x = static_cast<i64>(std::ceil(cx - rx)) - 1; x <= static_cast<i64>(std::floor(cx + rx)) + 1; ++x) {
        if (x == 0 && y == 0 && z == 0) continue;
        Vec3 v{x, y, z};
        i128 val = evaluate_wide(f, v);
        if (val <= bound) fn(v, static_cast<i64>(val));
      }
    }
  }
}

// ---------------------------------------------------------------- reduction

struct Reduction {
  TernaryForm form;
  EquivalenceCertificate cert;  // cert.U maps the input to form
};

namespace detail {

// Basis columns b_j of U, Gram G = U^T F U kept in 128-bit.
struct ReductionState {
  std::array<std::array<i128, 3>, 3> G;
  Mat3 U;

  void swap_cols(int i, int j) {
    for (int r = 0; r < 3; ++r) std::swap(U[r][i], U[r][j]);
    std::swap(G[i], G[j]);
    for (int r = 0; r < 3; ++r) std::swap(G[r][i], G[r][j]);
  }

  // b_j <- b_j + q b_i
  void shear(int j, int i, i128 q) {
    for (int r = 0; r < 3; ++r) U[r][j] = static_cast<i64>(U[r][j] + q * U[r][i]);
    i128 gii = G[i][i], gij = G[i][j];
    G[j][j] += 2 * q * gij + q * q * gii;
    for (int k = 0; k < 3; ++k) {
      if (k == j) continue;
      G[j][k] += q * G[i][k];
      G[k][j] = G[j][k];
    }
  }

  void negate(int i) {
    for (int r = 0; r < 3; ++r) U[r][i] = -U[r][i];
    for (int k = 0; k < 3; ++k) {
      if (k == i) continue;
      G[i][k] = -G[i][k];
      G[k][i] = -G[k][i];
    }
  }
};

inline i128 round_div(i128 a, i128 b) {
  // nearest integer to a/b, b > 0, ties toward zero
  i128 q = a / b, r = a % b;
  if (2 * r > b) ++q;
  else if (2 * r < -b) --q;
  return q;
}

}  // namespace detail

/// Greedy Minkowski-style reduction. The output satisfies 0 < c1 <= c2 <= c3,
/// |c12| <= c1, |c13| <= c1, |c23| <= c2, no b3 +- b1 +- b2 is shorter than b3,
/// c12 >= 0 and c13 >= 0. Idempotent.
inline Reduction reduce(const TernaryForm& f) {
  validate(f);
  detail::ReductionState s;
  Mat3 g = gram(f);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s.G[i][j] = g[i][j];
  s.U = identity3();

  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2 - i; ++j)
        if (s.G[j][j] > s.G[j + 1][j + 1]) s.swap_cols(j, j + 1);
    for (int i = 0; i < 3 && !changed; ++i)
      for (int j = 0; j < 3 && !changed; ++j) {
        if (i == j) continue;
        // size-reduce b_j against the shorter b_i, only on strict decrease
        if (s.G[i][i] > s.G[j][j] || (s.G[i][i] == s.G[j][j] && i > j)) continue;
        i128 gij = s.G[i][j];
        if (2 * (gij < 0 ? -gij : gij) > s.G[i][i]) {
          s.shear(j, i, -detail::round_div(gij, s.G[i][i]));
          changed = true;
        }
      }
    if (changed) continue;
    for (int e1 : {1, -1})
      for (int e2 : {1, -1}) {
        if (changed) break;
        i128 n = s.G[2][2] + s.G[0][0] + s.G[1][1] + 2 * e1 * s.G[0][2] + 2 * e2 * s.G[1][2] + 2 * e1 * e2 * s.G[0][1];
        if (n < s.G[2][2]) {
          s.shear(2, 0, e1);
          s.shear(2, 1, e2);
          changed = true;
        }
      }
  }
  if (s.G[0][1] < 0) s.negate(1);
  if (s.G[0][2] < 0) s.negate(2);
  if (s.G[1][2] < 0) {
    if (s.G[0][1] == 0) s.negate(1);
    else if (s.G[0][2] == 0) s.negate(2);
  }
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = static_cast<i64>(s.G[i][j]);
  return {from_gram(out), {s.U}};
}

inline bool satisfies_reduction_bounds(const TernaryForm& g) {
  auto abs = [](i64 v) { return v < 0 ? -v : v; };
  return 0 < g.c1 && g.c1 <= g.c2 && g.c2 <= g.c3 && abs(g.c12) <= g.c1 && abs(g.c13) <= g.c1 && abs(g.c23) <= g.c2;
}

// ---------------------------------------------------------------- isometries

namespace detail {

struct ShortVector {
  Vec3 v;
  i64 value;
};

inline std::vector<ShortVector> short_vectors(const TernaryForm& f, i64 bound) {
  std::vector<ShortVector> out;
  for_each_short_vector(f, bound, [&](const Vec3& v, i64 val) { out.push_back({v, val}); });
  std::sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) {
    return std::tie(a.value, a.v) < std::tie(b.value, b.v);
  });
  return out;
}

inline Mat3 from_columns(const Vec3& a, const Vec3& b, const Vec3& c) {
  return {{{a[0], b[0], c[0]}, {a[1], b[1], c[1]}, {a[2], b[2], c[2]}}};
}

// Calls fn(U) for each U with U^T Gram(f) U matching target Gram on the diagonal and,
// when exact_cross is set, on the off-diagonal too. Stops when fn returns true.
template <class Fn>
bool search_bases(const TernaryForm& f, const std::array<i64, 3>& diag, const std::vector<ShortVector>& vecs,
                  const Mat3* target, Fn&& fn) {
  Mat3 gf = gram(f);
  std::array<std::vector<const Vec3*>, 3> cand;
  for (int i = 0; i < 3; ++i)
    for (const auto& sv : vecs)
      if (sv.value == diag[i]) cand[i].push_back(&sv.v);
  for (const Vec3* v1 : cand[0])
    for (const Vec3* v2 : cand[1]) {
      i128 p12 = inner(gf, *v1, *v2);
      if (target && p12 != (*target)[0][1]) continue;
      if (!target && 2 * (p12 < 0 ? -p12 : p12) > diag[0]) continue;
      for (const Vec3* v3 : cand[2]) {
        if (target && (inner(gf, *v1, *v3) != (*target)[0][2] || inner(gf, *v2, *v3) != (*target)[1][2])) continue;
        Mat3 u = from_columns(*v1, *v2, *v3);
        i64 d = det3(u);
        if (d != 1 && d != -1) continue;
        if (fn(u)) return true;
      }
    }
  return false;
}

}  // namespace detail

/// Certificate U with U^T Gram(f) U = Gram(g), or absent when f and g are inequivalent.
inline std::optional<EquivalenceCertificate> is_equivalent(const TernaryForm& f, const TernaryForm& g) {
  validate(f);
  validate(g);
  if (determinant(f) != determinant(g)) return std::nullopt;
  Reduction rf = reduce(f), rg = reduce(g);
  const TernaryForm& F = rf.form;
  const TernaryForm& G = rg.form;
  if (F.c1 != G.c1 || F.c2 != G.c2 || F.c3 != G.c3) return std::nullopt;  // successive minima differ
  std::array<i64, 3> diag{G.c1, G.c2, G.c3};
  auto vecs = detail::short_vectors(F, G.c3);
  Mat3 target = gram(G);
  std::optional<Mat3> found;
  detail::search_bases(F, diag, vecs, &target, [&](const Mat3& v) {
    found = v;
    return true;
  });
  if (!found) return std::nullopt;
  Mat3 u = matmul(matmul(rf.cert.U, *found), inverse_unimodular(rg.cert.U));
  return EquivalenceCertificate{u};
}

/// Lexicographically least equivalent form under the key (c1, c2, c3, -c23, -c13, -c12),
/// taken over all bases realizing the successive minima.
inline Reduction canonical(const TernaryForm& f) {
  Reduction r = reduce(f);
  const TernaryForm& R = r.form;
  std::array<i64, 3> diag{R.c1, R.c2, R.c3};
  auto vecs = detail::short_vectors(R, R.c3);
  auto key = [](const TernaryForm& h) { return std::tuple(h.c1, h.c2, h.c3, -h.c23, -h.c13, -h.c12); };
  TernaryForm best = R;
  Mat3 best_u = identity3();
  detail::search_bases(R, diag, vecs, nullptr, [&](const Mat3& u) {
    TernaryForm h = transform(R, u);
    if (key(h) < key(best)) {
      best = h;
      best_u = u;
    }
    return false;
  });
  return {best, {matmul(r.cert.U, best_u)}};
}

/// True when every value of f is even (all diagonal coefficients even). Such a form
/// is twice an integral-valued form of determinant D/8.
inline bool is_even_form(const TernaryForm& f) { return f.c1 % 2 == 0 && f.c2 % 2 == 0 && f.c3 % 2 == 0; }

/// One canonical reduced representative per class of determinant D, sorted ascending,
/// including even classes. Candidates satisfy c1 <= c2 <= c3, c1 c2 c3 <= 2D and the
/// size-reduction bounds.
inline std::vector<TernaryForm> enumerate_all_classes(i64 D) {
  if (D < 1 || D > 50) throw invalid_input("determinant must lie in [1, 50]");
  std::vector<TernaryForm> reps;
  for (i64 c1 = 1; c1 * c1 * c1 <= 2 * D; ++c1)
    for (i64 c2 = c1; c1 * c2 * c2 <= 2 * D; ++c2)
      for (i64 c3 = c2; c1 * c2 * c3 <= 2 * D; ++c3)
        for (i64 c23 = -(c2 / 2) * 2; c23 <= c2; c23 += 2)
          for (i64 c13 = -(c1 / 2) * 2; c13 <= c1; c13 += 2)
            for (i64 c12 = -(c1 / 2) * 2; c12 <= c1; c12 += 2) {
              TernaryForm f{c1, c2, c3, c23, c13, c12};
              if (!is_positive_definite(f) || determinant(f) != D) continue;
              bool seen = std::any_of(reps.begin(), reps.end(),
                                      [&](const TernaryForm& r) { return is_equivalent(f, r).has_value(); });
              if (!seen) reps.push_back(canonical(f).form);
            }
  std::sort(reps.begin(), reps.end());
  return reps;
}

/// Classes of determinant D that represent some odd integer. Even classes are
/// left out, matching the class counts of the standard tables.
inline std::vector<TernaryForm> enumerate_classes(i64 D) {
  auto all = enumerate_all_classes(D);
  std::erase_if(all, is_even_form);
  return all;
}

}  // namespace tqf
