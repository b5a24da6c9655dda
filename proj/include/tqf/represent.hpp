#pragma once

// Representability: direct search for a single m, bulk sweeps over [0, N],
// excluded-set predicates and the theorem registry.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tqf/forms.hpp"

namespace tqf {

/// Integers t with A t^2 + B t + C <= 0 (A > 0), widened by one on each side.
/// Callers filter exactly.
struct IntRange {
  i64 lo = 0, hi = -1;
};

inline IntRange quadratic_range(long double A, long double B, long double C) {
  long double disc = B * B - 4 * A * C;
  if (disc < 0) {
    // numerically empty; still probe the vertex in case of rounding
    i64 v = static_cast<i64>(std::llround(-B / (2 * A)));
    return {v - 1, v + 1};
  }
  long double r = std::sqrt(disc);
  return {static_cast<i64>(std::floor((-B - r) / (2 * A))) - 1, static_cast<i64>(std::ceil((-B + r) / (2 * A))) + 1};
}

namespace detail {

// Position of v in the order 0, 1, -1, 2, -2, ...
inline i64 signed_rank(i64 v) { return v > 0 ? 2 * v - 1 : -2 * v; }
inline i64 from_rank(i64 k) { return k % 2 == 1 ? (k + 1) / 2 : -(k / 2); }

}  // namespace detail

namespace detail {

// Scan y for one x in rank order; T is wide enough for every discriminant met.
template <class T>
std::optional<Vec3> scan_y(const TernaryForm& f, i64 m, i64 xv, IntRange yr) {
  constexpr std::uint64_t k64 = square_mask(64);
  const T c1 = f.c1, c2 = f.c2, c3 = f.c3, c12 = f.c12, c13 = f.c13, c23 = f.c23, x = xv;
  // disc(y) = P y^2 + Q y + R, the discriminant of c3 z^2 + beta z + gamma
  const T P = c23 * c23 - 4 * c3 * c2;
  const T Q = (2 * c23 * c13 - 4 * c3 * c12) * x;
  const T R = c13 * c13 * x * x - 4 * c3 * (c1 * x * x - m);
  auto solve_z = [&](T y, T disc) -> std::optional<Vec3> {
    if (disc < 0 || !((k64 >> (static_cast<std::uint64_t>(disc) & 63)) & 1) || !is_square(disc)) return std::nullopt;
    T beta = c23 * y + c13 * x;
    T r = isqrt(disc);
    std::optional<i64> best;
    for (T num : {-beta + r, -beta - r}) {
      if (num % (2 * c3) != 0) continue;
      auto z = static_cast<i64>(num / (2 * c3));
      if (!best || signed_rank(z) < signed_rank(*best)) best = z;
    }
    if (!best) return std::nullopt;
    return Vec3{xv, static_cast<i64>(y), *best};
  };
  if (yr.lo <= 0 && 0 <= yr.hi)
    if (auto v = solve_z(0, R)) return v;
  i64 ybound = std::max(yr.hi, -yr.lo);
  T dpos = R, dneg = R;
  for (i64 k = 1; k <= ybound; ++k) {
    T step = P * (2 * k - 1);
    dpos += step + Q;
    dneg += step - Q;
    if (k <= yr.hi)
      if (auto v = solve_z(k, dpos)) return v;
    if (-k >= yr.lo)
      if (auto v = solve_z(-k, dneg)) return v;
  }
  return std::nullopt;
}

}  // namespace detail

/// First solution in rank order (x, then y, then z, each over 0, 1, -1, 2, -2, ...),
/// searched exhaustively inside the completion-of-squares box.
inline std::optional<Vec3> find_representation(const TernaryForm& f, i64 m) {
  validate(f);
  if (m < 0 || m > 1'000'000'000) throw invalid_input("find_representation: m must lie in [0, 10^9]");
  if (m == 0) return Vec3{0, 0, 0};
  using ld = long double;
  const i64 D = determinant(f);
  const i128 c1 = f.c1, c2 = f.c2, c3 = f.c3, c12 = f.c12, c13 = f.c13, c23 = f.c23;
  // |x| <= sqrt(m * cof11 / D), cof11 = c2 c3 - (c23/2)^2
  ld cof11 = static_cast<ld>(4 * c2 * c3 - c23 * c23) / 4;
  i64 xmax = static_cast<i64>(std::sqrt(static_cast<ld>(m) * cof11 / D)) + 1;
  for (i64 kx = 0; kx <= 2 * xmax; ++kx) {
    i64 x = detail::from_rank(kx);
    // y with min_z f(x, y, z) <= m, scaled by 4 c3
    ld Ay = static_cast<ld>(4 * c3 * c2 - c23 * c23);
    ld By = static_cast<ld>((4 * c3 * c12 - 2 * c23 * c13) * x);
    ld Cy = static_cast<ld>((4 * c3 * c1 - c13 * c13) * x * x - 4 * c3 * m);
    IntRange yr = quadratic_range(Ay, By, Cy);
    // Bound on every intermediate of scan_y; 64-bit arithmetic when it fits.
    ld xl = std::abs(static_cast<ld>(x)), yb = std::max<ld>(yr.hi, -yr.lo) + 1;
    ld cl = static_cast<ld>(std::max({c1, c2, c3, c12 < 0 ? -c12 : c12, c13 < 0 ? -c13 : c13, c23 < 0 ? -c23 : c23}));
    ld bound = 8 * cl * cl * (xl + yb + 1) * (xl + yb + 1) + 8 * cl * m;
    auto v = bound < 0x1p61L ? detail::scan_y<i64>(f, m, x, yr) : detail::scan_y<i128>(f, m, x, yr);
    if (v) return v;
  }
  return std::nullopt;
}

inline bool represents(const TernaryForm& f, i64 m) { return find_representation(f, m).has_value(); }

/// Membership table: entry m is 1 iff f represents m, for 0 <= m <= N.
using Membership = std::vector<std::uint8_t>;

namespace detail {

// Marks f(x, y, z) <= N for the slice of z values assigned to one worker. Only
// half the lattice is visited: z > 0, or z = 0 and y > 0, or z = y = 0 and x >= 0.
inline void sweep_slice(const TernaryForm& f, i64 N, i64 z_begin, i64 z_step, i64 zmax, Membership& out) {
  using ld = long double;
  const i128 c1 = f.c1, c2 = f.c2, c3 = f.c3, c12 = f.c12, c13 = f.c13, c23 = f.c23;
  for (i64 z = z_begin; z <= zmax; z += z_step) {
    ld Ay = static_cast<ld>(4 * c1 * c2 - c12 * c12);
    ld By = static_cast<ld>((4 * c1 * c23 - 2 * c12 * c13) * z);
    ld Cy = static_cast<ld>((4 * c1 * c3 - c13 * c13) * z * z - 4 * c1 * N);
    IntRange yr = quadratic_range(Ay, By, Cy);
    if (z == 0) yr.lo = std::max<i64>(yr.lo, 0);
    for (i64 y = yr.lo; y <= yr.hi; ++y) {
      i128 lin = c12 * y + c13 * z;
      i128 cst = c2 * y * y + c3 * z * z + c23 * y * z;
      IntRange xr = quadratic_range(static_cast<ld>(c1), static_cast<ld>(lin), static_cast<ld>(cst - N));
      if (z == 0 && y == 0) xr.lo = std::max<i64>(xr.lo, 0);
      i128 x = xr.lo;
      i128 val = c1 * x * x + lin * x + cst;
      for (; x <= xr.hi; ++x) {
        if (val >= 0 && val <= N) out[static_cast<std::size_t>(val)] = 1;
        val += c1 * (2 * x + 1) + lin;
      }
    }
  }
}

}  // namespace detail

namespace detail {

inline Membership sweep_table(const TernaryForm& f, i64 N, unsigned jobs) {
  const i128 c1 = f.c1, c2 = f.c2, c12 = f.c12;
  const i64 D = determinant(f);
  long double cof33 = static_cast<long double>(4 * c1 * c2 - c12 * c12) / 4;
  i64 zmax = static_cast<i64>(std::sqrt(static_cast<long double>(N) * cof33 / D)) + 1;
  Membership table(static_cast<std::size_t>(N) + 1, 0);
  if (jobs == 1) {
    sweep_slice(f, N, 0, 1, zmax, table);
  } else {
    std::vector<Membership> parts(jobs, Membership(table.size(), 0));
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back([&, j] { sweep_slice(f, N, j, jobs, zmax, parts[j]); });
    for (auto& t : pool) t.join();
    for (const auto& p : parts)
      for (std::size_t i = 0; i < table.size(); ++i) table[i] |= p[i];
  }
  table[0] = 1;
  return table;
}

}  // namespace detail

/// Single sweep over the lattice points with f(v) <= N. Workers split the z
/// coordinate round-robin; the merged table does not depend on the worker count.
inline Membership represented_set(const TernaryForm& f, i64 N, unsigned jobs = 1) {
  validate(f);
  if (N < 0 || N > 1'000'000) throw invalid_input("represented_set: N must lie in [0, 10^6]");
  if (jobs == 0) throw invalid_input("represented_set: jobs must be positive");
  return detail::sweep_table(f, N, jobs);
}

/// Run-length text: "tqf-membership N" then alternating run lengths, starting
/// with a run of absent values (possibly 0).
inline std::string membership_to_rle(const Membership& t) {
  std::ostringstream out;
  out << "tqf-membership " << (t.empty() ? -1 : static_cast<i64>(t.size()) - 1) << "\n";
  std::uint8_t cur = 0;
  std::size_t run = 0;
  bool first = true;
  for (std::uint8_t b : t) {
    if ((b != 0) == (cur != 0)) {
      ++run;
      continue;
    }
    out << (first ? "" : ",") << run;
    first = false;
    cur = b ? 1 : 0;
    run = 1;
  }
  out << (first ? "" : ",") << run << "\n";
  return out.str();
}

inline Membership membership_from_rle(const std::string& text) {
  std::istringstream in(text);
  std::string tag;
  i64 N;
  if (!(in >> tag >> N) || tag != "tqf-membership" || N < -1) throw parse_error("bad membership header");
  Membership t;
  t.reserve(static_cast<std::size_t>(N + 1));
  std::string runs;
  in >> runs;
  std::istringstream rs(runs);
  std::string tok;
  std::uint8_t cur = 0;
  while (std::getline(rs, tok, ',')) {
    i64 len;
    try {
      std::size_t used = 0;
      len = std::stoll(tok, &used);
      if (used != tok.size() || len < 0) throw parse_error("bad run");
    } catch (const std::logic_error&) {
      throw parse_error("bad run length '" + tok + "'");
    }
    t.insert(t.end(), static_cast<std::size_t>(len), cur);
    cur ^= 1;
  }
  if (static_cast<i64>(t.size()) != N + 1) throw parse_error("run lengths do not sum to N+1");
  return t;
}

// ---------------------------------------------------------------- excluded sets

/// The set { s^k (M l + r) : k, l >= 0, r in R }.
struct ExcludedSpec {
  i64 s = 1;
  i64 M = 1;
  std::vector<i64> R;
  bool operator==(const ExcludedSpec&) const = default;
};

inline bool is_excluded(const ExcludedSpec& spec, i64 m) {
  if (m < 1) throw invalid_input("is_excluded: m must be positive");
  while (m % spec.s == 0) m /= spec.s;
  i64 r = m % spec.M;
  return std::find(spec.R.begin(), spec.R.end(), r) != spec.R.end();
}

/// Residue the built form must hit at (1,0,0): (A^2 + a)/m = E (mod M).
struct Separation {
  i64 E = 0;
  i64 M = 1;
  bool operator==(const Separation&) const = default;
};

enum class EntryKind { theorem, bonus, lemma_only };

struct TheoremEntry {
  std::string id;
  TernaryForm target;
  i64 D;
  ExcludedSpec spec;
  std::optional<Separation> separation;
  EntryKind kind = EntryKind::theorem;
};

inline const std::vector<TheoremEntry>& registry() {
  static const std::vector<TheoremEntry> entries = [] {
    std::vector<TheoremEntry> e;
    e.push_back({"1a", make_form(1, 1, 2), 2, {4, 16, {14}}, std::nullopt});
    e.push_back({"1b", make_form(1, 1, 3), 3, {9, 9, {6}}, Separation{5, 8}});
    e.push_back({"1c", make_form(1, 2, 2), 4, {4, 8, {7}}, Separation{3, 8}});
    e.push_back({"1d", make_form(1, 2, 3), 6, {4, 16, {10}}, Separation{3, 9}});
    e.push_back({"1e", make_form(1, 2, 4), 8, {4, 16, {14}}, Separation{6, 16}});
    e.push_back({"1f", make_form(1, 2, 5), 10, {25, 25, {10, 15}}, Separation{6, 16}});
    e.push_back({"2a", make_form(1, 1, 5), 5, {4, 8, {3}}, Separation{5, 25}});
    e.push_back({"2b", make_form(1, 2, 3, 2), 5, {25, 25, {5, 20}}, Separation{3, 8}});
    e.push_back({"3", make_form(1, 1, 6), 6, {9, 9, {3}}, Separation{10, 16}});
    e.push_back({"3sq", make_form(1, 1, 1), 1, {4, 8, {7}}, std::nullopt, EntryKind::bonus});
    e.push_back({"aux-d3q2", make_form(1, 2, 2, 2), 3, {4, 8, {5}}, std::nullopt, EntryKind::lemma_only});
    return e;
  }();
  return entries;
}

inline const TheoremEntry& find_entry(const std::string& id) {
  for (const auto& e : registry())
    if (e.id == id) return e;
  throw invalid_input("unknown entry id '" + id + "'");
}

}  // namespace tqf
