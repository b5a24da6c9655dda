#pragma once

// Witness construction. For m >= 1 and a theorem entry of determinant D we pick
// (A, B, a, h, b) with B = 0 so that
//   m f(x, y, z) = (A x + B y + m z)^2 + a x^2 + 2 h x y + b y^2
// defines an integral form f of determinant D with f(0,0,1) = m, steer one
// coefficient of f into a residue class that no sibling class of determinant D
// represents, and certify f ~ target by an explicit isometry.

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tqf/represent.hpp"

namespace tqf {

enum class Scope { m, m1 };            // whose odd prime divisors p need (-a/p) = 1
enum class Coefficient { c1, c2 };     // which diagonal coefficient carries the separation

/// Condition on A (or on A^2) modulo `modulus`, active when m = when_res (mod when_mod).
struct DirectCondition {
  i64 when_mod = 1;
  i64 when_res = 0;
  bool on_square = false;
  i64 modulus = 1;
  std::vector<i64> residues;
};

/// The coefficient `on` of f must be = E (mod M).
struct SeparationRule {
  Coefficient on = Coefficient::c1;
  i64 E = 0;
  i64 M = 1;
};

struct CaseRule {
  std::string entry_id;
  std::string label;
  i64 m_mod = 1;
  std::vector<i64> m_res;
  i64 divisor = 1;  // m = divisor * m1
  i64 u = 1;        // a = u * a1, a1 prime
  i64 a1_mod = 1;
  i64 a1_res = 0;
  Scope scope = Scope::m;
  std::optional<SeparationRule> separation;
  std::vector<DirectCondition> direct;

  bool matches(i64 m) const {
    return std::find(m_res.begin(), m_res.end(), mod(m, m_mod)) != m_res.end();
  }
};

/// h and b grow like D m a and D^2 m^2 a, so they are kept at 128 bits.
struct Witness {
  i64 m = 0, D = 0;
  i64 A = 0, B = 0, a = 0;
  i128 h = 0, b = 0;
  bool operator==(const Witness&) const = default;
};

struct Certificate {
  std::string entry_id;
  std::string rule_label;
  i64 m = 0;              // the requested integer
  i64 stripped_m = 0;     // m after removing the entry's scale factors
  int scale_exponent = 0; // how many times the entry's scale s was removed
  int four_exponent = 0;  // extra factors of 4 removed when s != 4
  Witness witness;
  TernaryForm f;
  EquivalenceCertificate equivalence;  // U^T Gram(f) U = Gram(target)
  Vec3 vector{};
};

// ---------------------------------------------------------------- rule table

namespace detail {

inline DirectCondition a_mod(i64 modulus, std::vector<i64> res, i64 when_mod = 1, i64 when_res = 0) {
  return {when_mod, when_res, false, modulus, std::move(res)};
}
inline DirectCondition a_sq(i64 modulus, std::vector<i64> res, i64 when_mod = 1, i64 when_res = 0) {
  return {when_mod, when_res, true, modulus, std::move(res)};
}
inline SeparationRule on_c1(i64 E, i64 M) { return {Coefficient::c1, E, M}; }
inline SeparationRule on_c2(i64 E, i64 M) { return {Coefficient::c2, E, M}; }

template <class Pred>
std::vector<i64> residues(i64 modulus, Pred keep) {
  std::vector<i64> out;
  for (i64 x = 0; x < modulus; ++x)
    if (keep(x)) out.push_back(x);
  return out;
}

}  // namespace detail

/// One row of the x^2+2y^2+5z^2 subcase table: A^2 = E m - a (mod M) over the
/// class m = m_res (mod m_mod). Printed values are kept beside corrected ones.
struct Table1Row {
  int case_no, subcase_no;
  i64 m_mod, m_res;
  i64 printed_E, printed_a;
  i64 E, a;
  i64 M;
  std::vector<i64> squares;
};

inline const std::vector<Table1Row>& table1() {
  static const std::vector<Table1Row> rows = [] {
    const std::vector<i64> s9{9, 49, 89, 129, 169, 209, 249, 289, 329, 369};
    const std::vector<i64> s1{1, 41, 81, 121, 161, 201, 241, 281, 321, 361};
    const std::vector<i64> e9{9, 89, 169, 249, 329, 409, 489, 569, 649, 729};
    const std::vector<i64> e41{41, 121, 201, 281, 361, 441, 521, 601, 681, 761};
    const std::vector<i64> e49{49, 129, 209, 289, 369, 449, 529, 609, 689, 769};
    const std::vector<i64> e1{1, 81, 161, 241, 321, 401, 481, 561, 641, 721};
    return std::vector<Table1Row>{
        {1, 1, 20, 1, 22, 13, 22, 13, 400, s9},
        {1, 1, 20, 9, 22, 37, 22, 37, 400, s1},
        {1, 1, 20, 13, 22, 37, 22, 37, 400, s9},
        {1, 1, 20, 17, 22, 37, 22, 13, 400, s1},  // printed a = 37 misses the listed set
        {1, 2, 20, 3, 6, 17, 6, 17, 400, s1},
        {1, 2, 20, 7, 6, 17, 38, 17, 400, s9},    // printed E = 6 misses the listed set
        {1, 2, 20, 11, 6, 17, 6, 17, 400, s9},
        {1, 2, 20, 19, 22, 17, 22, 17, 400, s1},
        {2, 1, 40, 2, 6, 3, 6, 3, 800, e9},
        {2, 1, 40, 18, 38, 3, 38, 3, 800, e41},
        {2, 1, 40, 26, 22, 3, 22, 3, 800, e9},
        {2, 1, 40, 34, 6, 3, 6, 3, 800, e41},
        {2, 2, 40, 6, 22, 3, 22, 3, 800, e49},
        {2, 2, 40, 14, 38, 3, 38, 3, 800, e49},
        {2, 2, 40, 22, 6, 3, 6, 3, 800, e49},
        {2, 2, 40, 38, 38, 3, 38, 3, 800, e1},
        {3, 1, 100, 5, 6, 5, 6, 5, 400, {25, 225}},
        {3, 1, 100, 45, 54, 5, 54, 5, 400, {25, 225}},
        {3, 2, 100, 55, 38, 65, 38, 65, 400, {25, 225}},
        {3, 2, 100, 95, 22, 65, 22, 65, 400, {25, 225}},
        {4, 1, 200, 130, 22, 35, 22, 35, 800, {25, 425}},
        {4, 1, 200, 170, 38, 35, 38, 35, 800, {25, 425}},
        {4, 2, 200, 30, 22, 35, 22, 35, 800, {225, 625}},
        {4, 2, 200, 70, 38, 35, 38, 35, 800, {225, 625}},
    };
  }();
  return rows;
}

inline const std::vector<CaseRule>& rules_table() {
  static const std::vector<CaseRule> rules = [] {
    using namespace detail;
    std::vector<CaseRule> r;
    const auto M = Scope::m;
    const auto M1 = Scope::m1;

    // x^2+y^2+2z^2: determinant 2 has a single class, no separation needed
    r.push_back({"1a", "1a case 1", 16, {1, 5, 9, 13}, 1, 1, 8, 1, M, {}, {}});
    r.push_back({"1a", "1a case 2", 16, {3, 7, 11, 15}, 1, 1, 8, 5, M, {}, {}});
    r.push_back({"1a", "1a case 3", 16, {2}, 2, 1, 8, 1, M1, {}, {}});
    r.push_back({"1a", "1a case 4", 16, {10}, 2, 1, 8, 1, M1, {}, {}});
    r.push_back({"1a", "1a case 5", 16, {6}, 2, 2, 8, 1, M1, {}, {}});

    // x^2+y^2+3z^2: c1 = 5 (mod 8)
    const auto s1b = on_c1(5, 8);
    r.push_back({"1b", "1b case 1 subcase 1", 12, {1, 5}, 1, 1, 24, 1, M, s1b,
                 {a_mod(8, {2, 6}, 8, 1), a_sq(8, {0}, 8, 5)}});
    r.push_back({"1b", "1b case 1 subcase 2", 36, {21}, 3, 3, 8, 7, M1, s1b, {}});
    r.push_back({"1b", "1b case 2 subcase 1", 12, {7, 11}, 1, 1, 24, 7, M, s1b,
                 {a_sq(8, {0}, 8, 3), a_mod(8, {2, 6}, 8, 7)}});
    r.push_back({"1b", "1b case 2 subcase 2", 36, {3}, 3, 3, 8, 1, M1, s1b, {}});
    r.push_back({"1b", "1b case 3 subcase 1", 48, {2, 10, 26, 34}, 2, 1, 48, 1, M1, s1b,
                 {a_sq(16, {1}, 16, 10), a_sq(16, {9}, 16, 2)}});
    r.push_back({"1b", "1b case 3 subcase 2", 48, {14, 22, 38, 46}, 2, 1, 48, 13, M1, s1b, {a_sq(8, {1})}});
    r.push_back({"1b", "1b case 3 subcase 3a", 288, {102, 246}, 6, 3, 8, 7, M1, s1b, {}});
    r.push_back({"1b", "1b case 3 subcase 3b", 288, {30, 174}, 6, 3, 8, 7, M1, s1b, {}});
    r.push_back({"1b", "1b case 3 subcase 4", 72, {66}, 6, 3, 8, 3, M1, s1b, {}});

    // x^2+2y^2+2z^2: c1 = 3 (mod 8)
    const auto s1c = on_c1(3, 8);
    r.push_back({"1c", "1c case 1", 8, {1}, 1, 2, 4, 1, M, s1c, {a_mod(2, {1})}});
    r.push_back({"1c", "1c case 2", 8, {5}, 1, 2, 4, 3, M, s1c, {a_mod(2, {1})}});
    r.push_back({"1c", "1c case 3 subcase 1", 16, {2}, 2, 2, 8, 1, M1, s1c, {a_mod(8, {2, 6})}});
    r.push_back({"1c", "1c case 3 subcase 2", 16, {10}, 2, 2, 8, 5, M1, s1c, {a_mod(8, {2, 6})}});
    r.push_back({"1c", "1c case 4 subcase 1", 16, {6}, 2, 2, 8, 7, M1, s1c, {a_mod(8, {2, 6})}});
    r.push_back({"1c", "1c case 4 subcase 2", 16, {14}, 2, 2, 8, 3, M1, s1c, {a_mod(8, {2, 6})}});
    r.push_back({"1c", "1c case 5", 8, {3}, 1, 8, 4, 3, M, s1c, {a_mod(2, {1})}});

    // x^2+2y^2+3z^2: c1 = 3 (mod 9)
    const auto s1d = on_c1(3, 9);
    r.push_back({"1d", "1d case 1 subcase 1", 12, {1, 5}, 1, 1, 72, 11, M, s1d, {}});
    r.push_back({"1d", "1d case 1 subcase 2", 12, {9}, 1, 1, 72, 11, M, s1d, {}});
    r.push_back({"1d", "1d case 2 subcase 1", 12, {7, 11}, 1, 1, 72, 41, M, s1d, {}});
    r.push_back({"1d", "1d case 2 subcase 2", 12, {3}, 1, 1, 72, 41, M, s1d, {}});
    r.push_back({"1d", "1d case 3 subcase 1", 16, {2}, 2, 2, 36, 1, M1, s1d, {}});
    r.push_back({"1d", "1d case 3 subcase 2", 16, {6, 14}, 2, 1, 36, 5, M1, s1d, {}});

    // x^2+2y^2+4z^2: c1 = 6 (mod 16)
    const auto s1e = on_c1(6, 16);
    r.push_back({"1e", "1e case 1", 16, {1, 9}, 1, 2, 16, 3, M, s1e, {a_mod(4, {0})}});
    r.push_back({"1e", "1e case 2", 16, {3, 11}, 1, 2, 16, 1, M, s1e, {a_mod(4, {0})}});
    r.push_back({"1e", "1e case 3", 16, {5, 13}, 1, 2, 16, 7, M, s1e, {a_mod(4, {0})}});
    r.push_back({"1e", "1e case 4", 16, {7, 15}, 1, 2, 16, 5, M, s1e, {a_mod(4, {0})}});
    r.push_back({"1e", "1e case 5", 16, {2}, 2, 8, 32, 1, M1, s1e, {a_mod(32, {2})}});
    r.push_back({"1e", "1e case 6", 16, {6}, 2, 32, 32, 1, M1, s1e, {a_mod(32, {2})}});
    r.push_back({"1e", "1e case 7", 16, {10}, 2, 8, 32, 7, M1, s1e, {a_mod(32, {2})}});

    // x^2+2y^2+5z^2: c1 = 6 (mod 16), A^2 classes from the subcase table
    const auto s1f = on_c1(6, 16);
    for (const auto& row : table1()) {
      std::string label = "1f case " + std::to_string(row.case_no) + " subcase " + std::to_string(row.subcase_no) +
                          " m=" + std::to_string(row.m_res) + " mod " + std::to_string(row.m_mod);
      CaseRule c{"1f", label, row.m_mod, {row.m_res}, 1, 1, row.M, row.a, M, s1f, {a_sq(row.M, row.squares)}};
      if (row.case_no == 2 || row.case_no == 4) continue;
      if (row.case_no == 3) {
        c.divisor = 5, c.u = 5, c.scope = M1;
        c.a1_res = row.a / 5;
      }
      r.push_back(c);
    }
    // Even m. With a odd and b/m even every diagonal coefficient of f is even,
    // which puts f in the even class of determinant 10; these shapes keep an odd
    // coefficient and move the separation to c2 where c1 cannot carry it.
    auto case2 = [](i64 r16) { return residues(80, [=](i64 x) { return x % 16 == r16 && x % 5 != 0; }); };
    r.push_back({"1f", "1f case 2 m=2 mod 16", 80, case2(2), 2, 4, 80, 3, M1, s1f, {}});
    r.push_back({"1f", "1f case 2 m=6 mod 16", 80, case2(6), 2, 32, 80, 1, M1, s1f, {}});
    r.push_back({"1f", "1f case 2 m=10 mod 16", 80, case2(10), 2, 4, 80, 3, M1, s1f, {}});
    r.push_back({"1f", "1f case 2 m=14 mod 16", 80, case2(14), 2, 1, 80, 13, M1, on_c2(24, 64), {}});
    auto case4 = [](i64 r16) {
      return residues(400, [=](i64 x) { return x % 16 == r16 && x % 10 == 0 && (x % 25 == 5 || x % 25 == 20); });
    };
    r.push_back({"1f", "1f case 4 m=2 mod 16", 400, case4(2), 10, 10, 4, 1, M1, on_c2(6, 16), {}});
    r.push_back({"1f", "1f case 4 m=6 mod 16", 400, case4(6), 10, 10, 4, 1, M1, on_c2(24, 64), {}});
    r.push_back({"1f", "1f case 4 m=10 mod 16", 400, case4(10), 10, 10, 4, 3, M1, on_c2(6, 16), {}});
    r.push_back({"1f", "1f case 4 m=14 mod 16", 400, case4(14), 10, 5, 4, 1, M1, on_c2(24, 64), {}});

    // x^2+y^2+5z^2: c1 = 5 (mod 1000), or 30 (mod 1000) for m = 6 (mod 8)
    r.push_back({"2a", "2a case 1 subcase 1", 8, {1, 5}, 1, 1, 1000, 1, M, on_c1(5, 1000), {}});
    r.push_back({"2a", "2a case 1 subcase 2", 8, {2}, 2, 1, 1000, 1, M1, on_c1(5, 1000), {}});
    r.push_back({"2a", "2a case 1 subcase 3", 8, {6}, 2, 1, 1000, 11, M1, on_c1(30, 1000), {}});
    r.push_back({"2a", "2a case 2", 8, {7}, 1, 2, 1000, 13, M, on_c1(5, 1000), {}});

    // x^2+2y^2+2yz+3z^2: c1 = 3 (mod 8)
    const auto s2b = on_c1(3, 8);
    r.push_back({"2b", "2b case 1 subcase 1", 40, {1, 9, 17, 33}, 1, 1, 200, 3, M, s2b, {a_sq(200, {0})}});
    r.push_back({"2b", "2b case 1 subcase 2", 40, {3, 11, 19, 27}, 1, 1, 200, 17, M, s2b, {a_sq(200, {0})}});
    r.push_back({"2b", "2b case 1 subcase 3", 40, {13, 21, 29, 37}, 1, 1, 200, 7, M, s2b, {a_sq(200, {0})}});
    r.push_back({"2b", "2b case 1 subcase 4", 40, {7, 23, 31, 39}, 1, 1, 200, 13, M, s2b, {a_sq(200, {0})}});
    r.push_back({"2b", "2b case 2 subcase 1", 80, {2, 18, 34, 66}, 2, 1, 40, 13, M1, s2b, {}});
    r.push_back({"2b", "2b case 2 subcase 2", 80, {6, 22, 38, 54}, 2, 1, 40, 17, M1, s2b, {}});
    r.push_back({"2b", "2b case 2 subcase 3", 80, {26, 42, 58, 74}, 2, 1, 40, 13, M1, s2b, {}});
    r.push_back({"2b", "2b case 2 subcase 4", 80, {14, 46, 62, 78}, 2, 1, 40, 17, M1, s2b, {}});
    r.push_back({"2b", "2b case 3 subcase 1", 200, {65, 85, 165, 185}, 5, 5, 4, 3, M1, s2b, {}});
    r.push_back({"2b", "2b case 3 subcase 2", 200, {15, 35, 115, 135}, 5, 5, 200, 1, M1, s2b, {}});
    r.push_back({"2b", "2b case 4 subcase 1", 200, {10, 90}, 10, 5, 8, 1, M1, s2b, {}});
    r.push_back({"2b", "2b case 4 subcase 2", 200, {110, 190}, 10, 5, 8, 5, M1, s2b, {}});

    // x^2+y^2+6z^2: c1 = 10 (mod 16)
    const auto s3 = on_c1(10, 16);
    r.push_back({"3", "3 case 1 subcase 1", 12, {1, 5}, 1, 1, 48, 1, M, s3,
                 {a_sq(16, {9}, 8, 1), a_sq(16, {1}, 8, 5)}});
    r.push_back({"3", "3 case 1 subcase 2a", 72, {33}, 3, 3, 16, 3, M1, s3, {}});
    r.push_back({"3", "3 case 1 subcase 2b", 72, {69}, 3, 3, 16, 11, M1, s3, {}});
    r.push_back({"3", "3 case 2 subcase 1a", 24, {11, 19}, 1, 1, 48, 37, M, s3, {}});
    r.push_back({"3", "3 case 2 subcase 1b", 24, {7, 23}, 1, 1, 48, 13, M, s3, {}});
    r.push_back({"3", "3 case 2 subcase 2", 36, {15}, 3, 3, 8, 7, M1, s3, {}});
    // m = 2 (mod 4): same parity repair as for x^2+2y^2+5z^2
    auto case3 = [](std::vector<i64> r16) {
      return residues(48, [=](i64 x) { return x % 3 != 0 && std::find(r16.begin(), r16.end(), x % 16) != r16.end(); });
    };
    r.push_back({"3", "3 case 3 m=2 mod 16", 48, case3({2}), 2, 1, 48, 1, M1, on_c2(40, 64), {}});
    r.push_back({"3", "3 case 3 m=6 mod 8", 48, case3({6, 14}), 2, 4, 48, 7, M1, s3, {}});
    r.push_back({"3", "3 case 3 m=10 mod 16", 48, case3({10}), 2, 32, 48, 5, M1, s3, {}});
    auto case4_3 = [](i64 r16) { return residues(144, [=](i64 x) { return x % 16 == r16 && (x % 72 == 6 || x % 72 == 42); }); };
    r.push_back({"3", "3 case 4 m=2 mod 16", 144, case4_3(2), 6, 3, 4, 3, M1, on_c2(40, 64), {}});
    r.push_back({"3", "3 case 4 m=6 mod 16", 144, case4_3(6), 6, 6, 4, 1, M1, on_c2(10, 16), {}});
    r.push_back({"3", "3 case 4 m=10 mod 16", 144, case4_3(10), 6, 6, 4, 1, M1, on_c2(40, 64), {}});
    r.push_back({"3", "3 case 4 m=14 mod 16", 144, case4_3(14), 6, 6, 4, 3, M1, on_c2(10, 16), {}});
    return r;
  }();
  return rules;
}

inline std::vector<const CaseRule*> rules_for(const std::string& entry_id) {
  std::vector<const CaseRule*> out;
  for (const auto& r : rules_table())
    if (r.entry_id == entry_id) out.push_back(&r);
  return out;
}

/// Scale factors removed before classification, as (scale, square root).
inline std::vector<std::pair<i64, i64>> strip_scales(const TheoremEntry& e) {
  std::vector<std::pair<i64, i64>> out;
  i64 root = e.spec.s == 4 ? 2 : e.spec.s == 9 ? 3 : e.spec.s == 25 ? 5 : 0;
  if (root == 0) throw invalid_input("unsupported scale factor");
  out.emplace_back(e.spec.s, root);
  if (e.spec.s != 4) out.emplace_back(4, 2);
  return out;
}

inline std::vector<const CaseRule*> matching_rules(const std::string& entry_id, i64 m) {
  std::vector<const CaseRule*> out;
  for (const CaseRule* r : rules_for(entry_id))
    if (r->matches(m)) out.push_back(r);
  return out;
}

/// The unique rule covering m; m must be admissible and free of the strip scales.
inline const CaseRule& classify(const std::string& entry_id, i64 m) {
  const TheoremEntry& e = find_entry(entry_id);
  if (m < 1) throw invalid_input("m must be positive");
  if (is_excluded(e.spec, m)) throw excluded_input(std::to_string(m) + " is excluded for entry " + entry_id);
  for (auto [s, root] : strip_scales(e))
    if (m % s == 0) throw invalid_input(std::to_string(m) + " is divisible by the strip scale " + std::to_string(s));
  auto hits = matching_rules(entry_id, m);
  if (hits.empty()) throw construction_error("no rule of entry " + entry_id + " matches m = " + std::to_string(m));
  if (hits.size() > 1) throw construction_error("several rules of entry " + entry_id + " match m = " + std::to_string(m));
  return *hits.front();
}

// ---------------------------------------------------------------- choosers

namespace detail {

inline bool has_even_class(i64 D) {
  static std::mutex mu;
  static std::map<i64, bool> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(D);
  if (it != cache.end()) return it->second;
  bool even = false;
  if (D % 2 == 0 && D <= 50) {
    auto all = enumerate_all_classes(D);
    even = std::any_of(all.begin(), all.end(), is_even_form);
  }
  return cache[D] = even;
}

inline i64 lcm(i64 a, i64 b) { return a / std::gcd(a, b) * b; }

// c = E (mod M) and c = 1 (mod 2), or absent when incompatible.
inline std::optional<std::pair<i64, i64>> with_odd(std::optional<std::pair<i64, i64>> c) {
  if (!c) return std::pair<i64, i64>{1, 2};
  auto [E, M] = *c;
  if (M % 2 == 0) return E % 2 == 1 ? c : std::nullopt;
  return std::pair<i64, i64>{crt(mod(E, M), M, 1, 2), 2 * M};
}

inline bool direct_ok(const std::vector<DirectCondition>& conds, i64 m, i64 A) {
  for (const auto& c : conds) {
    if (mod(m, c.when_mod) != c.when_res) continue;
    i64 v = c.on_square ? mulmod(A, A, c.modulus) : mod(A, c.modulus);
    if (std::find(c.residues.begin(), c.residues.end(), v) == c.residues.end()) return false;
  }
  return true;
}

}  // namespace detail

/// Target residue class for a quantity: value = first (mod second).
using ResidueTarget = std::pair<i64, i64>;

/// (h, b) with a b - h^2 = D m, h = 0 (mod m), b = 0 (mod m). Tries h = D m t with
/// a | D m t^2 + 1 first (then b = 0 mod Dm as well), then h = m t with a | m t^2 + D;
/// smallest t >= 1 within a route. When s_target is given, b/m must meet it.
inline std::pair<i128, i128> choose_h_b(i64 m, i64 D, i64 a, std::optional<ResidueTarget> s_target = std::nullopt) {
  if (m < 1 || D < 1 || a < 1) throw invalid_input("choose_h_b: arguments must be positive");
  struct Route {
    i64 h_scale;   // h = h_scale * t
    i64 alpha, beta;  // a | alpha t^2 + beta
  };
  std::vector<Route> routes;
  if (std::gcd(a, D * m) == 1) routes.push_back({D * m, mod(static_cast<i128>(D) * m, a), 1});
  routes.push_back({m, mod(m, a), mod(D, a)});
  const i64 k_max = s_target ? 2 * s_target->second : 1;
  for (const Route& route : routes) {
    auto roots = solve_quadratic_mod(route.alpha, route.beta, a);
    if (roots.empty()) continue;
    for (i64 k = 0; k < k_max; ++k)
      for (i64 r : roots) {
        i128 t = static_cast<i128>(r) + static_cast<i128>(k) * a;
        if (t == 0) t = a * static_cast<i128>(k_max);  // t = 0 is not allowed; revisit at the end
        i128 h = route.h_scale * t;
        i128 num = h * h + static_cast<i128>(D) * m;
        if (num % a != 0) continue;
        i128 b = num / a;
        if (b % m != 0) continue;
        if (s_target && mod(b / m, s_target->second) != mod(s_target->first, s_target->second)) continue;
        return {h, b};
      }
    // t = a, 2a, ... (root 0) checked last
    for (i64 k = 1; k <= k_max; ++k) {
      if (std::find(roots.begin(), roots.end(), 0) == roots.end()) break;
      i128 t = static_cast<i128>(a) * k;
      i128 h = route.h_scale * t;
      i128 num = h * h + static_cast<i128>(D) * m;
      i128 b = num / a;
      if (num % a != 0 || b % m != 0) continue;
      if (s_target && mod(b / m, s_target->second) != mod(s_target->first, s_target->second)) continue;
      return {h, b};
    }
  }
  throw construction_error("no (h, b) for m = " + std::to_string(m) + ", a = " + std::to_string(a));
}

/// Smallest A >= 0 with A^2 + a = 0 (mod m), (A^2 + a)/m meeting c1_target, and
/// all active direct conditions.
inline i64 choose_A(i64 m, i64 a, std::optional<ResidueTarget> c1_target, const std::vector<DirectCondition>& direct) {
  i64 n = m, c = mod(-static_cast<i128>(a), m);
  if (c1_target) {
    n = m * c1_target->second;
    c = mod(static_cast<i128>(c1_target->first) * m - a, n);
  }
  auto roots = solve_square_mod(c, n);
  if (roots.empty()) throw construction_error("A^2 = " + std::to_string(c) + " (mod " + std::to_string(n) + ") has no solution");
  i64 L = 1;
  for (const auto& d : direct)
    if (mod(m, d.when_mod) == d.when_res) L = detail::lcm(L, d.modulus);
  i64 period = L / std::gcd(L, n);
  for (i64 k = 0; k < period; ++k)
    for (i64 r : roots) {
      i64 A = r + k * n;
      if (detail::direct_ok(direct, m, A)) return A;
    }
  throw construction_error("no A meets the direct conditions for m = " + std::to_string(m));
}

/// The form f of the witness: c1 = (A^2+a)/m, c2 = (B^2+b)/m, c3 = m,
/// c12 = 2(AB+h)/m, c13 = 2A, c23 = 2B.
inline TernaryForm build_form(const Witness& w) {
  const i128 m = w.m, A = w.A, B = w.B;
  i128 n1 = A * A + w.a, n2 = B * B + w.b, n12 = A * B + w.h;
  if (m < 1 || n1 % m != 0 || n2 % m != 0 || n12 % m != 0) throw construction_error("witness congruences fail");
  for (i128 c : {n1 / m, n2 / m, 2 * (n12 / m), 2 * A})
    if (c > INT64_MAX || c < INT64_MIN) throw witness_overflow("form coefficient exceeds 64-bit range for m = " + std::to_string(w.m));
  TernaryForm f{static_cast<i64>(n1 / m), static_cast<i64>(n2 / m), w.m,
                2 * w.B, 2 * w.A, static_cast<i64>(2 * (n12 / m))};
  if (!is_positive_definite(f)) throw construction_error("built form is not positive definite");
  if (determinant(f) != w.D) throw construction_error("built form has the wrong determinant");
  return f;
}

namespace detail {

// Targets for c1 and for s = b/m under the rule's separation, forcing f to take an
// odd value when m is even and determinant D carries an even class.
struct Targets {
  std::optional<ResidueTarget> c1, s;
};

inline std::vector<Targets> targets_for(const CaseRule& rule, i64 m, i64 D) {
  Targets base;
  if (rule.separation) {
    ResidueTarget t{mod(rule.separation->E, rule.separation->M), rule.separation->M};
    (rule.separation->on == Coefficient::c1 ? base.c1 : base.s) = t;
  }
  if (m % 2 != 0 || !has_even_class(D)) return {base};
  std::vector<Targets> out;
  if (auto c1 = with_odd(base.c1)) out.push_back({c1, base.s});
  if (auto s = with_odd(base.s)) out.push_back({base.c1, s});
  return out;
}

inline std::optional<Witness> complete_witness(i64 m, i64 D, const CaseRule& rule, i64 a) {
  for (const Targets& t : targets_for(rule, m, D)) {
    try {
      auto [h, b] = choose_h_b(m, D, a, t.s);
      i64 A = choose_A(m, a, t.c1, rule.direct);
      return Witness{m, D, A, 0, a, h, b};
    } catch (const construction_error&) {
    }
  }
  return std::nullopt;
}

inline i64 scope_value(const CaseRule& rule, i64 m) { return rule.scope == Scope::m ? m : m / rule.divisor; }

}  // namespace detail

/// Cap on primes passed over by choose_a before giving up.
inline constexpr int kMaxSkippedPrimes = 64;

struct ChosenA {
  i64 a;
  int skipped;  // primes passed over because the remaining congruences had no solution
};

/// a = u a1 with a1 the smallest prime in the rule's class, a1 not dividing m, and
/// (-a/p) = 1 for each odd prime p of the rule's scope not dividing u. Primes that
/// leave the (h, b) or A congruences unsolvable are skipped and counted.
inline ChosenA choose_a_checked(i64 m, i64 D, const CaseRule& rule) {
  std::vector<SymbolCondition> conds;
  for (i64 p : odd_prime_divisors(detail::scope_value(rule, m)))
    if (rule.u % p != 0) conds.push_back({p, +1});
  std::set<i64> avoid;
  for (auto [p, e] : factorize(m)) avoid.insert(p);
  for (int skipped = 0; skipped < kMaxSkippedPrimes; ++skipped) {
    i64 q = find_prime_in_ap(rule.a1_res, rule.a1_mod, conds, rule.u, avoid);
    if (detail::complete_witness(m, D, rule, rule.u * q)) return {rule.u * q, skipped};
    avoid.insert(q);
  }
  throw construction_error("no workable a for m = " + std::to_string(m) + " under " + rule.label);
}

inline i64 choose_a(i64 m, const CaseRule& rule) {
  return choose_a_checked(m, find_entry(rule.entry_id).D, rule).a;
}

/// Full witness for a stripped, admissible m.
inline Witness construct_witness(const std::string& entry_id, i64 m) {
  const TheoremEntry& e = find_entry(entry_id);
  const CaseRule& rule = classify(entry_id, m);
  i64 a = choose_a_checked(m, e.D, rule).a;
  return *detail::complete_witness(m, e.D, rule, a);
}

/// Largest m certify accepts; keeps m * M_sep within the factorization cap.
inline constexpr i64 kMaxCertifyM = 1'000'000'000;

/// Strip the entry's scales, build the witness form for the stripped m, certify it
/// equivalent to the target and pull (0,0,1) back to a representation of m.
inline Certificate certify(const std::string& entry_id, i64 m) {
  const TheoremEntry& e = find_entry(entry_id);
  if (m < 1 || m > kMaxCertifyM) throw invalid_input("m must lie in [1, 10^9]");
  if (is_excluded(e.spec, m)) throw excluded_input(std::to_string(m) + " is excluded for entry " + entry_id);
  if (rules_for(entry_id).empty()) throw construction_error("entry " + entry_id + " has no construction rules");
  Certificate c;
  c.entry_id = entry_id;
  c.m = m;
  i64 m0 = m, mult = 1;
  for (auto [s, root] : strip_scales(e)) {
    int k = 0;
    while (m0 % s == 0) {
      m0 /= s;
      mult *= root;
      ++k;
    }
    (s == e.spec.s ? c.scale_exponent : c.four_exponent) = k;
  }
  c.stripped_m = m0;
  const CaseRule& rule = classify(entry_id, m0);
  c.rule_label = rule.label;
  i64 a = choose_a_checked(m0, e.D, rule).a;
  auto w = detail::complete_witness(m0, e.D, rule, a);
  if (!w) throw construction_error("witness incomplete for m = " + std::to_string(m0));
  c.witness = *w;
  c.f = build_form(c.witness);
  auto eq = is_equivalent(c.f, e.target);
  if (!eq) {
    throw construction_error("built form " + format_form(c.f) + " for m = " + std::to_string(m0) +
                             " lies in class " + format_form(canonical(c.f).form) + ", not the target");
  }
  c.equivalence = *eq;
  Vec3 v0 = apply(inverse_unimodular(eq->U), {0, 0, 1});
  for (auto& x : v0) x *= mult;
  c.vector = v0;
  return c;
}

/// Self-validation: every invariant a certificate promises, re-checked from scratch.
/// Returns a list of failures (empty when valid).
inline std::vector<std::string> validate_certificate(const Certificate& c) {
  std::vector<std::string> bad;
  const TheoremEntry* e = nullptr;
  try {
    e = &find_entry(c.entry_id);
  } catch (const invalid_input&) {
    return {"unknown entry"};
  }
  const Witness& w = c.witness;
  const i128 m = w.m;
  if (w.m != c.stripped_m) bad.push_back("witness m differs from stripped m");
  if (w.D != e->D) bad.push_back("witness determinant differs from entry");
  if (w.a <= 0) bad.push_back("a must be positive");
  if (m <= 0 || (static_cast<i128>(w.A) * w.A + w.a) % m != 0) bad.push_back("A^2 + a != 0 (mod m)");
  if (m <= 0 || (static_cast<i128>(w.B) * w.B + w.b) % m != 0) bad.push_back("B^2 + b != 0 (mod m)");
  if (m <= 0 || (2 * static_cast<i128>(w.A) * w.B + 2 * static_cast<i128>(w.h)) % m != 0) bad.push_back("2AB + 2h != 0 (mod m)");
  if (static_cast<i128>(w.a) * w.b - static_cast<i128>(w.h) * w.h != static_cast<i128>(w.D) * w.m) bad.push_back("ab - h^2 != Dm");
  if (m > 0 && (w.B % w.m != 0)) bad.push_back("B != 0 (mod m)");
  if (bad.empty()) {
    TernaryForm f;
    try {
      f = build_form(w);
    } catch (const construction_error& ex) {
      bad.push_back(ex.what());
      return bad;
    }
    if (f != c.f) bad.push_back("stored form differs from the witness expansion");
    for (i64 x = -5; x <= 5; ++x)
      for (i64 y = -5; y <= 5; ++y)
        for (i64 z = -5; z <= 5; ++z) {
          i128 lhs = m * evaluate_wide(c.f, {x, y, z});
          i128 lin = static_cast<i128>(w.A) * x + static_cast<i128>(w.B) * y + m * z;
          i128 rhs = lin * lin + static_cast<i128>(w.a) * x * x + 2 * static_cast<i128>(w.h) * x * y +
                     static_cast<i128>(w.b) * y * y;
          if (lhs != rhs) {
            bad.push_back("expansion identity fails");
            x = y = z = 6;
          }
        }
  }
  if (determinant(c.f) != e->D) bad.push_back("det(f) != D");
  if (evaluate(c.f, {0, 0, 1}) != c.stripped_m) bad.push_back("f(0,0,1) != stripped m");
  if (!certifies(c.equivalence, c.f, e->target)) bad.push_back("equivalence matrix identity fails");
  if (evaluate_wide(e->target, c.vector) != c.m) bad.push_back("target(vector) != m");
  return bad;
}

}  // namespace tqf
