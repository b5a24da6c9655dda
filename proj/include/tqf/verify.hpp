#pragma once

// Verification sweeps. Every check returns a Report; failures are report
// content, never exceptions.

#include <chrono>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "tqf/mordell.hpp"

namespace tqf {

struct Mismatch {
  i64 m = 0;
  std::string diagnosis;
  bool operator==(const Mismatch&) const = default;
};

struct Report {
  std::string name;
  i64 N = 0;
  i64 checked = 0;
  i64 passed = 0;
  std::vector<Mismatch> mismatches;  // first kMaxListedMismatches, ascending
  double elapsed_seconds = 0;

  static constexpr std::size_t kMaxListedMismatches = 100;

  bool ok() const { return passed == checked; }

  void record(i64 m, bool good, const std::string& why = {}) {
    ++checked;
    if (good) {
      ++passed;
    } else if (mismatches.size() < kMaxListedMismatches) {
      mismatches.push_back({m, why});
    }
  }
};

/// Equal apart from timing.
inline bool same_outcome(const Report& a, const Report& b) {
  return a.name == b.name && a.N == b.N && a.checked == b.checked && a.passed == b.passed && a.mismatches == b.mismatches;
}

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Runs fn(m) for m in [1, N] over `jobs` workers, each writing only its own slots.
inline std::vector<std::string> parallel_diagnose(i64 N, unsigned jobs, const std::function<std::string(i64)>& fn) {
  std::vector<std::string> out(static_cast<std::size_t>(N) + 1);
  auto work = [&](unsigned j) {
    for (i64 m = 1 + j; m <= N; m += jobs) out[static_cast<std::size_t>(m)] = fn(m);
  };
  if (jobs <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work, j);
    for (auto& t : pool) t.join();
  }
  return out;
}

inline void check_jobs(unsigned jobs) {
  if (jobs == 0) throw invalid_input("jobs must be positive");
}

}  // namespace detail

/// represents(target, m) <=> not excluded, for 1 <= m <= N.
inline Report verify_characterization(const std::string& entry_id, i64 N, unsigned jobs = 1) {
  detail::check_jobs(jobs);
  const TheoremEntry& e = find_entry(entry_id);
  if (N < 1 || N > 1'000'000) throw invalid_input("N must lie in [1, 10^6]");
  detail::Stopwatch clock;
  Report r;
  r.name = "characterization " + entry_id;
  r.N = N;
  Membership table = represented_set(e.target, N, jobs);
  for (i64 m = 1; m <= N; ++m) {
    bool rep = table[static_cast<std::size_t>(m)] != 0;
    bool excluded = is_excluded(e.spec, m);
    r.record(m, rep != excluded, rep ? "represented but excluded" : "admissible but not represented");
  }
  r.elapsed_seconds = clock.seconds();
  return r;
}

/// Certify every admissible m <= N, self-validate, and cross-check against the
/// represented set.
inline Report verify_theorem(const std::string& entry_id, i64 N, unsigned jobs = 1) {
  detail::check_jobs(jobs);
  const TheoremEntry& e = find_entry(entry_id);
  if (N < 1 || N > 10'000) throw invalid_input("N must lie in [1, 10^4]");
  if (rules_for(entry_id).empty()) throw invalid_input("entry " + entry_id + " has no case table");
  detail::Stopwatch clock;
  Report r;
  r.name = "theorem " + entry_id;
  r.N = N;
  Membership table = represented_set(e.target, N, jobs);
  auto diag = detail::parallel_diagnose(N, jobs, [&](i64 m) -> std::string {
    if (is_excluded(e.spec, m)) return {};
    try {
      Certificate c = certify(entry_id, m);
      auto bad = validate_certificate(c);
      if (!bad.empty()) return c.rule_label + ": " + bad.front();
      if (!table[static_cast<std::size_t>(m)]) return "certified but the sweep marks it unrepresented";
      return "ok";
    } catch (const std::exception& ex) {
      return ex.what();
    }
  });
  for (i64 m = 1; m <= N; ++m) {
    const std::string& d = diag[static_cast<std::size_t>(m)];
    if (!d.empty()) r.record(m, d == "ok", d);
  }
  r.elapsed_seconds = clock.seconds();
  return r;
}

/// Each of the 24 subcase rows: E = 6 (mod 16); the listed squares are exactly
/// {E m - a mod M} over the row's class; each listed value is a square mod M.
/// Mismatch keys are row numbers 1..24.
inline Report verify_table1() {
  detail::Stopwatch clock;
  Report r;
  r.name = "table1";
  r.N = static_cast<i64>(table1().size());
  i64 idx = 0;
  for (const Table1Row& row : table1()) {
    ++idx;
    std::string tag = "row (" + std::to_string(row.case_no) + "," + std::to_string(row.subcase_no) + ") m=" +
                      std::to_string(row.m_res) + " mod " + std::to_string(row.m_mod) + ": ";
    r.record(idx, mod(row.E, 16) == 6, tag + "E is not 6 mod 16");
    std::set<i64> got;
    for (i64 m = row.m_res; m < row.M; m += row.m_mod) got.insert(mod(static_cast<i128>(row.E) * m - row.a, row.M));
    r.record(idx, got == std::set<i64>(row.squares.begin(), row.squares.end()), tag + "listed set differs from E m - a");
    bool all_squares = true;
    for (i64 v : row.squares) {
      bool sq = false;
      for (i64 x = 0; x < row.M && !sq; ++x) sq = x * x % row.M == v;
      all_squares = all_squares && sq;
    }
    r.record(idx, all_squares, tag + "a listed value is not a square");
  }
  r.elapsed_seconds = clock.seconds();
  return r;
}

/// Rows whose printed (E, a) disagree with the listed squares; corrected values
/// are used everywhere else.
inline std::vector<const Table1Row*> table1_printed_discrepancies() {
  std::vector<const Table1Row*> out;
  for (const Table1Row& row : table1()) {
    std::set<i64> got;
    for (i64 m = row.m_res; m < row.M; m += row.m_mod)
      got.insert(mod(static_cast<i128>(row.printed_E) * m - row.printed_a, row.M));
    if (got != std::set<i64>(row.squares.begin(), row.squares.end())) out.push_back(&row);
  }
  return out;
}

/// Separation pairs a form f with f odd and the given coefficient in E (mod M)
/// relies on, per entry: the entry's own pair plus every pair its rules use.
inline std::vector<std::pair<i64, i64>> separation_pairs(const TheoremEntry& e) {
  std::set<std::pair<i64, i64>> s;
  if (e.separation) s.insert({e.separation->E, e.separation->M});
  for (const CaseRule* rule : rules_for(e.id))
    if (rule->separation) s.insert({rule->separation->E, rule->separation->M});
  return {s.begin(), s.end()};
}

namespace detail {

struct DescentProperty {
  std::string name;
  std::string entry_id;
  i64 scale;
  bool even_only;
  bool both_ways;
};

inline const std::vector<DescentProperty>& descent_properties() {
  static const std::vector<DescentProperty> props{
      {"x^2+y^2+2z^2, even m: 4m <=> m", "1a", 4, true, true},
      {"x^2+2y^2+2yz+2z^2: 4m => m", "aux-d3q2", 4, false, false},
      {"x^2+y^2+3z^2: 9m => m", "1b", 9, false, false},
      {"x^2+y^2+6z^2: 9m => m", "3", 9, false, false},
      {"x^2+2y^2+2z^2: 4m => m", "1c", 4, false, false},
      {"x^2+2y^2+3z^2, even m: 4m => m", "1d", 4, true, false},
      {"x^2+2y^2+5z^2: 25m <=> m", "1f", 25, false, true},
      {"x^2+y^2+5z^2: 4m => m", "2a", 4, false, false},
      {"x^2+2y^2+2yz+3z^2: 25m => m", "2b", 25, false, false},
  };
  return props;
}

}  // namespace detail

/// Descent lemmas and separation facts up to N. Mismatch keys are the offending m.
inline Report verify_lemmas(i64 N, unsigned jobs = 1) {
  detail::check_jobs(jobs);
  if (N < 1 || N > 100'000) throw invalid_input("N must lie in [1, 10^5]");
  detail::Stopwatch clock;
  Report r;
  r.name = "lemmas";
  r.N = N;

  for (const auto& p : detail::descent_properties()) {
    const TheoremEntry& e = find_entry(p.entry_id);
    Membership t = detail::sweep_table(e.target, p.scale * N, jobs);
    for (i64 m = 1; m <= N; ++m) {
      if (p.even_only && m % 2 != 0) continue;
      bool small = t[static_cast<std::size_t>(m)] != 0;
      bool big = t[static_cast<std::size_t>(p.scale * m)] != 0;
      bool good = p.both_ways ? small == big : (!big || small);
      r.record(m, good, p.name);
    }
  }

  // Siblings of each target among the odd classes of determinant D miss every
  // separation residue; even classes take no odd value at all.
  std::set<i64> seen_even;
  for (const TheoremEntry& e : registry()) {
    if (e.kind != EntryKind::theorem) continue;
    auto pairs = separation_pairs(e);
    for (const TernaryForm& cls : enumerate_all_classes(e.D)) {
      if (is_equivalent(cls, e.target)) continue;
      Membership t = detail::sweep_table(cls, N, jobs);
      if (is_even_form(cls)) {
        if (!seen_even.insert(e.D).second) continue;
        for (i64 m = 1; m <= N; m += 2)
          r.record(m, t[static_cast<std::size_t>(m)] == 0, "even class " + format_form(cls) + " takes an odd value");
        continue;
      }
      for (auto [E, M] : pairs)
        for (i64 m = mod(E, M) == 0 ? M : mod(E, M); m <= N; m += M)
          r.record(m, t[static_cast<std::size_t>(m)] == 0,
                   "class " + format_form(cls) + " represents " + std::to_string(E) + " mod " + std::to_string(M));
    }
  }
  std::sort(r.mismatches.begin(), r.mismatches.end(), [](const Mismatch& a, const Mismatch& b) { return a.m < b.m; });
  r.elapsed_seconds = clock.seconds();
  return r;
}

}  // namespace tqf
