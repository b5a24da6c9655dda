// tqf: enumerate classes, query representations, certify and verify.
//
// Exit status: 0 success, 1 negative answer or failed verification,
// 2 invalid input.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tqf/serialize.hpp"

using namespace tqf;

namespace {

struct Options {
  i64 det = 0;
  bool all = false;
  std::string form;
  std::string entry;
  i64 m = 0;
  i64 n = 0;
  i64 upto = -1;
  unsigned jobs = 1;
  bool as_json = false;
};

// JSON: an array when `as_list`, else the single report object.
int emit_reports(const std::vector<Report>& reports, bool as_json, bool as_list = true) {
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.ok();
  if (as_json) {
    json j = as_list ? json(reports) : json(reports.front());
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& r : reports) std::cout << format_report(r);
  }
  return ok ? 0 : 1;
}

std::vector<Report> verify_entry(const std::string& id, i64 n, unsigned jobs) {
  std::vector<Report> out{verify_characterization(id, n, jobs)};
  if (!rules_for(id).empty()) out.push_back(verify_theorem(id, std::min<i64>(n, 10'000), jobs));
  return out;
}

int cmd_enumerate(const Options& o) {
  auto classes = o.all ? enumerate_all_classes(o.det) : enumerate_classes(o.det);
  if (o.as_json) {
    json list = json::array();
    for (const auto& f : classes) list.push_back(format_form(f));
    std::cout << json{{"D", o.det}, {"classes", list}}.dump(2) << "\n";
  } else {
    for (const auto& f : classes) std::cout << format_form(f) << "\n";
  }
  return 0;
}

int cmd_represent(const Options& o) {
  TernaryForm f = parse_form(o.form);
  if (o.upto >= 0) {
    std::cout << membership_to_rle(represented_set(f, o.upto, o.jobs));
    return 0;
  }
  auto v = find_representation(f, o.m);
  if (o.as_json) {
    json j{{"form", format_form(f)}, {"m", o.m}, {"represented", v.has_value()}};
    j["vector"] = v ? json::array({(*v)[0], (*v)[1], (*v)[2]}) : json(nullptr);
    std::cout << j.dump(2) << "\n";
  } else if (v) {
    std::cout << "represented: (" << (*v)[0] << "," << (*v)[1] << "," << (*v)[2] << ")\n";
  } else {
    std::cout << "not represented\n";
  }
  return v ? 0 : 1;
}

int cmd_excluded(const Options& o) {
  const TheoremEntry& e = find_entry(o.entry);
  bool ex = is_excluded(e.spec, o.m);
  if (o.as_json)
    std::cout << json{{"entry_id", e.id}, {"m", o.m}, {"excluded", ex}}.dump(2) << "\n";
  else
    std::cout << (ex ? "excluded" : "admissible") << "\n";
  return ex ? 1 : 0;
}

int cmd_certify(const Options& o) {
  Certificate c;
  try {
    c = certify(o.entry, o.m);
  } catch (const excluded_input& ex) {
    if (o.as_json)
      std::cout << json{{"entry_id", o.entry}, {"m", o.m}, {"excluded", true}}.dump(2) << "\n";
    else
      std::cout << "excluded: " << ex.what() << "\n";
    return 1;
  }
  if (o.as_json)
    std::cout << json(c).dump(2) << "\n";
  else
    std::cout << format_certificate(c);
  return validate_certificate(c).empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ternary quadratic forms: representation, certification, verification"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", o.as_json, "JSON output");
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* en = app.add_subcommand("enumerate", "list the classes of a determinant");
  en->add_option("--det", o.det, "determinant")->required();
  en->add_flag("--all", o.all, "include classes with all diagonal coefficients even");
  common(en);

  auto* rep = app.add_subcommand("represent", "find a representation of m");
  rep->add_option("--form", o.form, "c1,c2,c3,c23,c13,c12")->required();
  auto* rep_m = rep->add_option("--m", o.m, "integer to represent");
  auto* rep_upto = rep->add_option("--upto", o.upto, "print the run-length membership table on [0, N] instead");
  rep_m->excludes(rep_upto);
  common(rep);

  auto* exc = app.add_subcommand("excluded", "test m against an entry's excluded set");
  exc->add_option("--entry", o.entry)->required();
  exc->add_option("--m", o.m)->required();
  common(exc);

  auto* cer = app.add_subcommand("certify", "certify a representation of m by an entry's form");
  cer->add_option("--entry", o.entry)->required();
  cer->add_option("--m", o.m)->required();
  common(cer);

  auto* ver = app.add_subcommand("verify", "characterization and certification sweeps for one entry");
  ver->add_option("--entry", o.entry)->required();
  ver->add_option("--n", o.n)->required();
  common(ver);

  auto* all = app.add_subcommand("verify-all", "sweeps for every characterized entry");
  all->add_option("--n", o.n)->required();
  common(all);

  auto* t1 = app.add_subcommand("verify-table1", "check the x^2+2y^2+5z^2 subcase table");
  common(t1);

  auto* lem = app.add_subcommand("verify-lemmas", "descent and separation properties");
  lem->add_option("--n", o.n)->required();
  common(lem);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*en) return cmd_enumerate(o);
    if (*rep) {
      if (!*rep_m && !*rep_upto) throw invalid_input("represent needs --m or --upto");
      return cmd_represent(o);
    }
    if (*exc) return cmd_excluded(o);
    if (*cer) return cmd_certify(o);
    if (*ver) return emit_reports(verify_entry(o.entry, o.n, o.jobs), o.as_json);
    if (*all) {
      std::vector<Report> reports;
      for (const auto& e : registry()) {
        if (e.kind == EntryKind::lemma_only) continue;
        for (auto& r : verify_entry(e.id, o.n, o.jobs)) reports.push_back(std::move(r));
      }
      return emit_reports(reports, o.as_json);
    }
    if (*t1) return emit_reports({verify_table1()}, o.as_json, false);
    if (*lem) return emit_reports({verify_lemmas(o.n, o.jobs)}, o.as_json, false);
  } catch (const invalid_input& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
