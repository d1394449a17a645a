// Command-line front end: axiom checks, coproduct tables, Hall numbers, coassociativity.
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dsp/coalgebra.hpp"
#include "json.hpp"

using namespace dsp;
using json = nlohmann::ordered_json;

namespace {

constexpr int kPass = 0, kFail = 1, kInputError = 2;

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SpaceOptions {
  std::string space;
  int level = 3;
  std::optional<int> grade;
  std::string grade_flag;
  int q = 2;
  bool q_given = false;
};

const char* grade_alias(const std::string& family) {
  if (family == "forests") return "--nodes";
  if (family == "graphs") return "--vertices";
  if (family == "binomial" || family == "injections") return "--max";
  if (family == "vect") return "--dim";
  return nullptr;
}

struct BuiltSpace {
  SPtr X;
  std::string family;
};

BuiltSpace build_space(const SpaceOptions& o) {
  if (o.level < 1) throw InputError("--level must be at least 1");
  std::string family = o.space, file;
  if (o.space.rfind("poset:", 0) == 0) {
    family = "poset";
    file = o.space.substr(6);
    if (file.empty()) throw InputError("poset: needs a file path");
  }
  if (!o.grade_flag.empty() && o.grade_flag != "--grade") {
    const char* alias = grade_alias(family);
    if (!alias || o.grade_flag != alias)
      throw InputError(o.grade_flag + " does not apply to " + family + (alias ? std::string(" (use ") + alias + ")" : ""));
  }
  if (o.q_given && family != "vect") throw InputError("--q only applies to vect");
  if (o.grade && *o.grade < 0) throw InputError("grade bound must be non-negative");
  const int N = o.level;
  if (family == "binomial") return {binomial_B(o.grade.value_or(4), N).space, family};
  if (family == "injections") {
    int m = o.grade.value_or(3);
    return {fat_nerve(injections_category(m), N, m), family};
  }
  if (family == "forests") return {forests_H(o.grade.value_or(4), N).space, family};
  if (family == "graphs") return {graphs_G(o.grade.value_or(3), N).space, family};
  if (family == "vect") return {vect_S(o.q, o.grade.value_or(2), N), family};
  if (family == "poset") {
    if (o.grade) throw InputError("posets take no grade bound");
    return {nerve_of_poset(parse_poset_file(file), N), family};
  }
  throw InputError("unknown space '" + o.space + "' (binomial, injections, forests, graphs, vect, poset:FILE)");
}

void add_space_options(CLI::App* cmd, SpaceOptions& o) {
  cmd->add_option("space", o.space, "binomial | injections | forests | graphs | vect | poset:FILE")->required();
  cmd->add_option("--level", o.level, "truncation level N")->capture_default_str();
  for (const char* flag : {"--grade", "--nodes", "--vertices", "--max", "--dim"})
    cmd->add_option_function<int>(
           flag,
           [&o, flag](int v) {
             o.grade = v;
             o.grade_flag = flag;
           },
           "grade bound")
        ->group(std::string(flag) == "--grade" ? "Options" : "Grade aliases");
  cmd->add_option_function<int>(
      "--q",
      [&o](int v) {
        o.q = v;
        o.q_given = true;
      },
      "field size for vect (2 or 3)");
}

int print_reports(const std::vector<CheckReport>& reports, const std::string& format) {
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.pass();
  if (format == "json") {
    if (reports.size() == 1) {
      std::cout << reports[0].to_json().dump(2) << "\n";
    } else {
      json arr = json::array();
      for (const auto& r : reports) arr.push_back(r.to_json());
      std::cout << arr.dump(2) << "\n";
    }
  } else {
    for (const auto& r : reports) std::cout << r.to_text();
  }
  return ok ? kPass : kFail;
}

int cmd_check(const SpaceOptions& o, const std::string& which, const std::string& format) {
  auto [X, family] = build_space(o);
  std::vector<CheckReport> reports;
  const bool all = which == "all";
  if (all || which == "segal") reports.push_back(check_segal(*X));
  if (all || which == "decomposition") reports.push_back(check_decomposition(*X));
  if (all || which == "splitting") reports.push_back(check_decomposition_splitting(*X));
  if (all || which == "decalage") reports.push_back(check_dec_characterization(X).report);
  if (all || which == "bonus") reports.push_back(check_bonus_pullbacks(*X));
  return print_reports(reports, format);
}

std::string resolve_element(const SimplicialGroupoid& X, const std::string& family, const std::string& text) {
  std::string key = text;
  if (family == "graphs")
    if (auto a = graph_alias(text)) key = *a;
  for (const auto& b : basis(X))
    if (b.key.text == key) return key;
  throw UnknownKey("no basis element '" + text + "' in " + X.name + " at this grade bound");
}

int cmd_coproduct(const SpaceOptions& o, const std::optional<std::string>& element, const std::string& format) {
  auto [X, family] = build_space(o);
  if (X->N < 2) throw InputError("the coproduct needs --level >= 2");
  auto D = comultiplication(*X);
  SparseMat out;
  if (element) {
    auto key = resolve_element(*X, family, *element);
    for (const auto& [col, v] : D.columns)
      if (col[0].text == key) out.columns.emplace(col, v);
  } else {
    out = D;
  }
  if (format == "csv") {
    std::cout << coproduct_csv(out);
  } else if (format == "json") {
    json cols = json::array();
    for (const auto& [col, v] : out.columns) {
      json terms = json::array();
      for (const auto& [row, c] : v.entries())
        terms.push_back({{"a", row[0].text}, {"b", row[1].text}, {"coefficient", to_string(c)}});
      cols.push_back({{"f", col[0].text}, {"grade", col[0].grade}, {"terms", terms}});
    }
    json j = {{"space", X->name}, {"level", X->N}, {"grade_bound", X->grade_bound}, {"columns", cols}};
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& [col, v] : out.columns) {
      std::cout << "Delta(" << col[0].text << ") =";
      bool first = true;
      for (const auto& [row, c] : v.entries()) {
        std::cout << (first ? " " : " + ") << to_string(c) << " " << row[0].text << " (x) " << row[1].text;
        first = false;
      }
      std::cout << "\n";
    }
  }
  return kPass;
}

int cmd_hall(int q, int n, int k, const std::string& format) {
  if (n < 0 || k < 0 || k > n) throw InputError("need 0 <= k <= n");
  auto h = hall_number(q, n, k);
  if (format == "json") {
    json j = {{"q", q}, {"n", n}, {"k", k}, {"enumerated", to_string(h.enumerated)},
              {"formula", to_string(h.formula)}, {"match", h.match()}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "enumerated " << to_string(h.enumerated) << " formula " << to_string(h.formula) << " "
              << (h.match() ? "MATCH" : "MISMATCH") << "\n";
  }
  return h.match() ? kPass : kFail;
}

int cmd_coassoc(const SpaceOptions& o, bool corrupt, const std::string& format) {
  auto [X, family] = build_space(o);
  if (corrupt) {
    if (X->N < 3) throw InputError("--corrupt needs --level >= 3");
    X = constant_face(X, 3, 1);
  }
  return print_reports({check_coassociativity(*X)}, format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decomposition spaces: axiom checks and incidence coalgebras"};
  app.require_subcommand(1);

  SpaceOptions opts;
  std::string format = "text", which = "all";
  std::optional<std::string> element;
  bool corrupt = false;
  int hq = 2, hn = 0, hk = 0;

  auto* check = app.add_subcommand("check", "run axiom checks (exit 1 if any fails)");
  add_space_options(check, opts);
  check->add_option("which", which, "segal | decomposition | splitting | decalage | bonus | all")
      ->check(CLI::IsMember({"segal", "decomposition", "splitting", "decalage", "bonus", "all"}))
      ->capture_default_str();
  check->add_option("--format", format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  auto* coproduct = app.add_subcommand("coproduct", "comultiplication table with exact coefficients");
  add_space_options(coproduct, opts);
  coproduct->add_option("--element", element, "iso-class key of one basis element (graphs accept K<n>, E<n>)");
  coproduct->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "text"}));

  auto* hall = app.add_subcommand("hall", "Hall number of F_q^n at (k, n-k) against the Gaussian binomial");
  hall->add_option("--q", hq, "field size (2 or 3)")->required();
  hall->add_option("--n", hn)->required();
  hall->add_option("--k", hk)->required();
  hall->add_option("--format", format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  auto* coassoc = app.add_subcommand("coassoc", "coassociativity and counit laws");
  add_space_options(coassoc, opts);
  coassoc->add_flag("--corrupt", corrupt, "replace d_1 on X_3 by a constant functor first");
  coassoc->add_option("--format", format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*check) return cmd_check(opts, which, format);
    if (*coproduct) return cmd_coproduct(opts, element, coproduct->count("--format") ? format : "csv");
    if (*hall) return cmd_hall(hq, hn, hk, format);
    if (*coassoc) return cmd_coassoc(opts, corrupt, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
