#include "onan/cli.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "onan/rademacher.hpp"

namespace onan {

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool plus_space(long D) { return D % 4 == 0 || D % 4 == 3; }

std::string str(const mpq_class& q) { return q.get_str(); }

struct Session {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
  CuspStore cusp;
  std::unique_ptr<SeriesStore> store;

  Session(RunConfig c, std::ostream& o, std::ostream& e) : cfg(std::move(c)), out(o), err(e) {
    cusp = CuspStore::load_default();
    TraceContext ctx = TraceContext::from_environment(&cusp);
    if (!cfg.cache_dir.empty()) ctx.cache_dir = cfg.cache_dir;
    if (cfg.precision_bits > 0) {
      ctx.policy.initial_bits = cfg.precision_bits;
      ctx.policy.max_bits = std::max(ctx.policy.max_bits, 4 * cfg.precision_bits);
    }
    store = std::make_unique<SeriesStore>(&cusp, ctx);
  }

  void emit(const ExampleTable& t) { out << format_table(t, cfg.format); }
};

std::string group_label(const std::string& order) {
  try {
    return recipe_for(order).group;
  } catch (const std::exception&) {
    throw UsageError("unknown order group '" + order + "'");
  }
}

int cmd_coeff(Session& s) {
  std::string g = group_label(s.cfg.order);
  auto f = s.store->series(g, s.cfg.dmax);
  ExampleTable t;
  t.caption = "F" + g;
  t.headers = {"D", "a(D)"};
  t.rows.push_back({"-4", f->coefficient(-4).get_str()});
  t.rows.push_back({"0", f->coefficient(0).get_str()});
  for (long D = 1; D <= s.cfg.dmax; ++D) {
    mpz_class a = f->coefficient(D);
    if (plus_space(D) || a != 0) t.rows.push_back({std::to_string(D), a.get_str()});
  }
  s.emit(t);
  return kPass;
}

int cmd_dims(Session& s) {
  auto f = s.store->series("1A", s.cfg.dmax);
  ExampleTable t;
  t.caption = "dim W_D";
  t.headers = {"D", "dim"};
  for (long D = 1; D <= s.cfg.dmax; ++D)
    if (plus_space(D)) t.rows.push_back({std::to_string(D), f->coefficient(D).get_str()});
  s.emit(t);
  return kPass;
}

int cmd_classnum(Session& s) {
  auto h = s.store->class_numbers(s.cfg.level, s.cfg.dmax);
  ExampleTable t;
  t.caption = "H^(" + std::to_string(s.cfg.level) + ")(D)";
  t.headers = {"D", "H"};
  t.rows.push_back({"0", str(h->constant)});
  for (long D = 1; D <= s.cfg.dmax; ++D)
    if (plus_space(D)) t.rows.push_back({std::to_string(D), str(h->coefficient(D))});
  s.emit(t);
  return kPass;
}

int cmd_traces(Session& s) {
  if (!has_trace(s.cfg.level, s.cfg.plus))
    throw UsageError("no trace function at level " + std::to_string(s.cfg.level) + (s.cfg.plus ? "+" : ""));
  auto tr = s.store->traces(s.cfg.level, s.cfg.plus, s.cfg.dmax);
  ExampleTable t;
  t.caption = "T^(" + std::to_string(s.cfg.level) + (s.cfg.plus ? ",+)" : ")");
  t.headers = {"D", "T(D)"};
  for (long D = 1; D <= s.cfg.dmax; ++D)
    if (plus_space(D)) t.rows.push_back({std::to_string(D), str(tr->coefficient(D))});
  s.emit(t);
  if (!tr->nonintegral.empty()) {
    s.err << "note: " << tr->nonintegral.size() << " coefficients outside alpha_N Z (first D = " << tr->nonintegral.front()
          << ")\n";
  }
  return kPass;
}

ExampleTable multiplicity_table(const std::vector<ModuleDecomposition>& ds, std::size_t width) {
  ExampleTable t;
  t.caption = "Multiplicities of the irreducible characters in W_m";
  t.headers = {"m"};
  for (std::size_t j = 1; j <= width; ++j) t.headers.push_back("chi" + std::to_string(j));
  for (auto& d : ds) {
    std::vector<std::string> row{std::to_string(d.grade)};
    for (auto& v : d.multiplicity) row.push_back(v.get_str());
    t.rows.push_back(std::move(row));
  }
  return t;
}

int cmd_mult(Session& s) {
  auto table = CharacterTable::load_default();
  auto ds = decompose_grades(s.cfg.mmax, *s.store, table);
  s.emit(multiplicity_table(ds, table.size()));
  auto ref = load_default_multiplicities();
  long compared = 0;
  std::vector<std::string> bad;
  for (auto& d : ds) {
    auto it = std::find_if(ref.begin(), ref.end(), [&](const ModuleDecomposition& r) { return r.grade == d.grade; });
    if (it == ref.end()) continue;
    ++compared;
    for (std::size_t j = 0; j < d.multiplicity.size(); ++j)
      if (d.multiplicity[j] != it->multiplicity[j])
        bad.push_back("m = " + std::to_string(d.grade) + " chi" + std::to_string(j + 1) + ": computed " +
                      d.multiplicity[j].get_str() + ", reference " + it->multiplicity[j].get_str());
  }
  for (auto& b : bad) s.err << "MISMATCH " << b << "\n";
  s.err << "mult: " << compared << " grades compared with the reference multiplicities, " << bad.size()
        << " mismatches\n";
  return bad.empty() ? kPass : kFail;
}

int verify_congruences_cmd(Session& s) {
  auto rep = verify_congruences(s.cfg.bound, *s.store);
  ExampleTable t;
  t.caption = "Congruences checked for 0 < n <= " + std::to_string(s.cfg.bound);
  t.headers = {"congruence", "status", "first failure", "value"};
  for (auto& r : rep.results) {
    std::string where = r.first_failure ? std::to_string(*r.first_failure) : "";
    if (!r.principal_ok && where.empty()) where = "principal part";
    t.rows.push_back({r.spec.str(), r.pass() ? "PASS" : "FAIL", where, r.first_failure ? r.failing_value.get_str() : ""});
  }
  s.emit(t);
  long failed = std::count_if(rep.results.begin(), rep.results.end(), [](auto& r) { return !r.pass(); });
  s.err << "congruences: " << rep.results.size() - failed << "/" << rep.results.size() << " hold\n";
  return rep.pass() ? kPass : kFail;
}

int verify_tables_cmd(Session& s) {
  auto rows = load_default_reference_rows();
  bool ok = true;
  ExampleTable t;
  t.caption = "Example tables against the published rows";
  t.headers = {"table", "exact entries", "elided entries", "mismatches"};
  for (int w : {3, 4, 5, 6, 9, 10}) {
    auto c = check_table(w, *s.store, rows);
    t.rows.push_back({std::to_string(w), std::to_string(c.exact), std::to_string(c.elided),
                      std::to_string(c.mismatches.size())});
    for (auto& m : c.mismatches) s.err << "table " << w << ": " << m << "\n";
    ok = ok && c.pass();
  }
  s.emit(t);
  return ok ? kPass : kFail;
}

int verify_characterization_cmd(Session& s) {
  auto table = CharacterTable::load_default();
  auto mults = load_default_multiplicities();
  long dmax = 4;
  for (auto& m : mults) dmax = std::max(dmax, m.grade);
  auto all = mckay_thompson_all(dmax, *s.store);
  ExampleTable t;
  t.caption = "Character conditions per order group";
  t.headers = {"group", "checks", "failures"};
  bool ok = true;
  for (auto& [g, f] : all) {
    auto rep = verify_characterization(f, table, mults);
    long bad = 0;
    for (auto& l : rep.lines)
      if (!l.pass) {
        ++bad;
        s.err << g << ": " << l.name << " expected " << l.expected << ", got " << l.actual << "\n";
      }
    t.rows.push_back({g, std::to_string(rep.lines.size()), std::to_string(bad)});
    ok = ok && rep.pass();
  }
  s.emit(t);
  return ok ? kPass : kFail;
}

int verify_positivity_cmd(Session& s) {
  auto table = CharacterTable::load_default();
  auto ds = decompose_grades(s.cfg.mmax, *s.store, table);
  auto rep = positivity_scan(s.cfg.mmax, ds);
  ExampleTable t;
  t.caption = "Negative multiplicities for m <= " + std::to_string(s.cfg.mmax);
  t.headers = {"m", "chi", "multiplicity"};
  for (auto& [m, j] : rep.negatives) {
    auto& d = *std::find_if(ds.begin(), ds.end(), [m = m](auto& x) { return x.grade == m; });
    t.rows.push_back({std::to_string(m), "chi" + std::to_string(j), d.multiplicity[j - 1].get_str()});
  }
  s.emit(t);
  s.err << "positivity: " << ds.size() << " grades, " << rep.negatives.size() << " negative entries, "
        << (rep.pass ? "all within m in {7, 8, 12}" : "negative entries outside m in {7, 8, 12}") << "\n";
  return rep.pass ? kPass : kFail;
}

int cmd_tables(Session& s) {
  auto rows = load_default_reference_rows();
  auto t = compute_table(s.cfg.which, *s.store, rows);
  s.emit(t);
  return kPass;
}

int cmd_rademacher(Session& s) {
  if (s.cfg.level <= 0 || s.cfg.level % 4 != 0) throw UsageError("--level must be 4N with N >= 1");
  int N = s.cfg.level / 4;
  std::vector<long> mus{s.cfg.mu};
  bool combined = s.cfg.mu == -4 && N <= 4;
  if (combined) mus.push_back(0);
  long stride = s.cfg.trail_stride > 0 ? s.cfg.trail_stride : std::max(1L, s.cfg.cmax / (4L * N) / 64);
  std::map<std::pair<long, long>, RademacherResult> res;
  try {
    res = rademacher_batch(N, mus, {s.cfg.n}, s.cfg.cmax, true, stride);
  } catch (const RademacherError& e) {
    throw UsageError(e.what());
  }
  const RademacherResult& r = res.at({s.cfg.mu, s.cfg.n});
  ExampleTable t;
  t.caption = "R[" + std::to_string(s.cfg.mu) + "](" + std::to_string(s.cfg.n) + ") at level " +
              std::to_string(s.cfg.level) + ", partial sums";
  t.headers = {"c", "re", "im"};
  auto ld = [](long double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
  };
  for (auto& p : r.trail) t.rows.push_back({std::to_string(p.c), ld(p.partial.real()), ld(p.partial.imag())});
  s.emit(t);
  s.err << "terms " << r.terms << ", raw " << ld(r.raw.real()) << ", Cesaro mean " << ld(r.value.real())
        << " (imaginary " << ld(r.value.imag()) << "), window spread " << ld(r.window_spread) << "\n";

  int status = kPass;
  auto report = [&](const std::string& what, long double numeric, long double exact) {
    long double tol = 0.01L * std::max(fabsl(exact), 1.0L);
    bool ok = fabsl(numeric - exact) <= tol;
    s.err << what << ": numeric " << ld(numeric) << ", exact " << ld(exact) << ", |error| " << ld(fabsl(numeric - exact))
          << " (tolerance " << ld(tol) << ") " << (ok ? "PASS" : "FAIL") << "\n";
    if (!ok) status = kFail;
  };
  if (s.cfg.mu == 0) report("index 0 sum", r.value.real(), index0_exact(N, s.cfg.n).get_d());
  if (combined) {
    static const char* groups[] = {"", "1A", "2A", "3A", "4AB"};
    long double F = -r.value.real() + 2 * res.at({0, s.cfg.n}).value.real();
    auto f = s.store->series(groups[N], std::max(s.cfg.n, 4L));
    report(std::string("-R[-4] + 2R[0] against F") + groups[N], F, f->coefficient(s.cfg.n).get_d());
  }
  return status;
}

}  // namespace

TableFormat parse_table_format(const std::string& s) {
  if (s == "csv") return TableFormat::Csv;
  if (s == "json") return TableFormat::Json;
  if (s == "markdown" || s == "md") return TableFormat::Markdown;
  throw std::invalid_argument("unknown format '" + s + "'");
}

std::vector<ModuleDecomposition> decompose_grades(long mmax, SeriesStore& store, const CharacterTable& table) {
  std::vector<ModuleDecomposition> out;
  if (mmax < 3) return out;
  auto all = mckay_thompson_all(mmax, store);
  for (long m = 3; m <= mmax; ++m) {
    if (!plus_space(m)) continue;
    std::map<std::string, mpz_class> coeff;
    for (auto& [g, f] : all) coeff[g] = f.coefficient(m);
    out.push_back(decompose(table, m, coeff));
  }
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations for the weight 3/2 moonshine module of the O'Nan group"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "csv";
  bool online = false;
  app.add_option("--format", format, "Output format: csv, json or markdown")
      ->check(CLI::IsMember({"csv", "json", "markdown"}));
  app.add_flag("--offline", "Use cached and shipped data only (default)");
  app.add_flag("--online", online, "Allow network access for external records");
  app.add_option("--cache-dir", cfg.cache_dir, "Checkpoint and record cache (default ONAN_CACHE_DIR)");
  app.add_option("--precision-bits", cfg.precision_bits, "Initial MPFR precision (default ONAN_PRECISION_BITS)")
      ->check(CLI::Range(64L, 1L << 20));
  app.fallthrough();

  auto positive = CLI::PositiveNumber;

  auto* coeff = app.add_subcommand("coeff", "McKay-Thompson coefficients of one order group");
  coeff->add_option("--order", cfg.order, "Order group, e.g. 1A, 2A, 7AB, 16ABCD")->required();
  coeff->add_option("--dmax", cfg.dmax, "Largest D")->required()->check(CLI::NonNegativeNumber);

  auto* dims = app.add_subcommand("dims", "dim W_D");
  dims->add_option("--dmax", cfg.dmax, "Largest D")->required()->check(positive);

  auto* classnum = app.add_subcommand("classnum", "Generalized Hurwitz class numbers H^(N)(D)");
  classnum->add_option("--level", cfg.level, "N")->required()->check(positive);
  classnum->add_option("--dmax", cfg.dmax, "Largest D")->required()->check(positive);

  auto* traces = app.add_subcommand("traces", "Traces of singular moduli T^(N)(D)");
  traces->add_option("--level", cfg.level, "N")->required()->check(positive);
  traces->add_flag("--plus", cfg.plus, "Use the plus-level Hauptmodul");
  traces->add_option("--dmax", cfg.dmax, "Largest D")->required()->check(positive);

  auto* mult = app.add_subcommand("mult", "Multiplicities of the irreducibles in W_m");
  mult->add_option("--mmax", cfg.mmax, "Largest grade")->required()->check(positive);

  auto* verify = app.add_subcommand("verify", "Verification reports");
  verify->require_subcommand(1);
  auto* vcong = verify->add_subcommand("congruences", "Congruences among the F_[g]");
  cfg.bound = 250;
  vcong->add_option("--bound", cfg.bound, "Check 0 < n <= bound")->check(positive);
  auto* vtables = verify->add_subcommand("tables", "Example tables against the published rows");
  auto* vchar = verify->add_subcommand("characterization", "Character conditions on a(3), a(4) and a(m)");
  auto* vpos = verify->add_subcommand("positivity", "Negative multiplicities");
  cfg.mmax = 120;
  vpos->add_option("--mmax", cfg.mmax, "Largest grade")->check(positive);

  auto* tables = app.add_subcommand("tables", "Example tables");
  tables->add_option("--which", cfg.which, "Table number, 3 to 10")->required()->check(CLI::Range(3, 10));

  auto* rad = app.add_subcommand("rademacher", "Rademacher sum cross-check with convergence trail");
  rad->add_option("--level", cfg.level, "Level 4N")->required()->check(positive);
  rad->add_option("--mu", cfg.mu, "Index mu <= 0, mu = 0, 3 mod 4");
  rad->add_option("--n", cfg.n, "Coefficient index")->check(positive);
  rad->add_option("--cmax", cfg.cmax, "Largest modulus")->check(positive);
  rad->add_option("--trail-stride", cfg.trail_stride, "Record every k-th partial sum")->check(positive);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kPass;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  cfg.format = parse_table_format(format);
  cfg.offline = !online;
  auto* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if (sub == verify) cfg.subcommand = verify->get_subcommands().front()->get_name();

  try {
    Session s(cfg, out, err);
    if (sub == coeff) return cmd_coeff(s);
    if (sub == dims) return cmd_dims(s);
    if (sub == classnum) return cmd_classnum(s);
    if (sub == traces) return cmd_traces(s);
    if (sub == mult) return cmd_mult(s);
    if (sub == tables) return cmd_tables(s);
    if (sub == rad) return cmd_rademacher(s);
    auto* v = verify->get_subcommands().front();
    if (v == vcong) return verify_congruences_cmd(s);
    if (v == vtables) return verify_tables_cmd(s);
    if (v == vchar) return verify_characterization_cmd(s);
    if (v == vpos) return verify_positivity_cmd(s);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}

}  // namespace onan
