#include "onan/arith.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace onan {

namespace {

mpz_class mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class pow_ui(long p, int e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, e);
  return r;
}

bool divides(const mpz_class& m, const mpz_class& a) { return mpz_divisible_p(a.get_mpz_t(), m.get_mpz_t()) != 0; }

bool squarefree(long n) {
  if (n < 0) n = -n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

mpz_class as_integer(const mpq_class& v, const std::string& what) {
  if (v.get_den() != 1) throw std::logic_error(what + " is not an integer: " + v.get_str());
  return v.get_num();
}

mpz_class minus24h(long D) { return as_integer(-24 * hurwitz_class_number(1, D), "-24 H(" + std::to_string(D) + ")"); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

int canonical_table(int which) {
  if (which == 7) return 9;
  if (which == 8) return 10;
  if (which < 3 || which > 10) throw std::invalid_argument("tables are numbered 3..10");
  return which;
}

}  // namespace

mpz_class CongruenceSpec::modulus() const { return pow_ui(prime, exponent); }

std::string CongruenceSpec::str() const {
  std::ostringstream os;
  bool first = true;
  for (auto& [g, c] : terms) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    long a = c < 0 ? -c : c;
    if (a != 1) os << a;
    os << "F" << g;
    first = false;
  }
  os << " = 0 mod " << prime;
  if (exponent > 1) os << "^" << exponent;
  return os.str();
}

const std::vector<CongruenceSpec>& published_congruences() {
  static const std::vector<CongruenceSpec> list = {
      {{{"1A", 1}, {"31AB", -1}}, 31, 1},
      {{{"1A", 1}, {"19ABC", -1}}, 19, 1},
      {{{"1A", 1}, {"11A", -1}}, 11, 1},
      {{{"1A", 1}, {"7AB", -1}}, 7, 3},
      {{{"2A", 1}, {"14A", -1}}, 7, 1},
      {{{"4AB", 1}, {"28AB", -1}}, 7, 1},
      {{{"1A", 1}, {"5A", -1}}, 5, 3},
      {{{"2A", 1}, {"10A", -1}}, 5, 1},
      {{{"3A", 1}, {"15AB", -1}}, 5, 1},
      {{{"4AB", 1}, {"20AB", -1}}, 5, 1},
      {{{"1A", 1}, {"3A", -1}}, 3, 5},
      {{{"2A", 1}, {"6A", -1}}, 3, 2},
      {{{"4AB", 1}, {"12A", -1}}, 3, 2},
      {{{"5A", 1}, {"15AB", -1}}, 3, 2},
      {{{"1A", 1}, {"2A", 303}, {"4AB", 3024}, {"8AB", 4864}, {"16ABCD", 57344}}, 2, 16},
      {{{"2A", 1}, {"4AB", 7}, {"8AB", 8}, {"16ABCD", 112}}, 2, 7},
      {{{"3A", 1}, {"6A", 1}, {"12A", 6}}, 2, 3},
      {{{"4AB", 1}, {"8AB", 1}, {"16ABCD", 14}}, 2, 4},
      {{{"5A", 1}, {"10A", 1}, {"20AB", 6}}, 2, 3},
      {{{"6A", 1}, {"12A", 1}}, 2, 1},
      {{{"7AB", 1}, {"14A", 1}}, 2, 3},
      {{{"8AB", 1}, {"16ABCD", 7}}, 2, 3},
      {{{"10A", 1}, {"20AB", 1}}, 2, 1},
      {{{"14A", 1}, {"28AB", 1}}, 2, 1},
  };
  return list;
}

bool CongruenceReport::pass() const {
  return std::all_of(results.begin(), results.end(), [](const CongruenceResult& r) { return r.pass(); });
}

CongruenceResult check_congruence(const CongruenceSpec& spec, long bound, SeriesStore& store) {
  CongruenceResult r;
  r.spec = spec;
  r.checked_to = bound;
  mpz_class m = spec.modulus();
  std::vector<std::pair<std::shared_ptr<const McKayThompsonSeries>, long>> parts;
  for (auto& [g, c] : spec.terms) parts.emplace_back(store.series(g, bound), c);
  auto combo = [&](long D) {
    mpz_class v = 0;
    for (auto& [s, c] : parts) v += c * s->coefficient(D);
    return v;
  };
  r.principal_ok = divides(m, combo(-4)) && divides(m, combo(0));
  if (!r.principal_ok) r.failing_value = divides(m, combo(-4)) ? combo(0) : combo(-4);
  for (long D = 1; D <= bound; ++D) {
    mpz_class v = combo(D);
    if (!divides(m, v)) {
      r.first_failure = D;
      r.failing_value = v;
      break;
    }
  }
  return r;
}

CongruenceReport verify_congruences(long bound, SeriesStore& store) {
  CongruenceReport rep;
  rep.bound = bound;
  mckay_thompson_all(bound, store);
  for (auto& c : published_congruences()) rep.results.push_back(check_congruence(c, bound, store));
  return rep;
}

bool is_fundamental(long D) {
  if (D <= 0) return false;
  long d = -D;
  long r = ((d % 4) + 4) % 4;
  if (r == 1) return squarefree(d);
  if (r != 0) return false;
  long m = d / 4;
  long mr = ((m % 4) + 4) % 4;
  return (mr == 2 || mr == 3) && squarefree(m);
}

std::vector<long> fundamental_discriminants(long dmax) {
  std::vector<long> out;
  for (long D = 3; D <= dmax; ++D)
    if (is_fundamental(D)) out.push_back(D);
  return out;
}

int kronecker(long a, long n) { return mpz_kronecker(mpz_class(a).get_mpz_t(), mpz_class(n).get_mpz_t()); }

ClassCongruenceReport class_congruence_scan(int p, long dmax, SeriesStore& store) {
  if (p != 2 && p != 3 && p != 5 && p != 7 && p != 13) throw std::invalid_argument("p must be one of 2, 3, 5, 7, 13");
  ClassCongruenceReport rep;
  rep.p = p;
  rep.dmax = dmax;
  auto f1 = store.series("1A", dmax);
  std::shared_ptr<const McKayThompsonSeries> fp;
  if (p != 13) fp = store.series(recipe_for(std::to_string(p) + "A").group, dmax);
  mpz_class m = p == 2 ? 16 : p == 3 ? 9 : p;
  for (long D : fundamental_discriminants(dmax)) {
    if (p == 2 ? (D % 2 != 0 || D <= 8) : kronecker(-D, p) != -1) continue;
    ClassCongruenceRow row;
    row.D = D;
    row.modulus = m;
    row.dim = f1->coefficient(D);
    row.minus24h = minus24h(D);
    if (fp) row.trace = fp->coefficient(D);
    bool ok = mod(row.dim - row.minus24h, m) == 0;
    if (row.trace) ok = ok && mod(*row.trace - row.minus24h, m) == 0;
    if (p == 2) {
      ok = ok && mod(row.minus24h, m) == 0;
      mpq_class h = hurwitz_class_number(1, D);
      ok = ok && h.get_den() == 1 && mpz_even_p(h.get_num_mpz_t());
    }
    row.pass = ok;
    if (!ok) rep.failures.push_back(D);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

TwistIndicatorRow twist_indicator(int N, long D, SeriesStore& store) {
  TwistIndicatorRow row;
  row.D = D;
  row.level = N;
  if (!is_fundamental(D)) throw PreconditionError("-" + std::to_string(D) + " is not a fundamental discriminant");
  auto need = [&](int q, int want) {
    int k = kronecker(-D, q);
    if (k != want)
      throw PreconditionError("(-" + std::to_string(D) + "/" + std::to_string(q) + ") = " + std::to_string(k) +
                              ", need " + std::to_string(want));
  };
  mpq_class h = hurwitz_class_number(1, D);
  row.dim = mckay_thompson_coefficient("1A", D, store);
  if (N == 11 || N == 19) {
    row.p = N;
    need(N, -1);
    row.trace_p_prime = row.dim;
    row.trace_level = mckay_thompson_coefficient(recipe_for(std::to_string(N) + "A").group, D, store);
    row.class_term = -24 * h;
    row.heegner_consistent = heegner_orbits(N, D).empty() && trace4_plus(N, D, store.context()) == 0 &&
                             hurwitz_class_number(N, D) == 0;
  } else if (N == 14 || N == 15) {
    row.p = N == 14 ? 7 : 5;
    row.p_prime = N / row.p;
    need(row.p, -1);
    need(row.p_prime, 1);
    long delta = (row.p - 1) / 2;
    row.trace_p_prime = mckay_thompson_coefficient(std::to_string(row.p_prime) + "A", D, store);
    row.trace_level = mckay_thompson_coefficient(recipe_for(std::to_string(N)).group, D, store);
    row.class_term = delta * (h - delta * hurwitz_class_number(row.p_prime, D));
    row.heegner_consistent = heegner_orbits(N, D).empty() && trace4_plus(N, D, store.context()) == 0 &&
                             hurwitz_class_number(N, D) == 0 &&
                             hurwitz_class_number(row.p, D) == 0;
  } else {
    throw PreconditionError("twist indicator levels are 11, 14, 15, 19");
  }
  mpz_class c = as_integer(row.class_term, "class number term");
  row.diff_mod_p = mod(row.trace_p_prime - c, row.p);
  row.congruent = row.diff_mod_p == 0 && mod(row.trace_level - row.trace_p_prime, row.p) == 0;
  return row;
}

std::vector<ReferenceRow> load_reference_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("reference table file not found: " + path);
  std::vector<ReferenceRow> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string first;
    is >> first;
    if (first == "schema") continue;
    ReferenceRow r;
    r.table = std::stoi(first);
    is >> r.D;
    std::string v;
    while (is >> v) r.values.push_back(v);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReferenceRow> load_default_reference_rows() {
  return load_reference_rows(data_directory() + "/reference_tables.txt");
}

ExampleTable compute_table(int which, SeriesStore& store, const std::vector<ReferenceRow>& rows) {
  int t = canonical_table(which);
  ExampleTable out;
  out.which = t;
  std::vector<long> ds;
  for (auto& r : rows)
    if (r.table == t) ds.push_back(r.D);
  if (t <= 6) {
    static const int primes[] = {2, 3, 5, 7};
    int p = primes[t - 3];
    mpz_class m = p == 2 ? 16 : p == 3 ? 9 : p;
    out.caption = "p=" + std::to_string(p);
    out.headers = {"D", "dim W_D", "tr(g" + std::to_string(p) + "|W_D)", "-24H(D)", "mod " + m.get_str()};
    for (long D : ds) {
      mpz_class dim = mckay_thompson_coefficient("1A", D, store);
      mpz_class tr = mckay_thompson_coefficient(recipe_for(std::to_string(p) + "A").group, D, store);
      mpz_class h = minus24h(D);
      out.rows.push_back({std::to_string(D), dim.get_str(), tr.get_str(), h.get_str(), mod(dim, m).get_str()});
    }
  } else {
    int N = t == 9 ? 14 : 15;
    int p = t == 9 ? 7 : 5;
    out.caption = "Examples for the curve E" + std::to_string(N);
    std::string pp = std::to_string(N / p);
    out.headers = {"D", "tr" + pp + "(D)", "H" + std::to_string(N) + "(D)", "Diff" + std::to_string(N) + "(D) mod " + std::to_string(p),
                   "rank", "Sha"};
    for (long D : ds) {
      auto row = twist_indicator(N, D, store);
      std::string rank, sha;
      if (row.curve) {
        rank = std::to_string(row.curve->rank);
        sha = row.curve->sha.get_str();
      }
      out.rows.push_back({std::to_string(D), row.trace_p_prime.get_str(), row.class_term.get_str(),
                          row.diff_mod_p.get_str(), rank, sha});
    }
  }
  return out;
}

namespace {

std::string md_cell(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

}  // namespace

std::string format_table(const ExampleTable& t, TableFormat format) {
  std::ostringstream os;
  switch (format) {
    case TableFormat::Csv:
      for (std::size_t i = 0; i < t.headers.size(); ++i) os << (i ? "," : "") << csv_field(t.headers[i]);
      os << "\r\n";
      for (auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
        os << "\r\n";
      }
      break;
    case TableFormat::Json:
      for (auto& r : t.rows) {
        nlohmann::ordered_json j;
        if (t.which > 0) j["table"] = t.which;
        for (std::size_t i = 0; i < r.size(); ++i) j[t.headers[i]] = r[i];
        os << j.dump() << "\n";
      }
      break;
    case TableFormat::Markdown:
      if (t.which > 0) os << "Table " << t.which << ": ";
      os << t.caption << "\n\n|";
      for (auto& h : t.headers) os << " " << md_cell(h) << " |";
      os << "\n|";
      for (std::size_t i = 0; i < t.headers.size(); ++i) os << (i == 0 ? "---:|" : "---|");
      os << "\n";
      for (auto& r : t.rows) {
        os << "|";
        for (auto& c : r) os << " " << md_cell(c) << " |";
        os << "\n";
      }
      break;
  }
  return os.str();
}

bool matches_printed(const std::string& printed, const std::string& computed) {
  auto dots = printed.find("...");
  if (dots == std::string::npos) return printed == computed;
  std::string head = printed.substr(0, dots), tail = printed.substr(dots + 3);
  return computed.size() > head.size() + tail.size() && computed.compare(0, head.size(), head) == 0 &&
         computed.compare(computed.size() - tail.size(), tail.size(), tail) == 0;
}

TableCheck check_table(int which, SeriesStore& store, const std::vector<ReferenceRow>& rows) {
  TableCheck chk;
  chk.which = canonical_table(which);
  ExampleTable t = compute_table(which, store, rows);
  std::size_t k = 0;
  for (auto& ref : rows) {
    if (ref.table != chk.which) continue;
    const auto& got = t.rows[k++];
    auto compare = [&](const std::string& printed, const std::string& computed, const std::string& col) {
      if (printed.find("...") != std::string::npos) ++chk.elided;
      else ++chk.exact;
      if (!matches_printed(printed, computed))
        chk.mismatches.push_back("table " + std::to_string(chk.which) + " D=" + std::to_string(ref.D) + " " + col +
                                 ": printed " + printed + ", computed " + computed);
    };
    if (chk.which <= 6) {
      // dim, trace, -24H, then the common residue
      for (int i = 0; i < 3; ++i) compare(ref.values[i], got[i + 1], t.headers[i + 1]);
      mpz_class m(ref.values[4]);
      for (int i = 1; i <= 3; ++i) compare(ref.values[3], mod(mpz_class(got[i]), m).get_str(), t.headers[i] + " residue");
    } else {
      for (int i = 0; i < 3; ++i) compare(ref.values[i], got[i + 1], t.headers[i + 1]);
      if (!got[4].empty()) compare(ref.values[3], got[4], "rank");
      if (!got[5].empty()) compare(ref.values[4], got[5], "Sha");
    }
  }
  return chk;
}

}  // namespace onan
