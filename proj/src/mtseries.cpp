#include "onan/mtseries.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <sstream>
#include <thread>

namespace onan {

namespace {

mpq_class q(long n, long d = 1) {
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

std::vector<TraceRecipe> build_recipes() {
  std::vector<TraceRecipe> r;
  auto add = [&](std::string group, int order, int tl, bool plus, std::vector<ClassTerm> h, std::string cusp = "",
                 mpq_class gamma = 0) {
    r.push_back({std::move(group), order, tl, plus, std::move(h), std::move(cusp), std::move(gamma)});
  };
  add("1A", 1, 1, false, {});
  add("2A", 2, 2, false, {{1, q(12)}, {2, q(-12)}});
  add("3A", 3, 3, false, {{1, q(12)}, {3, q(-12)}});
  add("4AB", 4, 4, false, {{2, q(12)}, {4, q(-12)}});
  add("5A", 5, 5, false, {{1, q(6)}, {5, q(-6)}});
  add("6A", 6, 6, false, {{1, q(-12)}, {2, q(8)}, {3, q(21, 2)}, {6, q(-13, 2)}});
  add("7AB", 7, 7, false, {{1, q(4)}, {7, q(-4)}});
  add("8AB", 8, 8, false, {{4, q(4)}, {8, q(-4)}});
  add("10A", 10, 10, false, {{1, q(-6)}, {2, q(4)}, {5, q(11, 2)}, {10, q(-7, 2)}});
  add("11A", 11, 11, true, {{1, q(12, 5)}, {11, q(-6, 5)}}, "g11", q(-4, 5));
  add("12A", 12, 12, false, {{2, q(-4)}, {4, q(4)}, {6, q(5, 2)}, {12, q(-5, 2)}});
  add("14A", 14, 14, true, {{1, q(-4)}, {2, q(8, 3)}, {7, q(15, 4)}, {14, q(-41, 24)}}, "g14", q(8, 3));
  add("15AB", 15, 15, true, {{1, q(-3)}, {3, q(9, 4)}, {5, q(5, 2)}, {15, q(-13, 8)}}, "g15", q(9, 4));
  add("16ABCD", 16, 16, false, {{8, q(2)}, {16, q(-2)}});
  add("19ABC", 19, 19, true, {{1, q(4, 3)}, {19, q(-2, 3)}}, "g19", q(4, 3));
  add("20AB", 20, 20, true, {{2, q(-2)}, {4, q(2)}, {10, q(3, 2)}, {20, q(-3, 2)}});
  add("28AB", 28, 28, true, {{2, q(-4, 3)}, {4, q(4, 3)}, {14, q(25, 24)}, {28, q(-25, 24)}}, "g28", q(8, 3));
  add("31AB", 31, 31, true, {{1, q(4, 5)}, {31, q(-2, 5)}}, "g31", q(3, 5));
  return r;
}

int leading_order(const std::string& label) {
  std::size_t i = 0;
  while (i < label.size() && std::isdigit(static_cast<unsigned char>(label[i]))) ++i;
  if (i == 0) throw std::invalid_argument("bad class label '" + label + "'");
  return std::stoi(label.substr(0, i));
}

mpq_class cusp_coefficient(const CuspFormData& f, long D) {
  if (D >= f.order)
    throw CuspDataError(CuspDataError::Kind::MissingForm,
                        f.name + " is stored to q^" + std::to_string(f.order - 1) + " but q^" + std::to_string(D) +
                            " is needed (regenerate data/cuspforms.txt with a larger order)");
  return f.coefficient(static_cast<int>(D));
}

std::string str(const mpq_class& v) { return v.get_str(); }

}  // namespace

const std::vector<TraceRecipe>& trace_recipes() {
  static const std::vector<TraceRecipe> recipes = build_recipes();
  return recipes;
}

const TraceRecipe& recipe_for(const std::string& label) {
  int o = leading_order(label);
  std::string letters = label.substr(std::to_string(o).size());
  for (auto& r : trace_recipes()) {
    if (r.order != o) continue;
    std::string have = r.group.substr(std::to_string(o).size());
    bool ok = std::all_of(letters.begin(), letters.end(), [&](char c) { return have.find(c) != std::string::npos; });
    if (ok) return r;
  }
  throw std::invalid_argument("no McKay-Thompson series for class '" + label + "'");
}

mpz_class McKayThompsonSeries::coefficient(long D) const {
  if (D == -4) return -1;
  if (D == 0) return 2;
  if (D > dmax) throw std::out_of_range("coefficient q^" + std::to_string(D) + " beyond computed range " +
                                        std::to_string(dmax));
  auto it = coeff.find(D);
  return it == coeff.end() ? mpz_class(0) : it->second;
}

const CuspFormData& load_cuspform(const std::string& name, const CuspStore& store) {
  const CuspFormData& f = store.get(name);
  auto fail = [&](const std::string& what) {
    throw CuspDataError(CuspDataError::Kind::Invariant,
                        "cusp form " + name + ": " + what + " (regenerate with tools/cuspform_oracle.py)");
  };
  if (f.leading <= 0 || f.leading >= f.order) fail("leading exponent out of range");
  for (int n = 0; n < f.leading; ++n)
    if (f.coefficient(n) != 0 || f.sqrt5_coefficient(n) != 0) fail("nonzero coefficient below the leading exponent");
  if (f.coefficient(f.leading) != 1 || f.sqrt5_coefficient(f.leading) != 0) fail("leading coefficient is not 1");
  if (f.plus) {
    for (auto& [n, v] : f.rational)
      if (n % 4 == 1 || n % 4 == 2) fail("plus space form has a coefficient at q^" + std::to_string(n));
    for (auto& [n, v] : f.sqrt5)
      if (n % 4 == 1 || n % 4 == 2) fail("plus space form has a coefficient at q^" + std::to_string(n));
  }
  if (name == "g31") {
    if (f.leading != 4) fail("expected to begin at q^4");
    if (f.coefficient(7) != q(11, 3)) fail("coefficient of q^7 is " + str(f.coefficient(7)) + ", expected 11/3");
  }
  if (name == "f31") {
    if (f.coefficient(2) != q(1, 2) || f.sqrt5_coefficient(2) != q(1, 2)) fail("expected q + phi q^2");
  }
  return f;
}

CuspFormData galois_trace(const CuspFormData& f, const mpq_class& r, const mpq_class& s, const std::string& name) {
  CuspFormData out;
  out.name = name;
  out.level = f.level;
  out.weight2 = f.weight2;
  out.plus = f.plus;
  out.order = f.order;
  out.provenance = "Galois trace of " + f.name;
  for (int n = 0; n < f.order; ++n) {
    mpq_class v = 2 * (r * f.coefficient(n) + 5 * s * f.sqrt5_coefficient(n));
    if (v != 0) {
      if (out.rational.empty()) out.leading = n;
      out.rational[n] = v;
    }
  }
  out.sha256 = sha256_hex(out.canonical_payload());
  return out;
}

SeriesStore::SeriesStore(const CuspStore* cusp, TraceContext ctx) : cusp_(cusp), ctx_(std::move(ctx)) {
  if (!ctx_.cusp) ctx_.cusp = cusp_;
}

std::shared_ptr<const TraceSeries> SeriesStore::traces(int N, bool plus, long dmax) {
  auto key = std::make_pair(N, plus);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = traces_.find(key);
    if (it != traces_.end() && it->second->dmax >= dmax) return it->second;
  }
  auto s = std::make_shared<const TraceSeries>(trace_series(N, plus, dmax, ctx_));
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = traces_[key];
  if (!slot || slot->dmax < dmax) slot = s;
  return slot;
}

std::shared_ptr<const ClassNumberSeries> SeriesStore::class_numbers(int N, long dmax) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = classes_.find(N);
    if (it != classes_.end() && it->second->dmax >= dmax) return it->second;
  }
  auto s = std::make_shared<const ClassNumberSeries>(class_series(N, dmax));
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = classes_[N];
  if (!slot || slot->dmax < dmax) slot = s;
  return slot;
}

std::shared_ptr<const McKayThompsonSeries> SeriesStore::series(const std::string& group, long dmax) {
  const std::string& key = recipe_for(group).group;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = series_.find(key);
    if (it != series_.end() && it->second->dmax >= dmax) return it->second;
  }
  auto s = std::make_shared<const McKayThompsonSeries>(mckay_thompson(key, dmax, *this));
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = series_[key];
  if (!slot || slot->dmax < dmax) slot = s;
  return slot;
}

McKayThompsonSeries mckay_thompson_with(const TraceRecipe& recipe, long dmax, SeriesStore& store,
                                        const CuspFormData* cusp) {
  if (!recipe.cusp.empty() && !cusp)
    throw CuspDataError(CuspDataError::Kind::MissingForm, "F" + recipe.group + " needs cusp form " + recipe.cusp);
  McKayThompsonSeries out;
  out.labels = recipe.group;
  out.order = recipe.order;
  out.level = 4 * recipe.order;
  out.dmax = dmax;
  auto tr = store.traces(recipe.trace_level, recipe.plus, dmax);
  std::vector<std::pair<mpq_class, std::shared_ptr<const ClassNumberSeries>>> hs;
  for (auto& t : recipe.class_terms) hs.emplace_back(t.coefficient, store.class_numbers(t.level, dmax));
  for (long D = 1; D <= dmax; ++D) {
    mpq_class v = tr->coefficient(D);
    for (auto& [c, h] : hs) v += c * h->coefficient(D);
    if (cusp) v += recipe.gamma * cusp_coefficient(*cusp, D);
    if (v.get_den() != 1) {
      std::ostringstream os;
      os << "F" << recipe.group << ": coefficient of q^" << D << " is " << v << ", fractional part "
         << mpq_class(v - mpz_class(v.get_num() / v.get_den()));
      throw AssemblyError(os.str(), D, v);
    }
    if (v != 0) out.coeff[D] = v.get_num();
  }
  return out;
}

McKayThompsonSeries mckay_thompson(const std::string& label, long dmax, SeriesStore& store) {
  const TraceRecipe& r = recipe_for(label);
  const CuspFormData* cusp = r.cusp.empty() ? nullptr : &load_cuspform(r.cusp, store.cusp());
  return mckay_thompson_with(r, dmax, store, cusp);
}

mpz_class mckay_thompson_coefficient(const std::string& label, long D, SeriesStore& store) {
  const TraceRecipe& r = recipe_for(label);
  if (D == -4) return -1;
  if (D == 0) return 2;
  if (D < 0 || D % 4 == 1 || D % 4 == 2) return 0;
  mpq_class v = r.plus ? trace4_plus(r.trace_level, D, store.context()) : trace4(r.trace_level, D, store.context());
  for (auto& t : r.class_terms) v += t.coefficient * hurwitz_class_number(t.level, D);
  if (!r.cusp.empty()) v += r.gamma * cusp_coefficient(load_cuspform(r.cusp, store.cusp()), D);
  if (v.get_den() != 1) {
    std::ostringstream os;
    os << "F" << r.group << ": coefficient of q^" << D << " is " << v << ", not an integer";
    throw AssemblyError(os.str(), D, v);
  }
  return v.get_num();
}

std::map<std::string, McKayThompsonSeries> mckay_thompson_all(long dmax, SeriesStore& store) {
  auto& recipes = trace_recipes();
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::map<std::string, McKayThompsonSeries> out;
  std::size_t next = 0;
  while (next < recipes.size()) {
    std::vector<std::future<std::shared_ptr<const McKayThompsonSeries>>> batch;
    for (std::size_t k = 0; k < workers && next < recipes.size(); ++k, ++next) {
      const std::string group = recipes[next].group;
      batch.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async,
                                 [&store, group, dmax] { return store.series(group, dmax); }));
    }
    for (auto& f : batch) {
      auto s = f.get();
      McKayThompsonSeries copy = *s;
      if (copy.dmax > dmax) {
        copy.coeff.erase(copy.coeff.upper_bound(dmax), copy.coeff.end());
        copy.dmax = dmax;
      }
      out[copy.labels] = std::move(copy);
    }
  }
  return out;
}

bool CharacterizationReport::pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

CharacterizationReport verify_characterization(const McKayThompsonSeries& series, const CharacterTable& table,
                                               const std::vector<ModuleDecomposition>& multiplicities) {
  CharacterizationReport rep;
  rep.group = series.labels;
  auto classes = table.classes_in_group(series.labels);
  auto chi = [&](int j, int cls) { return table.value(j - 1, cls); };

  auto check = [&](const std::string& name, const AlgebraicValue& expected, long D) {
    CheckLine l;
    l.name = name;
    l.expected = expected.str();
    if (D > series.dmax) {
      l.actual = "not computed";
    } else {
      mpz_class a = series.coefficient(D);
      l.actual = a.get_str();
      l.pass = expected == AlgebraicValue(mpq_class(a));
    }
    rep.lines.push_back(l);
  };

  for (int cls : classes) {
    const std::string& c = table.classes()[cls];
    check("a(3) = chi7(" + c + ")", chi(7, cls), 3);
    check("a(4) = chi1+chi12+chi18(" + c + ")", chi(1, cls) + chi(12, cls) + chi(18, cls), 4);
    for (auto& d : multiplicities) {
      if (d.grade == 3 || d.grade == 4) continue;
      AlgebraicValue s;
      for (std::size_t j = 0; j < d.multiplicity.size(); ++j) s += AlgebraicValue(mpq_class(d.multiplicity[j])) * chi(int(j) + 1, cls);
      check("a(" + std::to_string(d.grade) + ") from multiplicities (" + c + ")", s, d.grade);
    }
  }

  CheckLine sup;
  sup.name = "plus space support";
  sup.expected = "a(D) = 0 for D = 1,2 mod 4";
  sup.pass = true;
  for (auto& [D, v] : series.coeff)
    if (D % 4 == 1 || D % 4 == 2) {
      sup.pass = false;
      sup.actual = "a(" + std::to_string(D) + ") = " + v.get_str();
      break;
    }
  if (sup.pass) sup.actual = "ok to " + std::to_string(series.dmax);
  rep.lines.push_back(sup);

  CheckLine pp;
  pp.name = "principal part and constant";
  pp.expected = "-q^-4 + 2";
  pp.actual = series.coefficient(-4).get_str() + " q^-4 + " + series.coefficient(0).get_str();
  pp.pass = series.coefficient(-4) == -1 && series.coefficient(0) == 2;
  rep.lines.push_back(pp);
  return rep;
}

bool two_adic_divisible(const mpq_class& x, int k) {
  if (x == 0) return true;
  mpz_class num = x.get_num(), den = x.get_den();
  if (mpz_even_p(den.get_mpz_t())) return false;
  return mpz_scan1(num.get_mpz_t(), 0) >= static_cast<mp_bitcnt_t>(k);
}

Mock16Report mock16_relation(long dmax, SeriesStore& store) {
  Mock16Report rep;
  rep.dmax = dmax;
  auto h = store.class_numbers(1, dmax / 4);
  for (long n = 1; n <= dmax; ++n) {
    mpq_class lhs = n % 4 == 0 ? mpq_class(4 * h->coefficient(n / 4)) : mpq_class(0);
    long m = 0;
    while ((m + 1) * (m + 1) * 16 <= n) ++m;
    mpq_class theta = (16 * m * m == n && n > 0) ? 2 : 0;
    if (!two_adic_divisible(lhs - theta, 2)) rep.failures.push_back(n);
  }
  auto f16 = store.series("16ABCD", dmax);
  for (auto& [D, v] : f16->coeff)
    if (D <= dmax && (D % 4 == 1 || D % 4 == 2)) rep.support.push_back(D);
  return rep;
}

}  // namespace onan
