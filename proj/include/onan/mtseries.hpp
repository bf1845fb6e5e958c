#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "onan/character_table.hpp"
#include "onan/cuspdata.hpp"
#include "onan/quadforms.hpp"
#include "onan/traces.hpp"

namespace onan {

struct ClassTerm {
  int level;
  mpq_class coefficient;
};

struct TraceRecipe {
  std::string group;  // order group label, e.g. "16ABCD"
  int order = 1;
  int trace_level = 1;
  bool plus = false;
  std::vector<ClassTerm> class_terms;
  std::string cusp;  // empty when there is no cusp form correction
  mpq_class gamma = 0;
};

const std::vector<TraceRecipe>& trace_recipes();
// Accepts "7AB", "7A", "7B" or "7".
const TraceRecipe& recipe_for(const std::string& label);

struct McKayThompsonSeries {
  std::string labels;
  int order = 1;
  int level = 4;
  long dmax = 0;
  std::map<long, mpz_class> coeff;  // nonzero a(D), 0 < D <= dmax

  // a(-4) = -1, a(0) = 2, zero elsewhere outside the stored range
  mpz_class coefficient(long D) const;
};

class AssemblyError : public std::runtime_error {
 public:
  AssemblyError(const std::string& what, long D, mpq_class value)
      : std::runtime_error(what), D_(D), value_(std::move(value)) {}
  long discriminant() const { return D_; }
  const mpq_class& value() const { return value_; }

 private:
  long D_;
  mpq_class value_;
};

// Validates the leading-term and support invariants of a shipped form.
const CuspFormData& load_cuspform(const std::string& name, const CuspStore& store);

// (r + s sqrt5) f + (r - s sqrt5) f^sigma for a form f over Q(sqrt5).
CuspFormData galois_trace(const CuspFormData& f, const mpq_class& r, const mpq_class& s, const std::string& name);

// Shared inputs for assembly. Trace and class number series are cached and
// reused when a later request needs no larger dmax.
class SeriesStore {
 public:
  explicit SeriesStore(const CuspStore* cusp, TraceContext ctx = {});

  const CuspStore& cusp() const { return *cusp_; }
  const TraceContext& context() const { return ctx_; }

  std::shared_ptr<const TraceSeries> traces(int N, bool plus, long dmax);
  std::shared_ptr<const ClassNumberSeries> class_numbers(int N, long dmax);
  std::shared_ptr<const McKayThompsonSeries> series(const std::string& group, long dmax);

 private:
  const CuspStore* cusp_;
  TraceContext ctx_;
  std::mutex mu_;
  std::map<std::pair<int, bool>, std::shared_ptr<const TraceSeries>> traces_;
  std::map<int, std::shared_ptr<const ClassNumberSeries>> classes_;
  std::map<std::string, std::shared_ptr<const McKayThompsonSeries>> series_;
};

McKayThompsonSeries mckay_thompson(const std::string& label, long dmax, SeriesStore& store);
// Same recipe with the cusp form replaced by an explicit coefficient source.
McKayThompsonSeries mckay_thompson_with(const TraceRecipe& recipe, long dmax, SeriesStore& store,
                                        const CuspFormData* cusp);
// One coefficient a(D), without assembling the series below D.
mpz_class mckay_thompson_coefficient(const std::string& label, long D, SeriesStore& store);
// All eighteen order groups, computed in parallel.
std::map<std::string, McKayThompsonSeries> mckay_thompson_all(long dmax, SeriesStore& store);

struct CheckLine {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct CharacterizationReport {
  std::string group;
  std::vector<CheckLine> lines;
  bool pass() const;
};

// a(3) = chi7(g), a(4) = chi1(g) + chi12(g) + chi18(g), and a(m) for every
// grade m of the supplied multiplicities, plus the support condition.
CharacterizationReport verify_characterization(const McKayThompsonSeries& series, const CharacterTable& table,
                                               const std::vector<ModuleDecomposition>& multiplicities = {});

struct Mock16Report {
  long dmax = 0;
  std::vector<long> failures;      // n where 4H(n/4) - theta(16 tau)_n is not 0 mod 4
  std::vector<long> support;       // D = 1,2 mod 4 with a nonzero F16 coefficient
  bool pass() const { return failures.empty() && support.empty(); }
};

// 4 H(4 tau) = theta(16 tau) mod 4 in the 2-integral sense, and the plus
// space support of F16ABCD.
Mock16Report mock16_relation(long dmax, SeriesStore& store);

// v(x) >= k for the 2-adic valuation of a rational x (true for x = 0).
bool two_adic_divisible(const mpq_class& x, int k);

}  // namespace onan
