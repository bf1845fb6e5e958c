#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "onan/mtseries.hpp"

namespace onan {

struct CongruenceSpec {
  std::vector<std::pair<std::string, long>> terms;  // (order group, integer coefficient)
  int prime = 2;
  int exponent = 1;

  mpz_class modulus() const;
  std::string str() const;
};

// The 24 congruences among the F_[g], in the published order.
const std::vector<CongruenceSpec>& published_congruences();

struct CongruenceResult {
  CongruenceSpec spec;
  bool principal_ok = false;  // q^-4 and q^0 terms
  std::optional<long> first_failure;
  mpz_class failing_value;
  long checked_to = 0;

  bool pass() const { return principal_ok && !first_failure; }
};

struct CongruenceReport {
  long bound = 0;
  std::vector<CongruenceResult> results;
  bool pass() const;
};

CongruenceResult check_congruence(const CongruenceSpec& spec, long bound, SeriesStore& store);
CongruenceReport verify_congruences(long bound, SeriesStore& store);

// -D < 0 fundamental, for D > 0.
bool is_fundamental(long D);
std::vector<long> fundamental_discriminants(long dmax);
// Kronecker symbol (a / n).
int kronecker(long a, long n);

struct ClassCongruenceRow {
  long D = 0;
  mpz_class dim;
  std::optional<mpz_class> trace;  // absent for p = 13
  mpz_class minus24h;
  mpz_class modulus;
  bool pass = false;
};

struct ClassCongruenceReport {
  int p = 2;
  long dmax = 0;
  std::vector<ClassCongruenceRow> rows;
  std::vector<long> failures;
  bool pass() const { return failures.empty(); }
};

// p = 2: even -D < -8, all three terms = 0 mod 16 and H(D) even.
// p = 3, 5, 7: (-D/p) = -1, dim = tr(g_p) = -24H(D) mod 9, 5, 7.
// p = 13: (-D/13) = -1, dim = -24H(D) mod 13.
ClassCongruenceReport class_congruence_scan(int p, long dmax, SeriesStore& store);

struct CurveData {
  int rank = 0;
  mpz_class sha;
  std::string provenance;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TwistIndicatorRow {
  long D = 0;
  int level = 11;
  int p = 11;
  int p_prime = 1;               // 1 for prime levels
  mpz_class dim;                 // dim W_D
  mpz_class trace_p_prime;       // tr(g_p' | W_D), equals dim for prime levels
  mpz_class trace_level;         // tr(g_N | W_D)
  mpq_class class_term;          // -24 H(D), or delta (H(D) - delta H^(p')(D))
  mpz_class diff_mod_p;          // (trace_p_prime - class_term) mod p, the sign of the printed column
  bool congruent = false;        // nontrivial p-Selmer indicator
  bool heegner_consistent = false;  // level-N trace and class numbers vanish
  std::optional<CurveData> curve;
};

// N in {11, 14, 15, 19}; throws PreconditionError naming the failing symbol.
TwistIndicatorRow twist_indicator(int N, long D, SeriesStore& store);

enum class TableFormat { Csv, Json, Markdown };

struct ExampleTable {
  int which = 0;  // 0 for tables that are not one of the examples
  std::string caption;
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
};

// Published rows: the D values of each example table and the printed entries.
struct ReferenceRow {
  int table = 3;
  long D = 0;
  std::vector<std::string> values;
};
std::vector<ReferenceRow> load_reference_rows(const std::string& path);
std::vector<ReferenceRow> load_default_reference_rows();

// which in 3..10; 7 and 8 are aliases of 9 and 10.
ExampleTable compute_table(int which, SeriesStore& store, const std::vector<ReferenceRow>& rows);
std::string format_table(const ExampleTable& t, TableFormat format);

// Printed token against a computed decimal, honouring "..." elisions.
bool matches_printed(const std::string& printed, const std::string& computed);

struct TableCheck {
  int which = 3;
  std::vector<std::string> mismatches;
  long exact = 0;   // fully printed entries compared
  long elided = 0;  // elided entries compared on their printed digits
  bool pass() const { return mismatches.empty(); }
};
TableCheck check_table(int which, SeriesStore& store, const std::vector<ReferenceRow>& rows);

}  // namespace onan
