#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "onan/character_table.hpp"
#include "onan/cuspdata.hpp"

using namespace onan;

namespace {

std::map<long, std::vector<mpz_class>> reference_mults() {
  std::ifstream in(data_directory() + "/reference_multiplicities.txt");
  std::map<long, std::vector<mpz_class>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    long m;
    is >> m;
    std::string v;
    while (is >> v) out[m].push_back(mpz_class(v));
  }
  return out;
}

}  // namespace

TEST(CharacterTable, Tokens) {
  auto A = AlgebraicValue::parse("A"), Ab = AlgebraicValue::parse("Abar");
  EXPECT_EQ(A + Ab, AlgebraicValue(1L));
  auto H = AlgebraicValue::parse("H");
  EXPECT_EQ(H * H.conj(), AlgebraicValue(8L));
  auto sum = AlgebraicValue::parse("C") + AlgebraicValue::parse("D") + AlgebraicValue::parse("E");
  EXPECT_EQ(sum, AlgebraicValue(1L));
  EXPECT_EQ(AlgebraicValue::parse("B") + AlgebraicValue::parse("-B"), AlgebraicValue(0L));
  EXPECT_EQ(AlgebraicValue::parse("F") + AlgebraicValue::parse("F").conj(), AlgebraicValue(0L));
  EXPECT_EQ(AlgebraicValue::parse("G") + AlgebraicValue::parse("-G"), AlgebraicValue(0L));
  // D and E are the other roots of the cubic
  for (const char* r : {"C", "D", "E"}) {
    auto x = AlgebraicValue::parse(r);
    auto v = x * x * x - x * x - AlgebraicValue(6L) * x + AlgebraicValue(7L);
    EXPECT_EQ(v, AlgebraicValue(0L)) << r;
  }
  EXPECT_THROW(AlgebraicValue::parse("Q"), CharacterTableError);
}

TEST(CharacterTable, Orthogonality) {
  auto t = CharacterTable::load_default();
  auto r = check_orthogonality(t, mpz_class(kGroupOrder));
  for (auto& f : r.failures) ADD_FAILURE() << f;
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.degree_sum, mpz_class("460815505920"));
}

TEST(CharacterTable, PrintedTableFailsOnlyAtErrata) {
  auto t = CharacterTable::load_default(false);
  auto r = check_orthogonality(t, mpz_class(kGroupOrder));
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(t.errata().size(), 2u);
}

TEST(CharacterTable, Centralizers) {
  auto t = CharacterTable::load_default();
  EXPECT_EQ(t.centralizer_order("1A"), mpz_class("460815505920"));
  EXPECT_EQ(t.centralizer_order("31A"), t.centralizer_order("31B"));
  EXPECT_EQ(t.centralizer_order("31A"), 31);
  for (auto& c : t.classes()) EXPECT_EQ(mpz_class(kGroupOrder) % t.centralizer_order(c), 0) << c;
}

TEST(CharacterTable, Groups) {
  auto t = CharacterTable::load_default();
  auto g = t.order_groups();
  EXPECT_EQ(g.size(), 18u);
  EXPECT_EQ(t.classes_in_group("16ABCD").size(), 4u);
  EXPECT_EQ(t.group_of(t.class_index("7B")), "7AB");
}

TEST(CharacterTable, ReferenceMultiplicityRoundTrip) {
  auto t = CharacterTable::load_default();
  for (auto& [m, mult] : reference_mults()) {
    ModuleDecomposition d{m, mult};
    auto a = recompose(t, d);
    std::map<std::string, mpz_class> coeff;
    for (std::size_t g = 0; g < t.size(); ++g) coeff[t.classes()[g]] = a[g];
    auto back = decompose(t, m, coeff);
    EXPECT_EQ(back.multiplicity, mult) << m;
    // traces are constant on order groups once the table is corrected
    for (auto& grp : t.order_groups()) {
      auto cls = t.classes_in_group(grp);
      for (int c : cls) EXPECT_EQ(a[c], a[cls[0]]) << m << " " << grp;
    }
  }
}

TEST(CharacterTable, NonIntegralRejected) {
  auto t = CharacterTable::load_default();
  std::map<std::string, mpz_class> coeff;
  for (auto& c : t.classes()) coeff[c] = 0;
  coeff["1A"] = 1;
  EXPECT_THROW(decompose(t, 1, coeff), NonIntegralMultiplicity);
}

TEST(CharacterTable, Positivity) {
  std::vector<ModuleDecomposition> d;
  for (auto& [m, mult] : reference_mults()) d.push_back({m, mult});
  auto r = positivity_scan(36, d);
  EXPECT_TRUE(r.pass);
  std::set<long> grades;
  for (auto& [m, j] : r.negatives) grades.insert(m);
  EXPECT_EQ(grades, (std::set<long>{7, 8, 12}));
  d.push_back({40, std::vector<mpz_class>(30, 0)});
  d.back().multiplicity[3] = -1;
  EXPECT_FALSE(positivity_scan(40, d).pass);
}

TEST(CharacterTable, MonsterIdentity) {
  auto t = CharacterTable::load_default();
  EXPECT_EQ(t.degree(6), 26752);
  EXPECT_EQ(t.degree(11), 58311);
  EXPECT_EQ(t.degree(17), 85064);
  EXPECT_TRUE(monster_identity_check(t).pass);
  EXPECT_FALSE(monster_identity_check(t, 1).pass);
}
