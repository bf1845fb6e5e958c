#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "onan/arith.hpp"
#include "onan/character_table.hpp"

namespace onan {

struct RunConfig {
  std::string command;
  std::string subcommand;    // verify only
  long dmax = 0;
  long mmax = 0;
  long bound = 0;
  std::string order;         // order group selector
  int level = 0;
  bool plus = false;
  int which = 0;
  TableFormat format = TableFormat::Csv;
  long mu = -4;
  long n = 3;
  long cmax = 100000;
  long trail_stride = 0;     // 0 picks cmax / 64
  long precision_bits = 0;   // 0 keeps the default policy
  bool offline = true;
  std::string cache_dir;
};

// Exit codes: 0 all requested checks pass, 1 verification failure, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Grades 3 <= m <= mmax with m = 0, 3 mod 4, decomposed from the computed series.
std::vector<ModuleDecomposition> decompose_grades(long mmax, SeriesStore& store, const CharacterTable& table);

TableFormat parse_table_format(const std::string& s);

}  // namespace onan
