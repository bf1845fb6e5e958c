#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace onan {

// Exact q-expansion of an ingested cusp form. Coefficients are stored as
// rational + sqrt5 * rational; the sqrt5 part is empty for rational forms.
struct CuspFormData {
  std::string name;
  int level = 0;
  int weight2 = 3;  // twice the weight
  bool plus = false;
  int leading = 0;
  bool sqrt5_field = false;
  std::string provenance;
  std::string sha256;
  int order = 0;  // coefficients known for exponents < order
  std::map<int, mpq_class> rational;
  std::map<int, mpq_class> sqrt5;

  mpq_class coefficient(int n) const;
  mpq_class sqrt5_coefficient(int n) const;
  // Canonical payload whose SHA-256 is recorded in the file.
  std::string canonical_payload() const;
};

class CuspDataError : public std::runtime_error {
 public:
  enum class Kind { MissingFile, MissingForm, Malformed, HashMismatch, Invariant };
  CuspDataError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class CuspStore {
 public:
  CuspStore() = default;
  static CuspStore load(const std::string& path);
  static CuspStore load_default();

  bool has(const std::string& name) const { return forms_.count(name) != 0; }
  const CuspFormData& get(const std::string& name) const;
  void add(CuspFormData form);
  std::vector<std::string> names() const;
  const std::string& path() const { return path_; }
  int schema_version() const { return schema_; }

 private:
  std::map<std::string, CuspFormData> forms_;
  std::string path_;
  int schema_ = 1;
};

std::string sha256_hex(const std::string& data);
// Directory holding the shipped data files (ONAN_DATA_DIR overrides).
std::string data_directory();
std::string write_cusp_record(const CuspFormData& form);

}  // namespace onan
