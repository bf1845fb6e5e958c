#include "onan/cuspdata.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifndef ONAN_DEFAULT_DATA_DIR
#define ONAN_DEFAULT_DATA_DIR "data"
#endif

namespace onan {

mpq_class CuspFormData::coefficient(int n) const {
  if (n >= order) throw CuspDataError(CuspDataError::Kind::MissingForm,
                                      name + ": coefficient " + std::to_string(n) + " beyond stored order " +
                                          std::to_string(order));
  auto it = rational.find(n);
  return it == rational.end() ? mpq_class(0) : it->second;
}

mpq_class CuspFormData::sqrt5_coefficient(int n) const {
  if (n >= order) throw CuspDataError(CuspDataError::Kind::MissingForm,
                                      name + ": coefficient " + std::to_string(n) + " beyond stored order");
  auto it = sqrt5.find(n);
  return it == sqrt5.end() ? mpq_class(0) : it->second;
}

std::string CuspFormData::canonical_payload() const {
  std::ostringstream os;
  os << "form " << name << "\n"
     << "level " << level << "\n"
     << "weight2 " << weight2 << "\n"
     << "plus " << (plus ? 1 : 0) << "\n"
     << "leading " << leading << "\n"
     << "field " << (sqrt5_field ? "sqrt5" : "rational") << "\n";
  std::map<int, bool> keys;
  for (auto& kv : rational) keys[kv.first] = true;
  for (auto& kv : sqrt5) keys[kv.first] = true;
  for (auto& kv : keys) {
    int n = kv.first;
    mpq_class r = coefficient(n);
    os << n << " " << r.get_num() << " " << r.get_den();
    if (sqrt5_field) {
      mpq_class s = sqrt5_coefficient(n);
      os << " " << s.get_num() << " " << s.get_den();
    }
    os << "\n";
  }
  return os.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string data_directory() {
  if (const char* env = std::getenv("ONAN_DATA_DIR"); env && *env) return env;
  return ONAN_DEFAULT_DATA_DIR;
}

namespace {

mpq_class read_fraction(std::istringstream& is, const std::string& ctx) {
  std::string num, den;
  if (!(is >> num >> den)) throw CuspDataError(CuspDataError::Kind::Malformed, "malformed coefficient in " + ctx);
  mpq_class q{mpz_class(num), mpz_class(den)};
  q.canonicalize();
  return q;
}

}  // namespace

CuspStore CuspStore::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CuspDataError(CuspDataError::Kind::MissingFile,
                               "cusp form data file not found: " + path +
                                   " (regenerate with tools/cuspform_oracle.py or set ONAN_DATA_DIR)");
  CuspStore store;
  store.path_ = path;
  int declared_order = -1;
  std::string line;
  CuspFormData cur;
  bool in_form = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (!in_form) {
      if (key == "schema") {
        std::string tag;
        is >> tag >> store.schema_;
        if (tag != "onan-cuspforms" || store.schema_ != 1)
          throw CuspDataError(CuspDataError::Kind::Malformed, path + ": unsupported schema '" + line + "'");
      } else if (key == "order") {
        is >> declared_order;
      } else if (key == "form") {
        cur = CuspFormData();
        is >> cur.name;
        cur.order = declared_order + 1;
        in_form = true;
      } else {
        throw CuspDataError(CuspDataError::Kind::Malformed, path + ":" + std::to_string(lineno) + ": unexpected '" + key + "'");
      }
      continue;
    }
    if (key == "end") {
      std::string digest = sha256_hex(cur.canonical_payload());
      if (digest != cur.sha256)
        throw CuspDataError(CuspDataError::Kind::HashMismatch,
                            path + ": content hash mismatch for form " + cur.name + " (file edited by hand?)");
      store.forms_[cur.name] = cur;
      in_form = false;
    } else if (key == "level") {
      is >> cur.level;
    } else if (key == "weight2") {
      is >> cur.weight2;
    } else if (key == "plus") {
      int p = 0;
      is >> p;
      cur.plus = p != 0;
    } else if (key == "leading") {
      is >> cur.leading;
    } else if (key == "provenance") {
      std::getline(is, cur.provenance);
      if (!cur.provenance.empty() && cur.provenance[0] == ' ') cur.provenance.erase(0, 1);
    } else if (key == "sha256") {
      is >> cur.sha256;
    } else if (key == "field") {
      std::string f;
      is >> f;
      cur.sqrt5_field = f == "sqrt5";
    } else {
      int n = std::stoi(key);
      std::string ctx = path + ":" + std::to_string(lineno);
      mpq_class r = read_fraction(is, ctx);
      if (r != 0) cur.rational[n] = r;
      if (cur.sqrt5_field) {
        mpq_class s = read_fraction(is, ctx);
        if (s != 0) cur.sqrt5[n] = s;
      }
    }
  }
  if (in_form) throw CuspDataError(CuspDataError::Kind::Malformed, path + ": unterminated form " + cur.name);
  return store;
}

CuspStore CuspStore::load_default() { return load(data_directory() + "/cuspforms.txt"); }

const CuspFormData& CuspStore::get(const std::string& name) const {
  auto it = forms_.find(name);
  if (it == forms_.end())
    throw CuspDataError(CuspDataError::Kind::MissingForm,
                        "cusp form '" + name + "' missing from " + (path_.empty() ? std::string("store") : path_));
  return it->second;
}

void CuspStore::add(CuspFormData form) { forms_[form.name] = std::move(form); }

std::vector<std::string> CuspStore::names() const {
  std::vector<std::string> out;
  for (auto& kv : forms_) out.push_back(kv.first);
  return out;
}

std::string write_cusp_record(const CuspFormData& form) {
  std::string payload = form.canonical_payload();
  // provenance and hash go after the header lines, as in the shipped file
  std::istringstream is(payload);
  std::ostringstream os;
  std::string line;
  int i = 0;
  while (std::getline(is, line)) {
    if (i == 5) {
      os << "provenance " << form.provenance << "\n";
      os << "sha256 " << sha256_hex(payload) << "\n";
    }
    os << line << "\n";
    ++i;
  }
  os << "end\n";
  return os.str();
}

}  // namespace onan
