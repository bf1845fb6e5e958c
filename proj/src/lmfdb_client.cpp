#include "onan/lmfdb_client.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace onan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Kind = ExternalDataError::Kind;

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// labels like 11.a2 or 31.2.a.a; anything else is refused before touching disk
void check_label(const std::string& label) {
  if (label.empty() || label.size() > 64 || label[0] == '.')
    throw ExternalDataError(Kind::Schema, "bad label '" + label + "'");
  for (char ch : label)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '_' && ch != '-')
      throw ExternalDataError(Kind::Schema, "bad label '" + label + "'");
}

std::string url_encode(const std::string& s) {
  std::string out;
  for (unsigned char ch : s) {
    if (std::isalnum(ch) || ch == '.' || ch == '_' || ch == '-') {
      out += static_cast<char>(ch);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", ch);
      out += buf;
    }
  }
  return out;
}

fs::path record_path(const std::string& dir, const std::string& kind, const std::string& label) {
  return fs::path(dir) / kind / (label + ".json");
}

class FileLock {
 public:
  FileLock(const std::string& dir, int op) {
    fs::create_directories(dir);
    fd_ = ::open((fs::path(dir) / ".lock").c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) throw ExternalDataError(Kind::Cache, "cannot open lock file in " + dir);
    if (::flock(fd_, op) != 0) {
      ::close(fd_);
      throw ExternalDataError(Kind::Cache, "cannot lock cache " + dir);
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

std::optional<ExternalRecord> read_record(const fs::path& p) {
  std::ifstream in(p);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ExternalDataError(Kind::Cache, p.string() + ": unreadable cache record: " + e.what());
  }
  ExternalRecord r;
  try {
    r.label = j.at("label").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.source = j.at("source").get<std::string>();
    r.fetched_at = j.at("fetched_at").get<std::string>();
    r.payload = j.at("payload").get<std::string>();
    r.sha256 = j.at("sha256").get<std::string>();
  } catch (const json::exception& e) {
    throw ExternalDataError(Kind::Cache, p.string() + ": incomplete cache record: " + e.what());
  }
  if (sha256_hex(r.payload) != r.sha256) throw ExternalDataError(Kind::Cache, p.string() + ": payload hash mismatch");
  return r;
}

json record_json(const ExternalRecord& r) {
  json j;
  j["label"] = r.label;
  j["kind"] = r.kind;
  j["source"] = r.source;
  j["fetched_at"] = r.fetched_at;
  j["payload"] = r.payload;
  j["sha256"] = r.sha256;
  return j;
}

json payload_json(const ExternalRecord& r) {
  try {
    return json::parse(r.payload);
  } catch (const json::exception& e) {
    throw ExternalDataError(Kind::Schema, r.label + ": payload is not JSON: " + e.what());
  }
}

mpz_class to_mpz(const json& v, const std::string& what) {
  if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    mpz_class z;
    if (z.set_str(v.get<std::string>(), 10) == 0) return z;
  }
  throw ExternalDataError(Kind::Schema, what + ": expected an integer, got " + v.dump());
}

mpq_class to_mpq(const json& v, const std::string& what) {
  if (v.is_number_integer()) return mpq_class(to_mpz(v, what));
  if (v.is_string()) {
    mpq_class q;
    if (q.set_str(v.get<std::string>(), 10) == 0 && q.get_den() != 0) {
      q.canonicalize();
      return q;
    }
  }
  throw ExternalDataError(Kind::Schema, what + ": expected a rational, got " + v.dump());
}

}  // namespace

ClientOptions client_options_from_environment() {
  ClientOptions o;
  if (const char* c = std::getenv("ONAN_CACHE_DIR"); c && *c) {
    o.cache_dir = c;
  } else if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) {
    o.cache_dir = std::string(x) + "/onan";
  } else if (const char* h = std::getenv("HOME"); h && *h) {
    o.cache_dir = std::string(h) + "/.cache/onan";
  } else {
    o.cache_dir = ".onan-cache";
  }
  o.seed_dir = data_directory() + "/lmfdb_seed";
  return o;
}

std::string http_transport_get(const std::string& base_url, const std::string& path, int timeout_seconds) {
  httplib::Client cli(base_url);
  cli.set_connection_timeout(timeout_seconds, 0);
  cli.set_read_timeout(timeout_seconds, 0);
  cli.set_follow_location(true);
  auto res = cli.Get(path);
  if (!res) throw ExternalDataError(Kind::Network, base_url + path + ": " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw ExternalDataError(Kind::Network, base_url + path + ": HTTP " + std::to_string(res->status));
  return res->body;
}

ExternalRecord make_record(const std::string& kind, const std::string& label, const std::string& source,
                           const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw ExternalDataError(Kind::Schema, source + ": response is not JSON: " + e.what());
  }
  // the API wraps results as {"data": [...]}; keep the single matching object
  if (j.is_object() && j.contains("data")) {
    const json& d = j["data"];
    if (!d.is_array()) throw ExternalDataError(Kind::Schema, source + ": 'data' is not a list");
    if (d.empty()) throw ExternalDataError(Kind::Schema, source + ": no record for " + label);
    if (d.size() > 1) throw ExternalDataError(Kind::Schema, source + ": several records for " + label);
    j = d[0];
  }
  if (!j.is_object()) throw ExternalDataError(Kind::Schema, source + ": record is not an object");
  ExternalRecord r;
  r.label = label;
  r.kind = kind;
  r.source = source;
  r.fetched_at = utc_now();
  r.payload = j.dump();
  r.sha256 = sha256_hex(r.payload);
  return r;
}

LmfdbClient::LmfdbClient(ClientOptions options, Transport transport)
    : opt_(std::move(options)), transport_(std::move(transport)) {
  if (!transport_) {
    int t = opt_.timeout_seconds;
    transport_ = [t](const std::string& base, const std::string& path) { return http_transport_get(base, path, t); };
  }
}

std::optional<ExternalRecord> LmfdbClient::cached(const std::string& kind, const std::string& label) const {
  check_label(label);
  if (!opt_.cache_dir.empty() && fs::exists(record_path(opt_.cache_dir, kind, label))) {
    FileLock lock(opt_.cache_dir, LOCK_SH);
    if (auto r = read_record(record_path(opt_.cache_dir, kind, label))) return r;
  }
  if (!opt_.seed_dir.empty())
    if (auto r = read_record(record_path(opt_.seed_dir, kind, label))) return r;
  return std::nullopt;
}

void LmfdbClient::store(const ExternalRecord& record) {
  check_label(record.label);
  if (opt_.cache_dir.empty()) throw ExternalDataError(Kind::Cache, "no cache directory configured");
  if (sha256_hex(record.payload) != record.sha256)
    throw ExternalDataError(Kind::Cache, record.label + ": payload hash mismatch");
  FileLock lock(opt_.cache_dir, LOCK_EX);
  fs::path p = record_path(opt_.cache_dir, record.kind, record.label);
  if (auto old = read_record(p)) {
    if (old->sha256 != record.sha256)
      throw ExternalDataError(Kind::Cache, p.string() + ": cached record differs (hash " + old->sha256 + ")");
    return;
  }
  fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    out << record_json(record).dump(1) << "\n";
    if (!out) throw ExternalDataError(Kind::Cache, "cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
}

ExternalRecord LmfdbClient::fetch(const std::string& kind, const std::string& label, const std::string& path) {
  if (auto r = cached(kind, label)) return *r;
  std::string url = opt_.base_url + path;
  if (opt_.offline)
    throw ExternalDataError(Kind::Offline, "offline: " + kind + " " + label + " is not cached in " +
                                               (opt_.cache_dir.empty() ? std::string("(none)") : opt_.cache_dir) +
                                               "; rerun with networking enabled to fetch " + url);
  ++calls_;
  ExternalRecord r = make_record(kind, label, url, transport_(opt_.base_url, path));
  if (kind == "curve") parse_curve(r);
  store(r);
  return r;
}

ExternalRecord LmfdbClient::fetch_curve(const std::string& label) {
  check_label(label);
  auto r = fetch("curve", label, "/api/ec_curvedata/?lmfdb_label=" + url_encode(label) + "&_format=json");
  parse_curve(r);
  return r;
}

ExternalRecord LmfdbClient::fetch_form(const std::string& label) {
  check_label(label);
  return fetch("form", label, "/api/mf_hecke_nf/?label=" + url_encode(label) + "&_format=json");
}

CurveRecord parse_curve(const ExternalRecord& r) {
  json j = payload_json(r);
  CurveRecord c;
  c.label = r.label;
  if (!j.contains("ainvs") || !j["ainvs"].is_array() || j["ainvs"].size() != 5)
    throw ExternalDataError(Kind::Schema, r.label + ": 'ainvs' must be a list of five integers");
  for (auto& a : j["ainvs"]) c.ainvs.push_back(to_mpz(a, r.label + " ainvs"));
  if (!j.contains("rank") || !j["rank"].is_number_integer())
    throw ExternalDataError(Kind::Schema, r.label + ": missing integer 'rank'");
  c.rank = j["rank"].get<int>();
  if (!j.contains("sha")) throw ExternalDataError(Kind::Schema, r.label + ": missing 'sha'");
  c.sha = to_mpz(j["sha"], r.label + " sha");
  if (c.rank < 0 || c.sha <= 0) throw ExternalDataError(Kind::Schema, r.label + ": rank or sha out of range");
  if (j.contains("lmfdb_label") && j["lmfdb_label"] != r.label)
    throw ExternalDataError(Kind::Schema, r.label + ": payload is for " + j["lmfdb_label"].dump());
  return c;
}

CurveData curve_data(const ExternalRecord& r) {
  CurveRecord c = parse_curve(r);
  CurveData d;
  d.rank = c.rank;
  d.sha = c.sha;
  d.provenance = r.source + " sha256:" + r.sha256;
  return d;
}

CuspFormData parse_form(const ExternalRecord& r, const std::string& name, int order) {
  json j = payload_json(r);
  CuspFormData f;
  f.name = name;
  if (!j.contains("level") || !j["level"].is_number_integer())
    throw ExternalDataError(Kind::Schema, r.label + ": missing integer 'level'");
  f.level = j["level"].get<int>();
  if (!j.contains("weight")) throw ExternalDataError(Kind::Schema, r.label + ": missing 'weight'");
  mpq_class w = j["weight"].is_number_integer() ? mpq_class(j["weight"].get<int>()) : to_mpq(j["weight"], r.label + " weight");
  mpq_class w2 = 2 * w;
  if (w2.get_den() != 1 || w2 <= 0) throw ExternalDataError(Kind::Schema, r.label + ": weight must be in (1/2)Z, positive");
  f.weight2 = static_cast<int>(w2.get_num().get_si());
  f.plus = j.value("plus", false);
  long start = j.value("an_start", 1L);
  if (!j.contains("an") || !j["an"].is_array()) throw ExternalDataError(Kind::Schema, r.label + ": missing list 'an'");
  // basis (1, x) with x a root of field_poly, converted to r + s sqrt5
  mpq_class xr = 0, xs = 0;
  bool quadratic = false;
  if (j.contains("field_poly") && j["field_poly"].size() > 2) {
    auto& fp = j["field_poly"];
    std::vector<long> p;
    for (auto& v : fp) p.push_back(v.get<long>());
    if (p == std::vector<long>{-1, -1, 1}) {
      xr = mpq_class(1, 2), xs = mpq_class(1, 2);
    } else if (p == std::vector<long>{-5, 0, 1}) {
      xs = 1;
    } else {
      throw ExternalDataError(Kind::Schema, r.label + ": unsupported coefficient field " + fp.dump());
    }
    quadratic = true;
  }
  f.sqrt5_field = quadratic;
  long have = start + static_cast<long>(j["an"].size());
  if (have < order)
    throw ExternalDataError(Kind::Schema, r.label + ": only " + std::to_string(have - 1) + " coefficients, need " +
                                              std::to_string(order - 1));
  for (std::size_t i = 0; i < j["an"].size(); ++i) {
    long n = start + static_cast<long>(i);
    if (n >= order) break;
    const json& a = j["an"][i];
    std::string ctx = r.label + " a(" + std::to_string(n) + ")";
    mpq_class re, sq;
    if (a.is_array()) {
      if (!quadratic || a.size() != 2) throw ExternalDataError(Kind::Schema, ctx + ": unexpected vector");
      mpq_class x0 = to_mpq(a[0], ctx), x1 = to_mpq(a[1], ctx);
      re = x0 + x1 * xr;
      sq = x1 * xs;
    } else {
      re = to_mpq(a, ctx);
    }
    if (re != 0) f.rational[static_cast<int>(n)] = re;
    if (sq != 0) f.sqrt5[static_cast<int>(n)] = sq;
  }
  int leading = order;
  for (auto& kv : f.rational) leading = std::min(leading, kv.first);
  for (auto& kv : f.sqrt5) leading = std::min(leading, kv.first);
  if (leading == order) throw ExternalDataError(Kind::Schema, r.label + ": all coefficients vanish");
  f.leading = leading;
  f.order = order;
  f.provenance = r.source + " sha256:" + r.sha256 + " fetched " + r.fetched_at;
  f.sha256 = sha256_hex(f.canonical_payload());
  return f;
}

CuspFormData bootstrap_cuspform(LmfdbClient& client, const std::string& label, const std::string& name, int order,
                                const std::string& out_path) {
  CuspFormData f = parse_form(client.fetch_form(label), name, order);
  fs::path p(out_path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << "# bootstrapped from " << label << "\n"
        << "schema onan-cuspforms 1\n"
        << "order " << order - 1 << "\n\n"
        << write_cusp_record(f);
    if (!out) throw ExternalDataError(Kind::Cache, "cannot write " + tmp.string());
  }
  fs::rename(tmp, p);
  return f;
}

}  // namespace onan
