#pragma once

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "onan/arith.hpp"
#include "onan/cuspdata.hpp"

namespace onan {

// One record from the external database, as cached on disk. The payload is the
// source's JSON object re-serialized compactly with sorted keys.
struct ExternalRecord {
  std::string label;       // "11.a2", "31.2.a.a", ...
  std::string kind;        // "curve" or "form"
  std::string source;      // request URL
  std::string fetched_at;  // UTC, ISO 8601; "seed" for shipped records
  std::string payload;
  std::string sha256;      // of payload
};

class ExternalDataError : public std::runtime_error {
 public:
  enum class Kind { Offline, Network, Schema, Cache };
  ExternalDataError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// GET base_url + path, returning the body. Throws ExternalDataError(Network).
using Transport = std::function<std::string(const std::string& base_url, const std::string& path)>;

struct ClientOptions {
  std::string cache_dir;                          // writable cache
  std::string seed_dir;                           // read-only shipped records, may be empty
  bool offline = true;
  std::string base_url = "https://www.lmfdb.org";
  int timeout_seconds = 30;
};

// cache_dir from ONAN_CACHE_DIR, else $XDG_CACHE_HOME/onan, else ~/.cache/onan;
// seed_dir is data_directory()/lmfdb_seed.
ClientOptions client_options_from_environment();

class LmfdbClient {
 public:
  explicit LmfdbClient(ClientOptions options, Transport transport = {});

  const ClientOptions& options() const { return opt_; }

  // Cache, then seed, then the network when online.
  ExternalRecord fetch_curve(const std::string& label);
  ExternalRecord fetch_form(const std::string& label);

  std::optional<ExternalRecord> cached(const std::string& kind, const std::string& label) const;
  // Records are immutable: storing a different payload under an existing label throws.
  void store(const ExternalRecord& record);

  long network_calls() const { return calls_; }

 private:
  ExternalRecord fetch(const std::string& kind, const std::string& label, const std::string& path);

  ClientOptions opt_;
  Transport transport_;
  long calls_ = 0;
};

std::string http_transport_get(const std::string& base_url, const std::string& path, int timeout_seconds);

ExternalRecord make_record(const std::string& kind, const std::string& label, const std::string& source,
                           const std::string& body);

struct CurveRecord {
  std::string label;
  std::vector<mpz_class> ainvs;  // [a1, a2, a3, a4, a6]
  int rank = 0;
  mpz_class sha;
};

CurveRecord parse_curve(const ExternalRecord& r);
CurveData curve_data(const ExternalRecord& r);

// Form payload: "an" lists a(n) for n = an_start, an_start + 1, ...; entries are
// integers, fraction strings, or [x, y] over the field of "field_poly"
// ([-1, -1, 1] for x^2 - x - 1, [-5, 0, 1] for x^2 - 5).
CuspFormData parse_form(const ExternalRecord& r, const std::string& name, int order);

// Fetches the form and writes a cusp form data file loadable by CuspStore.
CuspFormData bootstrap_cuspform(LmfdbClient& client, const std::string& label, const std::string& name, int order,
                                const std::string& out_path);

}  // namespace onan
