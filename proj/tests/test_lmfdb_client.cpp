#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "onan/lmfdb_client.hpp"

using namespace onan;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("onan-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ClientOptions offline_options(const fs::path& cache) {
  ClientOptions o = client_options_from_environment();
  o.cache_dir = cache.string();
  o.offline = true;
  return o;
}

Transport forbidden() {
  return [](const std::string& b, const std::string& p) -> std::string {
    ADD_FAILURE() << "unexpected network call " << b << p;
    return "";
  };
}

std::vector<long> ainvs(const CurveRecord& c) {
  std::vector<long> out;
  for (auto& a : c.ainvs) out.push_back(a.get_si());
  return out;
}

// Stand-in for the database API on 127.0.0.1.
class FakeApi {
 public:
  FakeApi() {
    svr_.Get("/api/ec_curvedata/", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      std::string label = req.get_param_value("lmfdb_label");
      auto it = curves.find(label);
      json body;
      body["data"] = json::array();
      if (it != curves.end()) body["data"].push_back(it->second);
      res.set_content(body.dump(), "application/json");
    });
    svr_.Get("/api/mf_hecke_nf/", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      auto it = forms.find(req.get_param_value("label"));
      json body;
      body["data"] = json::array();
      if (it != forms.end()) body["data"].push_back(it->second);
      res.set_content(body.dump(), "application/json");
    });
    port_ = svr_.bind_to_any_port("127.0.0.1");
    th_ = std::thread([this] { svr_.listen_after_bind(); });
    svr_.wait_until_ready();
  }
  ~FakeApi() {
    svr_.stop();
    th_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::map<std::string, json> curves, forms;
  std::atomic<int> hits{0};

 private:
  httplib::Server svr_;
  int port_ = 0;
  std::thread th_;
};

ClientOptions online_options(const fs::path& cache, const FakeApi& api) {
  ClientOptions o;
  o.cache_dir = cache.string();
  o.offline = false;
  o.base_url = api.url();
  o.timeout_seconds = 5;
  return o;
}

const CuspStore& shipped() {
  static CuspStore s = CuspStore::load_default();
  return s;
}

}  // namespace

TEST(Lmfdb, SeededCurvesOffline) {
  auto cache = fresh_dir("seed");
  LmfdbClient c(offline_options(cache), forbidden());
  auto e11 = c.fetch_curve("11.a2");
  EXPECT_EQ(ainvs(parse_curve(e11)), (std::vector<long>{0, -1, 1, -10, -20}));
  auto e19 = c.fetch_curve("19.a2");
  EXPECT_EQ(ainvs(parse_curve(e19)), (std::vector<long>{0, 1, 1, -9, -15}));
  EXPECT_EQ(c.fetch_curve("11.a2").sha256, e11.sha256);
  EXPECT_EQ(sha256_hex(e11.payload), e11.sha256);
  CurveData d = curve_data(e19);
  EXPECT_NE(d.provenance.find(e19.sha256), std::string::npos);
  EXPECT_EQ(c.network_calls(), 0);
  fs::remove_all(cache);
}

TEST(Lmfdb, OfflineMissIsExplicit) {
  auto cache = fresh_dir("miss");
  LmfdbClient c(offline_options(cache), forbidden());
  try {
    c.fetch_curve("37.a1");
    FAIL() << "expected an offline error";
  } catch (const ExternalDataError& e) {
    EXPECT_EQ(e.kind(), ExternalDataError::Kind::Offline);
    EXPECT_NE(std::string(e.what()).find("offline"), std::string::npos);
  }
  EXPECT_THROW(c.fetch_curve("../etc/passwd"), ExternalDataError);
  fs::remove_all(cache);
}

TEST(Lmfdb, FetchCachesAndReplays) {
  FakeApi api;
  api.curves["37.a1"] = {{"lmfdb_label", "37.a1"}, {"ainvs", {0, 0, 1, -1, 0}}, {"rank", 1}, {"sha", 1}, {"conductor", 37}};
  auto cache = fresh_dir("online");
  LmfdbClient online(online_options(cache, api));
  auto r = online.fetch_curve("37.a1");
  EXPECT_EQ(online.network_calls(), 1);
  EXPECT_EQ(parse_curve(r).rank, 1);
  EXPECT_EQ(online.fetch_curve("37.a1").sha256, r.sha256);
  EXPECT_EQ(online.network_calls(), 1);
  EXPECT_EQ(api.hits, 1);

  LmfdbClient offline(offline_options(cache), forbidden());
  auto again = offline.fetch_curve("37.a1");
  EXPECT_EQ(again.sha256, r.sha256);
  EXPECT_EQ(again.payload, r.payload);
  EXPECT_EQ(again.fetched_at, r.fetched_at);
  fs::remove_all(cache);
}

TEST(Lmfdb, MalformedPayloadIsSchemaError) {
  FakeApi api;
  api.curves["99.a1"] = {{"lmfdb_label", "99.a1"}, {"ainvs", {0, 1}}, {"rank", 0}, {"sha", 1}};
  api.curves["98.a1"] = {{"lmfdb_label", "98.a1"}, {"ainvs", {0, 1, 0, 2, 3}}, {"sha", 1}};
  auto cache = fresh_dir("malformed");
  LmfdbClient c(online_options(cache, api));
  for (std::string label : {"99.a1", "98.a1", "97.a1"}) {
    try {
      c.fetch_curve(label);
      FAIL() << label;
    } catch (const ExternalDataError& e) {
      EXPECT_EQ(e.kind(), ExternalDataError::Kind::Schema) << label << ": " << e.what();
    }
    EXPECT_FALSE(c.cached("curve", label).has_value());
  }
  EXPECT_THROW(make_record("curve", "x", "src", "not json"), ExternalDataError);
  fs::remove_all(cache);
}

TEST(Lmfdb, NetworkFailureIsReported) {
  auto cache = fresh_dir("down");
  ClientOptions o = offline_options(cache);
  o.offline = false;
  o.seed_dir.clear();
  o.base_url = "http://127.0.0.1:1";
  o.timeout_seconds = 2;
  LmfdbClient c(o);
  try {
    c.fetch_curve("11.a2");
    FAIL();
  } catch (const ExternalDataError& e) {
    EXPECT_EQ(e.kind(), ExternalDataError::Kind::Network);
  }
  fs::remove_all(cache);
}

TEST(Lmfdb, CacheRoundTrip) {
  auto cache = fresh_dir("roundtrip");
  LmfdbClient c(offline_options(cache), forbidden());
  auto r = make_record("curve", "43.a1", "test", R"({"data":[{"ainvs":[0,1,1,0,0],"rank":1,"sha":1}]})");
  c.store(r);
  auto back = c.cached("curve", "43.a1");
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->sha256, r.sha256);
  EXPECT_EQ(back->payload, r.payload);
  EXPECT_EQ(sha256_hex(back->payload), r.sha256);
  c.store(r);  // identical record: no-op

  auto other = make_record("curve", "43.a1", "test", R"({"ainvs":[0,1,1,0,1],"rank":1,"sha":1})");
  EXPECT_THROW(c.store(other), ExternalDataError);

  // tampering is detected on read
  fs::path p = cache / "curve" / "43.a1.json";
  std::ifstream in(p);
  json j = json::parse(in);
  in.close();
  j["payload"] = other.payload;
  std::ofstream(p) << j.dump();
  try {
    c.cached("curve", "43.a1");
    FAIL();
  } catch (const ExternalDataError& e) {
    EXPECT_EQ(e.kind(), ExternalDataError::Kind::Cache);
  }
  fs::remove_all(cache);
}

TEST(Lmfdb, ConcurrentWritersAgree) {
  auto cache = fresh_dir("concurrent");
  auto r = make_record("curve", "53.a1", "test", R"({"ainvs":[1,-1,1,0,0],"rank":1,"sha":1})");
  std::vector<std::thread> ts;
  std::atomic<int> errors{0};
  for (int i = 0; i < 8; ++i) {
    ts.emplace_back([&] {
      try {
        LmfdbClient c(offline_options(cache));
        c.store(r);
        if (c.cached("curve", "53.a1")->sha256 != r.sha256) ++errors;
      } catch (...) {
        ++errors;
      }
    });
  }
  for (auto& t : ts) t.join();
  EXPECT_EQ(errors, 0);
  fs::remove_all(cache);
}

TEST(Lmfdb, BootstrapRationalForm) {
  const int order = 300;
  const CuspFormData& g = shipped().get("g31");
  json an = json::array();
  for (int n = 1; n < order; ++n) {
    mpq_class c = g.coefficient(n);
    an.push_back(c.get_den() == 1 ? json(c.get_num().get_si()) : json(c.get_str()));
  }
  FakeApi api;
  api.forms["124.3-2.plus.g31"] = {{"level", 124}, {"weight", "3/2"}, {"plus", true}, {"an", an}};
  auto cache = fresh_dir("boot-g");
  fs::path out = cache / "boot" / "g31.txt";
  LmfdbClient c(online_options(cache, api));
  CuspFormData f = bootstrap_cuspform(c, "124.3-2.plus.g31", "g31", order, out.string());
  EXPECT_EQ(f.leading, 4);
  EXPECT_EQ(f.coefficient(4), 1);
  EXPECT_EQ(f.coefficient(7), mpq_class(11, 3));

  CuspStore loaded = CuspStore::load(out.string());
  const CuspFormData& h = loaded.get("g31");
  EXPECT_EQ(h.order, order);
  EXPECT_EQ(h.weight2, 3);
  EXPECT_TRUE(h.plus);
  EXPECT_NE(h.provenance.find(api.url()), std::string::npos);
  for (int n = 0; n < order; ++n) EXPECT_EQ(h.coefficient(n), g.coefficient(n)) << n;

  // the same file comes back offline from the cache
  fs::path out2 = cache / "boot" / "g31b.txt";
  LmfdbClient off(offline_options(cache), forbidden());
  CuspFormData f2 = bootstrap_cuspform(off, "124.3-2.plus.g31", "g31", order, out2.string());
  EXPECT_EQ(f2.sha256, f.sha256);
  fs::remove_all(cache);
}

TEST(Lmfdb, BootstrapQuadraticForm) {
  const int order = 120;
  const CuspFormData& g = shipped().get("f31");
  // LMFDB convention: a(n) = x + y beta with beta^2 = beta + 1, so r + s sqrt5 = (r - s) + 2s beta
  json an = json::array();
  for (int n = 1; n < order; ++n) {
    mpq_class r = g.coefficient(n), s = g.sqrt5_coefficient(n);
    mpq_class x = r - s, y = 2 * s;
    an.push_back(json::array({x.get_str(), y.get_str()}));
  }
  FakeApi api;
  api.forms["31.2.a.a"] = {{"level", 31}, {"weight", 2}, {"field_poly", {-1, -1, 1}}, {"an", an}};
  auto cache = fresh_dir("boot-f");
  LmfdbClient c(online_options(cache, api));
  CuspFormData f = bootstrap_cuspform(c, "31.2.a.a", "f31", order, (cache / "f31.txt").string());
  EXPECT_EQ(f.coefficient(2), mpq_class(1, 2));
  EXPECT_EQ(f.sqrt5_coefficient(2), mpq_class(1, 2));
  CuspStore loaded = CuspStore::load((cache / "f31.txt").string());
  for (int n = 1; n < order; ++n) {
    EXPECT_EQ(loaded.get("f31").coefficient(n), g.coefficient(n));
    EXPECT_EQ(loaded.get("f31").sqrt5_coefficient(n), g.sqrt5_coefficient(n));
  }
  // too few coefficients
  EXPECT_THROW(parse_form(c.fetch_form("31.2.a.a"), "f31", 500), ExternalDataError);
  fs::remove_all(cache);
}
