#include <cmath>
#include <filesystem>

#include "bsq/compare.hpp"
#include "bsq/io.hpp"
#include "doctest.h"

using namespace bsq;
namespace fs = std::filesystem;

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, -0.0}) CHECK(io::parse_double(io::fmt(v), "t") == v);
  CHECK(io::fmt(NAN) == "nan");
  CHECK(io::fmt(INFINITY) == "inf");
  CHECK(io::fmt(-INFINITY) == "-inf");
  CHECK(std::isnan(io::parse_double("nan", "t")));
  CHECK_THROWS_AS(io::parse_double("1.5x", "t"), Error);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::hash_hex(0xabcULL) == "0000000000000abc");
}

TEST_CASE("initial data CSV round trip and hash") {
  auto d = compact_example_data(257);
  std::string text = io::initial_data_csv(d);
  auto back = io::parse_initial_data(text, "mem");
  CHECK(back.x == d.x);
  CHECK(back.u0 == d.u0);
  CHECK(back.v0 == d.v0);
  CHECK(io::initial_data_csv(back) == text);
  CHECK(io::data_hash(back) == io::data_hash(d));
  CHECK(io::data_hash(d).size() == 16);
  auto e = d;
  e.u0[100] += 1e-15;
  CHECK(io::data_hash(e) != io::data_hash(d));
  CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("malformed input names the source") {
  try {
    io::parse_initial_data("x,u0,v0\n0,1,2\n1,2\n", "bad.csv");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
    CHECK(std::string(e.what()).find("bad.csv") != std::string::npos);
  }
  try {
    io::read_file("/nonexistent/dir/file.csv");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
    CHECK(std::string(e.what()).find("/nonexistent/dir/file.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_initial_data("x,u0,v0\n0,0,0\n1,0,0\n3,0,0\n4,0,0\n", "gap.csv"), Error);
}

TEST_CASE("reflection table round trip") {
  auto d = compact_example_data(129);
  SamplingPlan p;
  p.n_circle = 60;
  p.n_ray = 5;
  auto t = reflection_coefficients(d, p);
  t.data_hash = io::data_hash(d);
  auto back = io::parse_reflection(io::reflection_csv(t), io::ray_csv(t), "mem");
  REQUIRE(back.circle.size() == t.circle.size());
  REQUIRE(back.ray.size() == t.ray.size());
  for (std::size_t i = 0; i < t.circle.size(); ++i) {
    CHECK(back.circle[i].excluded == t.circle[i].excluded);
    if (t.circle[i].excluded) continue;
    CHECK(back.circle[i].theta == t.circle[i].theta);
    CHECK(back.circle[i].r1 == t.circle[i].r1);
    CHECK(back.circle[i].r2 == t.circle[i].r2);
    CHECK(back.circle[i].s11 == t.circle[i].s11);
  }
  for (std::size_t i = 0; i < t.ray.size(); ++i) CHECK(back.ray[i].r1 == t.ray[i].r1);
  CHECK(back.data_hash == t.data_hash);
  CHECK(back.plan.n_circle == 60);
  CHECK(io::reflection_csv(back) == io::reflection_csv(t));
  CHECK(io::ray_path_for("out/refl.csv") == "out/refl_ray.csv");
}

TEST_CASE("asymptote and snapshot files") {
  std::vector<io::AsymptoteRow> rows = {{-1.0, 200.0, 0.25, Sector::V, false}, {3.5, 200.0, -1e-7, Sector::III, true}};
  auto text = io::asymptote_csv(rows, {{"data_hash", "0123456789abcdef"}});
  io::Meta m;
  auto back = io::parse_asymptote(text, "mem", &m);
  REQUIRE(back.size() == 2);
  CHECK(back[1].sector == Sector::III);
  CHECK(back[1].extrapolated);
  CHECK(back[0].u == 0.25);
  CHECK(m.at("data_hash") == "0123456789abcdef");
  CHECK(io::parse_sector("IV") == Sector::IV);
  CHECK_THROWS_AS(io::parse_sector("VI"), Error);

  FieldSnapshot s;
  s.t = 500;
  for (int i = 0; i < 8; ++i) {
    s.x.push_back(i);
    s.u.push_back(i * 0.1);
    s.v.push_back(-i * 0.2);
  }
  io::Meta sm;
  auto sb = io::parse_snapshot(io::snapshot_csv(s, {{"L", "4"}}), "mem", &sm);
  CHECK(sb.t == 500);
  CHECK(sb.u == s.u);
  CHECK(sb.v == s.v);
  CHECK(sm.at("L") == "4");
}

TEST_CASE("key=value config") {
  auto kv = io::parse_key_values("# comment\nL = 300\nN=1024\n\nsnapshot_times=1, 2,3\nfoo=bar\n", "cfg");
  SimConfig c;
  auto unknown = io::apply_sim_config(kv, c);
  CHECK(c.L == 300);
  CHECK(c.N == 1024);
  CHECK(c.snapshot_times == std::vector<double>{1, 2, 3});
  REQUIRE(unknown.size() == 1);
  CHECK(unknown[0] == "foo");
  CHECK_THROWS_AS(io::parse_key_values("novalue\n", "cfg"), Error);
  auto back = io::sim_config_meta(c);
  SimConfig d;
  io::apply_sim_config(back, d);
  CHECK(io::sim_config_meta(d) == back);
}

TEST_CASE("periodic snapshot sampling") {
  FieldSnapshot s;
  int N = 256;
  double L = 20;
  for (int j = 0; j < N; ++j) {
    double x = -L + 2 * L * j / N;
    s.x.push_back(x);
    s.u.push_back(std::exp(-x * x / 4));
  }
  for (int j = 0; j < N; j += 17) CHECK(sample_snapshot(s, s.x[j]) == s.u[j]);
  for (double x : {-3.3, 0.01, 7.77}) CHECK(std::abs(sample_snapshot(s, x) - std::exp(-x * x / 4)) < 1e-7);
  // wraps around the box
  CHECK(std::abs(sample_snapshot(s, L - 1e-3) - sample_snapshot(s, -L - 1e-3)) < 1e-12);
}

TEST_CASE("identical simulation and asymptote give zero gaps") {
  std::vector<CompareSlice> slices;
  for (double t : {200.0, 500.0}) {
    CompareSlice sl;
    sl.sim.t = t;
    int N = 4096;
    double L = 2000;
    for (int j = 0; j < N; ++j) {
      double x = -L + 2 * L * j / N;
      sl.sim.x.push_back(x);
      sl.sim.u.push_back(std::cos(x) * std::exp(-x / 1000));
    }
    for (int j = 0; j < N; ++j) {
      double x = sl.sim.x[j];
      if (x < 0) continue;
      double z = x / t;
      Sector sec = z >= 2 ? Sector::I : z >= 1.2 ? Sector::II : std::abs(x - t) <= 2 * std::cbrt(t) ? Sector::III
                                                   : z > 1 ? Sector::II : z > 0.6 ? Sector::IV : Sector::V;
      sl.asym.push_back({x, t, sl.sim.u[j], sec, false});
    }
    slices.push_back(sl);
  }
  auto rep = compare_slices(slices);
  CHECK(rep.windows.size() == 10);
  for (auto& w : rep.windows) {
    CHECK(w.points > 0);
    CHECK(w.abs_linf == 0.0);
    CHECK(w.abs_l2 == 0.0);
    CHECK(w.rel_l2 == 0.0);
  }
  auto js = compare_json(rep);
  CHECK(js.find("\"abs_linf\"") != std::string::npos);
  CHECK(!compare_csv(rep).empty());
}
