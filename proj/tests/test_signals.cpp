#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hes/mesh.hpp"
#include "hes/signal.hpp"

using namespace hes;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::filesystem::path dir = std::filesystem::path(HES_BINARY_DIR) / "tmp";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / name).string();
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("load_signal_csv reads a minimal two-row file") {
  const auto path = write_temp("mini.csv", "hour,$/MWh\n0,30\n1,50\n");
  const Signal s = load_signal_csv(path, "$/MWh");
  REQUIRE(s.samples.size() == 2);
  REQUIRE(s.samples[0] == std::pair<long, double>{0, 30.0});
  REQUIRE(s.samples[1] == std::pair<long, double>{1, 50.0});
  REQUIRE(s.unit == "$/MWh");
  REQUIRE(s.period_hours == 2.0);
}

TEST_CASE("load_signal_csv rejects non-monotone hours with the line number") {
  const auto path = write_temp("dup.csv", "hour,value\n1,30\n1,40\n");
  REQUIRE_THROWS_WITH(load_signal_csv(path, ""),
                      ContainsSubstring("non-monotone hour at line 3"));
}

TEST_CASE("load_signal_csv rejects a mismatched unit annotation") {
  const auto path = write_temp("unit.csv", "hour,$/kg\n0,1\n");
  REQUIRE_THROWS_WITH(load_signal_csv(path, "$/MWh"), ContainsSubstring("$/kg"));
}

TEST_CASE("load_signal_csv flags bad numerics and missing commas") {
  REQUIRE_THROWS_WITH(load_signal_csv(write_temp("bad1.csv", "hour,value\n0;30\n"), ""),
                      ContainsSubstring("line 2"));
  REQUIRE_THROWS_WITH(load_signal_csv(write_temp("bad2.csv", "hour,value\n0,nanx\n"), ""),
                      ContainsSubstring("line 2"));
  REQUIRE_THROWS_AS(load_signal_csv(write_temp("empty.csv", ""), ""), ParseError);
  REQUIRE_THROWS_AS(load_signal_csv("/nonexistent/nope.csv", ""), IoError);
}

TEST_CASE("an hourly year-long file yields period 8766") {
  std::string body = "hour,$/MWh\n";
  for (long h = 0; h < 8766; ++h) body += std::to_string(h) + ",30\n";
  const Signal s = load_signal_csv(write_temp("year.csv", body), "$/MWh");
  REQUIRE(s.samples.size() == 8766);
  REQUIRE(s.period_hours == 8766.0);
}

TEST_CASE("periodic_extend repeats modularly") {
  std::vector<std::pair<long, double>> samples;
  for (long h = 0; h < 24; ++h) samples.emplace_back(h, static_cast<double>(h * h % 17));
  const Signal day = make_signal("day", "", samples, 24.0);

  SECTION("n=1 is the identity") {
    const Signal same = periodic_extend(day, 1);
    REQUIRE(same.samples == day.samples);
    REQUIRE(same.period_hours == day.period_hours);
  }
  SECTION("value(30) = value(6) after doubling") {
    const Signal two = periodic_extend(day, 2);
    REQUIRE(two.period_hours == 48.0);
    REQUIRE(two.value_at(30.0) == day.value_at(6.0));
    for (long h = 0; h < 48; ++h)
      REQUIRE(two.value_at(static_cast<double>(h)) ==
              day.value_at(static_cast<double>(h % 24)));
  }
  SECTION("a year extended 30x spans 262980 hours") {
    Signal year = day;
    year.period_hours = 8766.0;
    const Signal long_run = periodic_extend(year, 30);
    REQUIRE(long_run.period_hours == 262980.0);
  }
  SECTION("n=0 is rejected") { REQUIRE_THROWS_AS(periodic_extend(day, 0), HesError); }
}

TEST_CASE("turbine power curve: cubic region, saturation, cut-out") {
  TurbineSpec t;  // defaults mirror a 2.8 MW turbine with D=125, c_p=0.55
  REQUIRE(turbine_power(8.0, t) == Approx(2.1167).epsilon(1e-3));
  REQUIRE(turbine_power(12.0, t) == 2.8);
  REQUIRE(turbine_power(26.0, t) == 0.0);
  REQUIRE(turbine_power(25.0, t) == 2.8);  // still the clamped value at cut-out
  REQUIRE(turbine_power(0.0, t) == 0.0);
  REQUIRE_THROWS_AS(turbine_power(-1.0, t), HesError);
}

TEST_CASE("turbine power is monotone below rating and zero above cut-out") {
  TurbineSpec t;
  double prev = 0.0;
  for (double v = 0.0; v <= 12.0; v += 0.1) {
    const double p = turbine_power(v, t);
    REQUIRE(p >= prev);
    prev = p;
  }
  for (double v = 25.01; v < 40.0; v += 0.7) REQUIRE(turbine_power(v, t) == 0.0);
}

TEST_CASE("wind availability caps the farm at nominal capacity") {
  TurbineSpec t;
  t.count = 71;
  const Signal v = make_signal("wind", "m/s", {{0, 12.0}, {1, 4.0}}, 2.0);
  const Signal avail = wind_speed_to_availability(v, t, 200.0);
  REQUIRE(avail.unit == "MW");
  REQUIRE(avail.samples[0].second == Approx(198.8));  // 71 x 2.8, under the cap
  REQUIRE(avail.samples[1].second == Approx(71.0 * turbine_power(4.0, t)));
  const Signal capped = wind_speed_to_availability(v, t, 150.0);
  REQUIRE(capped.samples[0].second == 150.0);
}

TEST_CASE("resample_to_mesh holds the last sample") {
  const Mesh mesh = build_mesh(0.0, 24.0, 1.0);
  SECTION("hourly onto hourly is the identity") {
    std::vector<std::pair<long, double>> samples;
    for (long h = 0; h <= 24; ++h) samples.emplace_back(h, std::sin(double(h)));
    const Signal s = make_signal("s", "", samples, 25.0);
    const auto vals = resample_to_mesh(s, mesh);
    REQUIRE(vals.size() == 25);
    for (long h = 0; h <= 24; ++h) REQUIRE(vals[size_t(h)] == samples[size_t(h)].second);
  }
  SECTION("a sparse signal holds each value until the next sample") {
    const Signal s = make_signal("monthly", "", {{0, 5.0}, {10, 7.0}}, 30.0);
    const auto vals = resample_to_mesh(s, mesh);
    for (long h = 0; h < 10; ++h) REQUIRE(vals[size_t(h)] == 5.0);
    for (long h = 10; h <= 24; ++h) REQUIRE(vals[size_t(h)] == 7.0);
  }
  SECTION("insufficient span is a coverage error") {
    const Signal s = make_signal("short", "", {{0, 1.0}}, 10.0);
    REQUIRE_THROWS_WITH(resample_to_mesh(s, mesh), ContainsSubstring("does not cover"));
  }
  SECTION("a constant signal resamples to a constant") {
    const Signal s = make_signal("const", "", {{0, 3.25}}, 100.0);
    for (double v : resample_to_mesh(s, mesh)) REQUIRE(v == 3.25);
  }
}

TEST_CASE("build_mesh validates its arguments") {
  const Mesh m = build_mesh(0.0, 24.0, 1.0);
  REQUIRE(m.n_nodes == 25);
  REQUIRE(m.n_intervals() == 24);
  REQUIRE(build_mesh(0.0, 262980.0, 1.0).n_nodes == 262981);
  REQUIRE_THROWS_AS(build_mesh(0.0, 10.0, 3.0), HesError);
  REQUIRE_THROWS_AS(build_mesh(5.0, 5.0, 1.0), HesError);
  REQUIRE_THROWS_AS(build_mesh(0.0, 5.0, -1.0), HesError);
}

TEST_CASE("make_signal rejects malformed sample lists") {
  REQUIRE_THROWS_AS(make_signal("s", "", {{0, 1.0}, {0, 2.0}}), HesError);
  REQUIRE_THROWS_AS(make_signal("s", "", {{-1, 1.0}}), HesError);
  REQUIRE_THROWS_AS(make_signal("s", "", {{0, std::nan("")}}), HesError);
  REQUIRE_THROWS_AS(make_signal("s", "", {{0, 1.0}, {10, 2.0}}, 5.0), HesError);
}
