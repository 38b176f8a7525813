#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <regex>
#include <sstream>

#include "ggd/estimators.hpp"
#include "ggd/harness.hpp"

using namespace ggd;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ggd_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  return out;
}

IterationTrace make_trace(Algorithm algo, std::size_t points, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  IterationTrace t;
  t.algorithm = algo;
  for (std::size_t i = 0; i < points; ++i) {
    t.points.emplace_back(u(eng), u(eng), u(eng));
    t.loglik.push_back(-static_cast<double>(points - i));
  }
  return t;
}

ExperimentConfig small_config(const fs::path& dir) {
  ExperimentConfig cfg;
  cfg.n = 200;
  cfg.iterations = 30;
  cfg.output_dir = dir;
  return cfg;
}

}  // namespace

TEST_CASE("trace CSV format", "[harness]") {
  const auto dir = fresh_dir("csv");
  IterationTrace one;
  one.points = {ParamTriple(3, 2, 3)};
  one.loglik = {0.0};
  emit_csv(one, dir / "one.csv");
  CHECK(slurp(dir / "one.csv") == "3,2,3");

  const auto t = make_trace(Algorithm::SeLF, 201, 1);
  emit_csv(t, dir / "t.csv");
  const auto text = slurp(dir / "t.csv");
  CHECK(lines_of(text).size() == 201);
  CHECK(text.back() != '\n');

  const auto back = parse_trace_csv(dir / "t.csv");
  REQUIRE(back.size() == t.points.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].alpha() == t.points[i].alpha());
    CHECK(back[i].beta() == t.points[i].beta());
    CHECK(back[i].gamma() == t.points[i].gamma());
  }
}

TEST_CASE("number formatting round-trips", "[harness]") {
  std::mt19937_64 eng(2);
  std::uniform_real_distribution<double> e(-300.0, 300.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::pow(10.0, e(eng)) * (i % 2 ? 1.0 : -1.0);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(3.0) == "3");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("trace file naming", "[harness]") {
  ExperimentConfig cfg;
  CHECK(trace_file_name(cfg, "self") == "1000[2,3,2]3,2,3[200]self.csv");
  cfg.truth = ParamTriple(2.5, 3, 0.75);
  cfg.iterations = 7;
  CHECK(trace_file_name(cfg, "newton") == "1000[2.5,3,0.75]3,2,3[7]newton.csv");
}

TEST_CASE("plot data", "[harness]") {
  const auto dir = fresh_dir("plot");
  const std::vector<IterationTrace> traces = {make_trace(Algorithm::SeLF, 201, 3),
                                              make_trace(Algorithm::Newton, 201, 4)};
  emit_plot_data(traces, dir / "plot.csv");
  const auto rows = lines_of(slurp(dir / "plot.csv"));
  REQUIRE(rows.size() == 1207);
  CHECK(rows[0] == "algorithm,iteration,parameter,value");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto f = split_commas(rows[r]);
    REQUIRE(f.size() == 4);
    const auto& trace = f[0] == "self" ? traces[0] : traces[1];
    const auto& p = trace.points.at(std::stoul(f[1]));
    const double expected = f[2] == "alpha" ? p.alpha() : f[2] == "beta" ? p.beta() : p.gamma();
    CHECK(std::stod(f[3]) == expected);
  }
}

TEST_CASE("comparison report", "[harness]") {
  const ParamTriple oracle(2.2, 3.3, 1.9);
  SECTION("identical traces have identical distances") {
    auto a = make_trace(Algorithm::SeLF, 21, 5);
    auto b = a;
    b.algorithm = Algorithm::Newton;
    const auto report = compare_report(a, b, oracle, 10);
    const std::regex acc(R"(accuracy (\w+) iteration=(\d+) distance=(\S+))");
    std::vector<double> d;
    for (std::sregex_iterator it(report.begin(), report.end(), acc), end; it != end; ++it) {
      d.push_back(std::stod((*it)[3]));
    }
    REQUIRE(d.size() == 2);
    CHECK(d[0] == d[1]);
  }
  SECTION("row selection") {
    const auto a = make_trace(Algorithm::SeLF, 201, 6);
    const auto b = make_trace(Algorithm::Newton, 201, 7);
    const auto report = compare_report(a, b, oracle, 200);
    std::vector<int> rows;
    for (const auto& line : lines_of(report)) {
      std::istringstream is(line);
      int it = -1;
      if (is >> it && line.find_first_not_of(" 0123456789") != std::string::npos && it >= 0) rows.push_back(it);
    }
    CHECK(rows == std::vector<int>{0, 1, 200});
    CHECK(report.find("trace lengths differ") == std::string::npos);
  }
  SECTION("length mismatch is flagged") {
    const auto a = make_trace(Algorithm::SeLF, 50, 8);
    const auto b = make_trace(Algorithm::Newton, 12, 9);
    const auto report = compare_report(a, b, oracle, 10);
    CHECK(report.find("trace lengths differ") != std::string::npos);
  }
}

TEST_CASE("sample file reader", "[harness]") {
  const auto dir = fresh_dir("data");
  {
    std::ofstream out(dir / "x.txt");
    out << "# header\n0.5\n\n1.25  # trailing\n  3e-2\r\n";
  }
  const auto s = read_sample_file(dir / "x.txt");
  REQUIRE(s.size() == 3);
  CHECK(s.observations()[0] == 0.5);
  CHECK(s.observations()[1] == 1.25);
  CHECK(s.observations()[2] == 0.03);
  {
    std::ofstream out(dir / "bad.txt");
    out << "1.0\nabc\n";
  }
  CHECK_THROWS(read_sample_file(dir / "bad.txt"));
  CHECK_THROWS(read_sample_file(dir / "missing.txt"));
}

TEST_CASE("direction reversal count", "[harness]") {
  const std::vector<double> v = {1, 2, 3, 2, 2, 1, 4, 5};
  CHECK(count_reversals(v) == 2);
  CHECK(count_reversals(v, 3) == 1);
  CHECK(count_reversals(std::vector<double>{3, 2, 1}) == 0);
  CHECK(count_reversals(std::vector<double>{}) == 0);
}

TEST_CASE("experiment runs", "[harness]") {
  SECTION("one iteration gives two rows") {
    const auto dir = fresh_dir("one_iter");
    auto cfg = small_config(dir);
    cfg.iterations = 1;
    const auto r = run_experiment(cfg);
    REQUIRE(r.self);
    REQUIRE(r.newton);
    CHECK(r.self->points.size() == 2);
    CHECK(parse_trace_csv(dir / trace_file_name(cfg, "self")).size() == 2);
    CHECK(parse_trace_csv(dir / trace_file_name(cfg, "newton")).size() == 2);
  }
  SECTION("single-algorithm selection") {
    const auto dir = fresh_dir("self_only");
    auto cfg = small_config(dir);
    cfg.algorithms = AlgoSelection::Self;
    const auto r = run_experiment(cfg);
    CHECK(r.self);
    CHECK_FALSE(r.newton);
    CHECK_FALSE(fs::exists(dir / trace_file_name(cfg, "newton")));
  }
  SECTION("reruns are byte-identical") {
    const auto d1 = fresh_dir("rerun1");
    const auto d2 = fresh_dir("rerun2");
    const auto r1 = run_experiment(small_config(d1));
    const auto r2 = run_experiment(small_config(d2));
    REQUIRE(r1.files.size() == 4);
    for (std::size_t i = 0; i < r1.files.size(); ++i) {
      CHECK(r1.files[i].filename() == r2.files[i].filename());
      CHECK(slurp(r1.files[i]) == slurp(r2.files[i]));
    }
  }
  SECTION("data file input") {
    const auto dir = fresh_dir("data_run");
    {
      std::ofstream out(dir / "obs.txt");
      for (double x : {0.2, 0.35, 0.4, 0.5, 0.55, 0.6, 0.7, 0.8, 0.95, 1.1}) out << x << "\n";
    }
    auto cfg = small_config(dir);
    cfg.data_file = dir / "obs.txt";
    const auto r = run_experiment(cfg);
    CHECK(r.sample.size() == 10);
    CHECK(r.report.find("sample_size 10") != std::string::npos);
  }
  SECTION("a halting estimator does not stop the other") {
    const auto dir = fresh_dir("halt");
    auto cfg = small_config(dir);
    cfg.init = ParamTriple(10, 1, 1);
    const auto r = run_experiment(cfg);
    REQUIRE(r.newton);
    REQUIRE(r.self);
    CHECK(r.newton->halt);
    CHECK(r.report.find("halt newton") != std::string::npos);
    CHECK(r.self->points.size() == cfg.iterations + 1);
  }
}

TEST_CASE("default configuration outputs", "[harness][slow]") {
  const auto dir = fresh_dir("default");
  ExperimentConfig cfg;
  cfg.output_dir = dir;
  const auto r = run_experiment(cfg);
  const auto self_rows = parse_trace_csv(dir / trace_file_name(cfg, "self"));
  const auto newton_rows = parse_trace_csv(dir / trace_file_name(cfg, "newton"));
  CHECK(self_rows.size() == 201);
  CHECK(newton_rows.size() == 201);
  CHECK(lines_of(slurp(dir / "plotdata.csv")).size() == 1207);

  // The accuracy lines agree with distances recomputed from the CSVs.
  REQUIRE(r.oracle);
  const std::regex acc(R"(accuracy (\w+) iteration=(\d+) distance=(\S+))");
  int matched = 0;
  for (std::sregex_iterator it(r.report.begin(), r.report.end(), acc), end; it != end; ++it) {
    const auto& rows = (*it)[1] == "self" ? self_rows : newton_rows;
    CHECK(std::stoul((*it)[2]) == rows.size() - 1);
    CHECK(std::abs(std::stod((*it)[3]) - distance(rows.back(), *r.oracle)) <= 1e-12);
    ++matched;
  }
  CHECK(matched == 2);
  CHECK(slurp(dir / "report.txt") == r.report);
}

// Expected to fail: from the default start the alpha coordinate turns once
// (near iteration 3) because the coordinate updates are coupled.
TEST_CASE("persisted SeLF trace is monotone per coordinate from iteration 1", "[harness][!shouldfail]") {
  const auto dir = fresh_dir("monotone");
  ExperimentConfig cfg;
  cfg.output_dir = dir;
  cfg.algorithms = AlgoSelection::Self;
  run_experiment(cfg);
  const auto rows = parse_trace_csv(dir / trace_file_name(cfg, "self"));
  for (int c = 0; c < 3; ++c) {
    std::vector<double> v;
    for (const auto& p : rows) v.push_back(c == 0 ? p.alpha() : c == 1 ? p.beta() : p.gamma());
    INFO("coordinate " << c);
    CHECK(count_reversals(v, 1) == 0);
  }
}
