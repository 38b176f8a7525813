#include "ggd/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "ggd/errors.hpp"
#include "ggd/sampling.hpp"

namespace ggd {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (n < 1) throw DomainError("ExperimentConfig: n must be >= 1");
  if (iterations < 1) throw DomainError("ExperimentConfig: iterations must be >= 1");
  if (series_truncation < 1) throw DomainError("ExperimentConfig: series truncation must be >= 1");
  if (sir_ratio < 1) throw DomainError("ExperimentConfig: sir ratio must be >= 1");
  if (report_every < 1) throw DomainError("ExperimentConfig: report interval must be >= 1");
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string trace_file_name(const ExperimentConfig& cfg, const std::string& tag) {
  const auto& t = cfg.truth;
  const auto& i = cfg.init;
  return std::to_string(cfg.n) + "[" + format_double(t.alpha()) + "," + format_double(t.beta()) +
         "," + format_double(t.gamma()) + "]" + format_double(i.alpha()) + "," +
         format_double(i.beta()) + "," + format_double(i.gamma()) + "[" +
         std::to_string(cfg.iterations) + "]" + tag + ".csv";
}

namespace {

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish_write(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

double parse_double(std::string_view field, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": cannot parse '" +
                             std::string(field) + "' as a number");
  }
  return v;
}

}  // namespace

void emit_csv(const IterationTrace& trace, const fs::path& path) {
  auto out = open_for_write(path);
  for (std::size_t i = 0; i < trace.points.size(); ++i) {
    const auto& p = trace.points[i];
    if (i > 0) out << '\n';
    out << format_double(p.alpha()) << ',' << format_double(p.beta()) << ','
        << format_double(p.gamma());
  }
  finish_write(out, path);
}

std::vector<ParamTriple> parse_trace_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<ParamTriple> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<double, 3> v;
    std::size_t start = 0;
    for (int k = 0; k < 3; ++k) {
      const auto comma = line.find(',', start);
      const bool last = (k == 2);
      if (last != (comma == std::string::npos)) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": expected three comma-separated values");
      }
      const auto end = last ? line.size() : comma;
      v[k] = parse_double(std::string_view(line).substr(start, end - start), path, line_no);
      start = end + 1;
    }
    points.emplace_back(v[0], v[1], v[2]);
  }
  return points;
}

void emit_plot_data(std::span<const IterationTrace> traces, const fs::path& path) {
  auto out = open_for_write(path);
  out << "algorithm,iteration,parameter,value\n";
  for (const auto& trace : traces) {
    const char* name = algorithm_name(trace.algorithm);
    for (std::size_t t = 0; t < trace.points.size(); ++t) {
      const auto& p = trace.points[t];
      out << name << ',' << t << ",alpha," << format_double(p.alpha()) << '\n';
      out << name << ',' << t << ",beta," << format_double(p.beta()) << '\n';
      out << name << ',' << t << ",gamma," << format_double(p.gamma()) << '\n';
    }
  }
  finish_write(out, path);
}

Sample read_sample_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file " + path.string());
  std::vector<double> x;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    x.push_back(parse_double(line, path, line_no));
  }
  return Sample(std::move(x));
}

std::size_t count_reversals(std::span<const double> values, std::size_t from) {
  std::size_t count = 0;
  int prev_sign = 0;
  for (std::size_t i = from; i + 1 < values.size(); ++i) {
    const double d = values[i + 1] - values[i];
    const int sign = (d > 0.0) - (d < 0.0);
    if (sign == 0) continue;
    if (prev_sign != 0 && sign != prev_sign) ++count;
    prev_sign = sign;
  }
  return count;
}

namespace {

std::vector<double> coordinate(const IterationTrace& t, int which) {
  std::vector<double> v;
  v.reserve(t.points.size());
  for (const auto& p : t.points) {
    v.push_back(which == 0 ? p.alpha() : which == 1 ? p.beta() : p.gamma());
  }
  return v;
}

std::string first_within(const IterationTrace& t, const ParamTriple& oracle, double tol) {
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    if (distance(t.points[i], oracle) <= tol) return std::to_string(i);
  }
  return "never";
}

std::string render_report(std::span<const IterationTrace* const> traces,
                          const std::optional<ParamTriple>& oracle, std::size_t every) {
  std::ostringstream os;
  os << "# estimator comparison\n";
  if (oracle) {
    os << "oracle_mle alpha=" << format_double(oracle->alpha())
       << " beta=" << format_double(oracle->beta()) << " gamma=" << format_double(oracle->gamma())
       << "\n";
  } else {
    os << "oracle_mle unavailable\n";
  }

  std::size_t rows = traces.empty() ? 0 : traces.front()->points.size();
  bool mismatch = false;
  for (const auto* t : traces) {
    if (t->points.size() != rows) mismatch = true;
    rows = std::min(rows, t->points.size());
  }
  if (mismatch) {
    os << "note: trace lengths differ (";
    for (std::size_t i = 0; i < traces.size(); ++i) {
      os << (i ? ", " : "") << algorithm_name(traces[i]->algorithm) << " "
         << traces[i]->points.size();
    }
    os << " points); the table covers the common prefix of " << rows << " points\n";
  }

  os << "\n" << std::setw(6) << "iter";
  for (const auto* t : traces) {
    const std::string name = algorithm_name(t->algorithm);
    for (const char* col : {"alpha", "beta", "gamma", "dist"}) {
      os << " " << std::setw(14) << (name + "." + col);
    }
  }
  os << "\n";
  os << std::fixed << std::setprecision(7);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!(i == 0 || i == 1 || i % every == 0)) continue;
    os << std::setw(6) << i;
    for (const auto* t : traces) {
      const auto& p = t->points[i];
      os << " " << std::setw(14) << p.alpha() << " " << std::setw(14) << p.beta() << " "
         << std::setw(14) << p.gamma() << " " << std::setw(14)
         << (oracle ? distance(p, *oracle) : std::nan(""));
    }
    os << "\n";
  }
  os.unsetf(std::ios::floatfield);

  os << "\n# stability: direction reversals per coordinate (all steps / from iteration 1)\n";
  for (const auto* t : traces) {
    os << "stability " << algorithm_name(t->algorithm);
    for (int c = 0; c < 3; ++c) {
      const auto v = coordinate(*t, c);
      os << " " << (c == 0 ? "alpha" : c == 1 ? "beta" : "gamma") << "=" << count_reversals(v)
         << "/" << count_reversals(v, 1);
    }
    os << "\n";
  }
  if (oracle) {
    os << "\n# convergence speed: first iteration within a sup-norm distance of the oracle\n";
    for (const auto* t : traces) {
      os << "speed " << algorithm_name(t->algorithm);
      for (double tol : {1e-1, 1e-2, 1e-4, 1e-6}) {
        os << " within_" << format_double(tol) << "=" << first_within(*t, *oracle, tol);
      }
      os << "\n";
    }
    os << "\n# accuracy: sup-norm distance of the last iterate to the oracle\n";
    for (const auto* t : traces) {
      os << "accuracy " << algorithm_name(t->algorithm) << " iteration=" << t->iterations()
         << " distance=" << format_double(distance(t->last(), *oracle)) << "\n";
    }
  }
  bool any_halt = false;
  for (const auto* t : traces) {
    if (!t->halt) continue;
    if (!any_halt) os << "\n# halted runs\n";
    any_halt = true;
    os << "halt " << algorithm_name(t->algorithm) << " iteration=" << t->halt->iteration
       << " kind=" << t->halt->kind << " message=\"" << t->halt->message << "\"\n";
  }
  return os.str();
}

}  // namespace

std::string compare_report(const IterationTrace& self_trace, const IterationTrace& newton_trace,
                           const std::optional<ParamTriple>& oracle, std::size_t every) {
  if (every < 1) throw DomainError("compare_report: every must be >= 1");
  const std::array<const IterationTrace*, 2> traces = {&self_trace, &newton_trace};
  return render_report(traces, oracle, every);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Sample sample = cfg.data_file ? read_sample_file(*cfg.data_file)
                                : sample_ggd(SirConfig{cfg.truth, cfg.n, cfg.sir_ratio, cfg.seed});

  const StoppingRule stop{cfg.iterations, 0.0};
  SelfOptions opts;
  opts.series.truncation_terms = cfg.series_truncation;
  opts.bounds.mode = cfg.mode;
  opts.indicator_compat = cfg.indicator_compat;

  const bool want_self = cfg.algorithms != AlgoSelection::Newton;
  const bool want_newton = cfg.algorithms != AlgoSelection::Self;

  // The runs share only the immutable sample.
  std::future<IterationTrace> self_future;
  std::future<IterationTrace> newton_future;
  if (want_self) {
    self_future = std::async(std::launch::async,
                             [&] { return run_self(sample, cfg.init, stop, opts); });
  }
  if (want_newton) {
    newton_future = std::async(std::launch::async, [&] {
      return run_newton(sample, cfg.init, stop, opts.series);
    });
  }

  ExperimentResult result{sample, std::nullopt, std::nullopt, std::nullopt, {}, {}, {}};
  try {
    result.oracle = mle_oracle(sample);
  } catch (const NumericError& e) {
    result.oracle_error = e.what();
  }
  if (want_self) result.self = self_future.get();
  if (want_newton) result.newton = newton_future.get();

  fs::create_directories(cfg.output_dir);
  std::vector<IterationTrace> traces;
  if (result.self) {
    const auto path = cfg.output_dir / trace_file_name(cfg, "self");
    emit_csv(*result.self, path);
    result.files.push_back(path);
    traces.push_back(*result.self);
  }
  if (result.newton) {
    const auto path = cfg.output_dir / trace_file_name(cfg, "newton");
    emit_csv(*result.newton, path);
    result.files.push_back(path);
    traces.push_back(*result.newton);
  }
  const auto plot_path = cfg.output_dir / "plotdata.csv";
  emit_plot_data(traces, plot_path);
  result.files.push_back(plot_path);

  std::vector<const IterationTrace*> ptrs;
  for (const auto& t : traces) ptrs.push_back(&t);
  std::string header = "sample_size " + std::to_string(sample.size()) + "\n";
  if (!result.oracle_error.empty()) header += "oracle_error \"" + result.oracle_error + "\"\n";
  result.report = header + render_report(ptrs, result.oracle, cfg.report_every);
  const auto report_path = cfg.output_dir / "report.txt";
  auto out = open_for_write(report_path);
  out << result.report;
  finish_write(out, report_path);
  result.files.push_back(report_path);
  return result;
}

}  // namespace ggd
