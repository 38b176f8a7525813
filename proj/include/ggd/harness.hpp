#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ggd/estimators.hpp"
#include "ggd/model.hpp"

namespace ggd {

enum class AlgoSelection { Self, Newton, Both };

struct ExperimentConfig {
  std::size_t n = 1000;
  ParamTriple truth{2.0, 3.0, 2.0};
  ParamTriple init{3.0, 2.0, 3.0};
  std::size_t iterations = 200;
  std::uint64_t seed = 1027;
  BoundMode mode = BoundMode::Correct;
  std::size_t series_truncation = 1000;
  std::size_t sir_ratio = 20;
  bool indicator_compat = false;
  AlgoSelection algorithms = AlgoSelection::Both;
  std::size_t report_every = 10;
  /// When set, observations are read from this file instead of simulated.
  std::optional<std::filesystem::path> data_file;
  std::filesystem::path output_dir = ".";

  void validate() const;
};

struct ExperimentResult {
  Sample sample;
  std::optional<IterationTrace> self;
  std::optional<IterationTrace> newton;
  std::optional<ParamTriple> oracle;
  std::string oracle_error;
  std::string report;
  std::vector<std::filesystem::path> files;
};

/// Builds the sample (simulated or read), runs the selected estimators from
/// the same start, computes the reference MLE, and writes the trace CSVs,
/// plotdata.csv and report.txt into cfg.output_dir. A halted estimator is
/// recorded in its trace and in the report; it never stops the other one.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// "<n>[a,b,g]<a0>,<b0>,<g0>[iters]<tag>.csv".
std::string trace_file_name(const ExperimentConfig& cfg, const std::string& tag);

/// One "alpha,beta,gamma" line per point, no header, no trailing newline.
void emit_csv(const IterationTrace& trace, const std::filesystem::path& path);
std::vector<ParamTriple> parse_trace_csv(const std::filesystem::path& path);

/// Long-format "algorithm,iteration,parameter,value" file with a header row.
void emit_plot_data(std::span<const IterationTrace> traces, const std::filesystem::path& path);

/// One positive real per line; blank lines and '#' comments are skipped.
Sample read_sample_file(const std::filesystem::path& path);

/// Number of direction changes in a sequence (zero steps are skipped),
/// counting step pairs that start at or after `from`.
std::size_t count_reversals(std::span<const double> values, std::size_t from = 0);

/// Text comparison of two traces run on the same sample: a table at
/// iterations 0, 1 and every multiple of `every`, each row with its distance
/// to the oracle, followed by stability, speed and accuracy summaries.
std::string compare_report(const IterationTrace& self_trace, const IterationTrace& newton_trace,
                           const std::optional<ParamTriple>& oracle, std::size_t every = 10);

}  // namespace ggd
