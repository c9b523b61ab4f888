#pragma once

// Point evaluation and (p, mu) grid sweeps with CSV output.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqfi/pauli_channels.hpp"
#include "cqfi/probe_states.hpp"

namespace cqfi {

enum class Method { Sld, ClosedForm, Both };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

/// Inclusive, count-based grid: value_i = start + i (stop - start) / (count - 1).
struct Grid {
  double start = 0.0;
  double stop = 1.0;
  int count = 101;

  std::vector<double> values() const;
};

/// Parses "start:stop:count".
Grid parse_grid(std::string_view text);

/// Absolute closed-vs-SLD disagreement that aborts an evaluation.
inline constexpr double kMethodDiscrepancyLimit = 1e-6;
/// Slack below zero tolerated on an emitted QFI.
inline constexpr double kNegativeQfiSlack = 1e-10;

struct SweepRecord {
  ChannelKind channel = ChannelKind::Depolarizing;
  ProbeFamily family = ProbeFamily::PhiPlus;
  int n = 2;
  double r = 1.0;  // 1 for the pure Bell-type families
  double theta = 0.0;
  double phi = 0.0;
  double p = 0.0;
  double mu = 0.0;
  Param param = Param::Theta;
  Method method = Method::Sld;  // Sld or ClosedForm, never Both
  double qfi = 0.0;
};

struct SweepConfig {
  ProbeSpec probe;
  ChannelKind channel = ChannelKind::Depolarizing;
  Grid p_grid;
  Grid mu_grid;
  std::vector<Param> params{Param::Theta, Param::Phi};
  Method method = Method::Both;
  std::string output_path;
  int jobs = 0;  // 0: one worker per hardware thread
};

/// Throws std::invalid_argument: grid counts >= 2, grid values in [0, 1], params
/// non-empty, closed forms requested only where they exist.
void validate(const SweepConfig& config);

/// Both where closed forms exist, Sld otherwise.
Method default_method(const ProbeSpec& probe);

/// Throws std::invalid_argument with a hint towards --method sld when the closed
/// forms do not cover the probe.
void require_method_supported(const ProbeSpec& probe, Method method);

/// Result of one (probe, channel, param) evaluation.
struct PointEvaluation {
  std::vector<SweepRecord> records;   // sld first, then closed
  std::optional<double> discrepancy;  // |closed - sld| when both ran
  bool closed_fell_back = false;      // closed block degenerate; closed row carries the SLD value
};

/// Evaluates the requested method(s). Throws numerical_error when the two paths
/// disagree by more than kMethodDiscrepancyLimit or a value leaves [-1e-10, 4N].
PointEvaluation evaluate_point(const ProbeSpec& probe, const ChannelSpec& channel, Param param, Method method);

struct PointTask {
  ProbeSpec probe;
  ChannelSpec channel;
  std::vector<Param> params;
  Method method = Method::Sld;
};

/// Evaluates the tasks on `jobs` worker threads (0: hardware concurrency) and
/// returns their rows concatenated in task order. The first failure is rethrown.
std::vector<SweepRecord> evaluate_tasks(std::span<const PointTask> tasks, int jobs);

/// All rows of a sweep in canonical order: p outer, mu inner, then param, then method.
std::vector<SweepRecord> sweep_records(const SweepConfig& config);

inline constexpr std::string_view kCsvHeader = "channel,family,n,r,theta,phi,p,mu,param,method,qfi";

/// One CSV line (no newline); reals with 17 significant digits.
std::string format_csv_row(const SweepRecord& record);
void write_csv(std::ostream& out, std::span<const SweepRecord> records);

/// Writes the CSV to config.output_path; throws io_error if it cannot be written.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

/// Writes `contents` to `path`, throwing io_error on failure.
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace cqfi
