#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "epochbandit/harness.hpp"

namespace epochbandit {

// -- Instance files (JSON, schema version "1") -------------------------------

std::string instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const std::string& text);

void save_instance(const ProblemInstance& instance, const std::filesystem::path& path);
// Re-checks every chain invariant on load.
ProblemInstance load_instance(const std::filesystem::path& path);

// -- Run files ----------------------------------------------------------------

struct PolicySpec {
  PolicyId id = PolicyId::EpochUcb;
  PolicyParams params;
};

struct RunFile {
  ProblemInstance instance;
  std::vector<PolicySpec> policies;
  std::optional<long> epochs;
  std::optional<long> iterations;
  int replications = 1;
  std::uint64_t master_seed = 0;
  std::filesystem::path csv_dir = ".";
  bool svg = false;
};

RunFile parse_run_file(const std::filesystem::path& path);

// -- CSV emission -------------------------------------------------------------
//
// Doubles are printed with round-trip precision ("%.17g"), so identical runs
// produce byte-identical files.

void write_trace_csv(std::ostream& out, const std::string& instance_id,
                     const std::vector<RunTrace>& traces);

void write_aggregate_csv(std::ostream& out, const std::string& policy,
                         const AggregateCurve& curve);

void write_bound_curves_csv(std::ostream& out, const std::vector<BoundCurve>& curves);

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumSample>& samples);

std::string format_double(double v);

// -- Audit reports ------------------------------------------------------------

std::string audit_report_to_json(const AuditReport& inequalities, const FillAuditReport& fill);

// -- SVG line plots -----------------------------------------------------------

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band;  // optional half-width around y (stderr)
};

struct PlotOptions {
  std::string title;
  std::string x_label = "iterations";
  std::string y_label = "cumulative regret";
  bool log_x = false;
  int width = 720;
  int height = 480;
};

/// Self-contained SVG line plot: one polyline per series, mean +- band,
/// fixed minimal styling. Viewable in any browser.
std::string render_svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace epochbandit
