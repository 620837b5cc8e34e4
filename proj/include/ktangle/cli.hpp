#pragma once

// Command-line front end: channel and initial-state specs, parameter sweeps
// with CSV output, figure presets, a closed-form classification report, and
// the closed-form-vs-oracle verification driver.  Everything here works on
// streams so it can be exercised without a process boundary.

#include "ktangle/channels.hpp"
#include "ktangle/mat2.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace ktangle::cli {

enum class ChannelKind { AmplitudeDamping, Dephasing, PhaseFlip, Custom, FromUnitary };

const char* channel_name(ChannelKind kind);
ChannelKind channel_from_name(const std::string& name);

struct ChannelSpec {
  ChannelKind kind = ChannelKind::AmplitudeDamping;
  Mat2cd k0 = Mat2cd::Identity();  // Custom
  Mat2cd k1 = Mat2cd::Zero();
  Mat4cd unitary = Mat4cd::Identity();  // FromUnitary
};

/// Kraus pair for the spec; built-in families take the strength p, the
/// custom and unitary kinds ignore it.
KrausPair<double> make_channel(const ChannelSpec& spec, double p);

/// One sweep axis: count == 1 pins the value at start.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  double at(int i) const;
};

Grid fixed_grid(double value);

/// Complex literal in `re+imj` form, e.g. "0.5-0.5j", "1", "2j", "-j".
std::complex<double> parse_complex(std::string_view text);

/// Either a plain value ("0.4") or a grid "start:stop:count" ("0:1:50").
Grid parse_grid(const std::string& text);

/// 4 (respectively 16) comma-separated complex entries, row-major.
Mat2cd parse_mat2(const std::string& text);
Mat4cd parse_mat4(const std::string& text);

struct SweepConfig {
  ChannelSpec channel;
  Grid p{0.0, 1.0, 50};
  Grid rho_ee = fixed_grid(0.5);
  Grid e0sq = fixed_grid(0.4);
  double phi = 0.0;
  double tol = 1e-9;
  std::string out;  // empty: stdout
};

struct ClassifyConfig {
  ChannelSpec channel;
  double p = 0.0;
  double rho_ee = 0.5;
  double phi = 0.0;
  double e0sq = 0.4;
  double tol = 1e-9;
};

struct VerifyConfig {
  int n = 1000;
  std::uint64_t seed = 0;
  double tol = 0.0;  // 0: per-identity defaults
};

/// Grid configuration behind one of the nine published surface plots
/// (1-3 amplitude damping, 4-6 dephasing, 7-9 phase flip; the third preset of
/// each family sweeps e0sq at rho_ee = 1/2, the others sweep rho_ee over its
/// admissible interval at e0sq = 0.4).
SweepConfig figure_preset(int figure, int grid_points = 50);

std::string csv_header();

struct SweepStats {
  long rows = 0;
  long skipped = 0;  // infeasible (e0sq, rho_ee) combinations
};

/// Writes the CSV (header plus one row per feasible grid point, p outermost,
/// then rho_ee, then e0sq) and returns the row statistics.
SweepStats run_sweep(const SweepConfig& cfg, std::ostream& csv);

/// run_sweep plus output-file handling and a one-line summary on `log`.
/// Returns 0 on success, 2 on a usage error (e.g. unwritable path).
int cmd_sweep(const SweepConfig& cfg, std::ostream& log);

/// Full closed-form report for one (channel, initial state) point.
int cmd_classify(const ClassifyConfig& cfg, std::ostream& out);

/// Closed-form vs oracle differential suite on n seeded random instances,
/// including the 4-qubit correspondences.  Prints the worst residual per
/// identity; returns 0 when every residual is below its threshold, 1
/// otherwise.
int cmd_verify(const VerifyConfig& cfg, std::ostream& out);

// JSON configs use the same field names as the command-line flags; values
// already set by flags are meant to override the file, which the CLI layer
// arranges by applying the file first.
void apply_json(const std::string& path, SweepConfig& cfg);
void apply_json(const std::string& path, ClassifyConfig& cfg);
void apply_json(const std::string& path, VerifyConfig& cfg);

}  // namespace ktangle::cli
