#pragma once

// Run configuration files, on-disk formats and the simulate / sweep /
// diagnose commands behind the `voigt` executable.
//
// Exit codes: 0 success, 1 a sweep verdict failed or a run failed for a
// reason other than blow-up, 2 bad configuration or input file, 3 blow-up.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "voigt/harness.hpp"

namespace voigt {

inline constexpr const char* kToolVersion = "voigt2d 0.1.0";

enum class ExitCode : int { ok = 0, failed = 1, config = 2, blow_up = 3 };

enum class ReferenceMode { same_grid, refined };

struct SweepSection {
  std::vector<double> alphas;
  Regime regime = Regime::smooth_s_ge_3;
  ReferenceMode reference = ReferenceMode::same_grid;
  int refine_factor = 2;  // used when reference = refined
  double s = 3.0;
  AlphaFamily family = ExactFamily{};
  double cutoff_constant = 1.0;
  double slope_tolerance = 0.15;
};

struct OutputSection {
  std::filesystem::path directory = ".";
  bool csv = true;
  bool snapshots = false;
};

/// Parsed configuration file. Sections: [grid] [time] [model] [init]
/// [sweep] [output]; see configs/ for annotated examples.
struct RunConfig {
  int size = 0;
  std::optional<int> dealias_cutoff;
  double t_end = 0.0;
  std::optional<double> dt;  // fixed step; otherwise CFL with `cfl`
  double cfl = 0.5;
  double record_every = 0.0;
  std::optional<double> snapshot_every;
  std::optional<double> alpha;  // [model]; required by simulate only
  DataRecipe recipe;
  std::optional<SweepSection> sweep;
  OutputSection output;

  GridSpec grid() const;
  /// Throws ConfigError without a [model] section.
  SolverConfig solver_config() const;
  /// Throws ConfigError when there is no [sweep] section or the time grid
  /// does not divide t_end.
  SweepPlan sweep_plan() const;
};

/// Strict parser: unknown sections or keys, keys that do not apply to the
/// chosen [init] kind, malformed numbers and missing required keys throw
/// ConfigError naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical INI text of the effective configuration, defaults included.
std::string canonical_config(const RunConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

/// "# "-prefixed lines: tool version, config hash and the canonical config.
std::string provenance_header(const RunConfig& config);

struct SnapshotData {
  std::uint32_t size = 0;
  double time = 0.0;
  double alpha = 0.0;
  std::vector<double> values;  // row-major, x index fastest

  bool operator==(const SnapshotData&) const = default;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

SnapshotData snapshot_data(const Snapshot& snap, double alpha);
SpectralField snapshot_field(const SnapshotData& data);

/// Little-endian "VFLD" layout. Readers throw FormatError on a bad magic,
/// version, grid size or file length.
std::string encode_snapshot(const SnapshotData& data);
SnapshotData decode_snapshot(const std::string& bytes);
void write_snapshot(const std::filesystem::path& path, const SnapshotData& data);
SnapshotData read_snapshot(const std::filesystem::path& path);

/// Shortest round-trip decimal form.
std::string format_double(double v);

std::string diagnostics_csv(const TrajectoryRecord& record, const std::string& header);
std::string errors_csv(const ConvergenceReport& report, const std::string& header);
std::string galerkin_csv(const ConvergenceReport& report, const std::string& header);
std::string summary_text(const ConvergenceReport& report, const std::string& header);

struct DiagnoseOptions {
  std::vector<double> sobolev;    // ||u||_{s,2}
  std::vector<double> lp;         // ||omega||_p
  std::vector<double> gagliardo;  // gagliardo_ratio(omega, p)
  std::vector<double> cz;         // cz_ratio(omega, p)
};

/// Synthetic power-law check of fit_rate; returns the largest slope error.
double fit_self_test(std::ostream& out);

int cmd_simulate(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::filesystem::path& config_path, int jobs, std::ostream& out,
              std::ostream& err);
int cmd_sweep_self_test(std::ostream& out);
int cmd_diagnose(const std::filesystem::path& snapshot_path, const DiagnoseOptions& options,
                 std::ostream& out, std::ostream& err);

}  // namespace voigt
