#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "talpiot/estimator.hpp"
#include "talpiot/onomasticon.hpp"
#include "talpiot/rr_audit.hpp"

// Command implementations behind the talpiot binary. Kept as library
// functions so the test suites can run them in-process.
namespace talpiot::cli {

// Exit codes: 0 success, 1 validation error, 2 statistical flag under --strict.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitFlagged = 2;

// Fixed default seed; reproducibility first, never time-based.
inline constexpr std::uint64_t kDefaultSeed = 42;

// Directory consulted for default data paths.
inline constexpr const char* kDataDirEnvVar = "TALPIOT_DATA_DIR";

std::string fnv1a64_hex(std::string_view bytes);
std::string file_digest(const std::string& path);  // fnv1a64 of the file bytes

struct RunOptions {
    std::string scenario_path;
    std::string onomasticon_path;
    std::string output_dir = "runs";
    std::uint64_t seed = kDefaultSeed;
    std::optional<std::int64_t> batches;
    std::optional<std::int64_t> batch_size;
    std::optional<std::int64_t> replicates;
    std::int64_t male_population = Onomasticon::kDefaultPopulation;
    std::int64_t female_population = Onomasticon::kDefaultPopulation;
    unsigned threads = 1;
    bool strict = false;
    std::string format = "text";  // text | json | csv
    std::optional<std::string> dump_draws_path;  // audit CSV of the first batches
};

// Validates, runs estimate_posterior, appends a RunRecord JSON file to
// output_dir (content-addressed name, stable across reruns), prints a
// summary. Returns an exit code.
int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err);

// The record as written, minus the volatile created_utc stamp.
nlohmann::json load_run_record(const std::string& path);

struct SweepOptions {
    std::string scenario_path;
    std::string grid_path;
    std::string onomasticon_path;
    std::string output_path = "sweep.csv";
    std::uint64_t seed = kDefaultSeed;
    std::int64_t male_population = Onomasticon::kDefaultPopulation;
    std::int64_t female_population = Onomasticon::kDefaultPopulation;
    unsigned threads = 1;
};

// One CSV row per grid point; per-point failures are recorded in the row.
// Exit 0 if at least one point succeeded.
int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err);

struct AuditOptions {
    double base_rr = 0.0;
    std::optional<std::string> factors_path;  // built-in corrections when absent
};

int cmd_audit_rr(const AuditOptions& opt, std::ostream& out, std::ostream& err);

struct OracleOptions {
    std::string scenario_path;
    std::string onomasticon_path;
    std::int64_t male_population = Onomasticon::kDefaultPopulation;
    std::int64_t female_population = Onomasticon::kDefaultPopulation;
    std::optional<std::uint64_t> seed;   // when set, adds the Monte Carlo comparison
    std::optional<std::int64_t> draws;   // per-ensemble draws for the comparison
    std::uint64_t max_states = kDefaultEnumerationCap;
};

// Prints the exact enumerated beta; with a seed, also the Monte Carlo
// estimate and its z-score against the exact value.
int cmd_oracle(const OracleOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace talpiot::cli
