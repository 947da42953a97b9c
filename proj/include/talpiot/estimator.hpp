#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "talpiot/domain.hpp"
#include "talpiot/onomasticon.hpp"
#include "talpiot/sampler.hpp"
#include "talpiot/surprisingness.hpp"

namespace talpiot {

// Prior odds against J: of the n candidates named "Jesus son of Joseph",
// all but one are not Jesus of Nazareth.
struct AlphaEstimate {
    std::int64_t n_candidates = 1;
    double alpha = 0.0;
};

AlphaEstimate compute_alpha(std::int64_t n_jesus_son_of_joseph);
// n from the onomasticon's expected count of men named after the
// stipulated "Jesus son of Joseph" inscription.
AlphaEstimate compute_alpha(const Onomasticon& ono);

// P(J|T) = 1 / (1 + alpha * beta). alpha >= 0, beta > 0.
double posterior_probability(double alpha, double beta);

struct BetaEstimate {
    std::uint64_t hits_notj = 0, draws_notj = 0;
    std::uint64_t hits_j = 0, draws_j = 0;
    double beta_names = 1.0;  // hit-rate(notJ) / hit-rate(J)
    double std_error = 0.0;   // binomial delta method
    bool zero_hit_j = false;     // half-count rule applied; treat as unreliable
    bool zero_hit_notj = false;
    double observed_score = 0.0;
    SampleDiagnostics diagnostics;

    bool flagged() const { return zero_hit_j || zero_hit_notj; }
};

// Pure arithmetic core: rates, ratio, and delta-method error from raw hit
// counts, with the half-count continuity rule for zero hits.
BetaEstimate finalize_beta(std::uint64_t hits_notj, std::uint64_t draws_notj,
                           std::uint64_t hits_j, std::uint64_t draws_j);

// Runs scenario.batches x scenario.batch_size draws per hypothesis and
// tabulates hits against the observed tomb's score.
BetaEstimate estimate_beta_names(const Scenario& s, const Onomasticon& ono,
                                 const ObservedData& observed, std::uint64_t master_seed);

struct RhoDraw {
    double rho_son = 1.0;
    double rho_tomb = 1.0;
};

// posterior(alpha, beta_names / (rho_son * rho_tomb)); the rho factors
// scale P(T|J) down and hence beta up. A zero rho returns the limit 0.
double replicate_posterior(double alpha, double beta_names, const RhoDraw& rho);

struct ReplicateResult {
    double posterior = 0.0;
    double beta_names = 1.0;
    RhoDraw rho;
    bool flagged = false;
    SampleDiagnostics diagnostics;
};

// One replicate: re-estimates beta_names on fresh batches seeded from the
// stream, draws rho from the scenario's distributions (1 when a factor is
// off), and combines.
ReplicateResult run_replicate(const Scenario& s, const Onomasticon& ono,
                              const ObservedData& observed, double alpha, RngStream& rng);

// The stream replicate r of a run consumes; exposed so audit dumps can
// reproduce the exact batches an estimate saw.
RngStream replicate_stream(std::uint64_t master_seed, std::uint64_t replicate_index);

struct PosteriorEstimate {
    std::string scenario_id;
    std::uint64_t master_seed = 0;
    double alpha_used = 0.0;
    std::vector<double> replicate_values;
    double mean = 0.0;
    double std_dev = 0.0;
    double q05 = 0.0, q50 = 0.0, q95 = 0.0;
    double beta_names_mean = 0.0;
    double beta_names_std = 0.0;
    std::uint64_t zero_hit_replicates = 0;
    std::uint64_t roster_overflow_draws = 0;
    std::uint64_t total_draws = 0;
};

// scenario.replicates independent replicates; deterministic for a given
// (scenario, master_seed) under any thread count.
PosteriorEstimate estimate_posterior(const Scenario& s, const Onomasticon& ono,
                                     const ObservedData& observed, std::uint64_t master_seed,
                                     unsigned threads = 1);

// Exact beta by exhaustive enumeration of free-slot configurations with
// roster inclusion marginalized analytically. Feasible for toy
// onomasticons; the default cap refuses larger state spaces.
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

std::uint64_t enumeration_state_count(const Scenario& s, const Onomasticon& ono);
double enumerate_beta_exact(const Scenario& s, const Onomasticon& ono,
                            const ObservedData& observed,
                            std::uint64_t max_states = kDefaultEnumerationCap);

// A sweep axis assigns each value in turn to the scenario-JSON location
// named by a JSON pointer (e.g. "/measure", "/rho_son_distribution/high").
struct SweepGrid {
    struct Axis {
        std::string pointer;
        std::vector<nlohmann::json> values;
    };
    std::vector<Axis> axes;

    static SweepGrid from_json(const nlohmann::json& j);
    static SweepGrid load(const std::string& path);
};

struct SweepRow {
    std::string variant;  // "pointer=value" pairs, comma separated
    std::optional<PosteriorEstimate> estimate;
    std::string error;  // nonempty when the point failed
};

// Cartesian product of the axes, every point run with the same master
// seed (paired seeds across points).
std::vector<SweepRow> sweep(const Scenario& base, const SweepGrid& grid, const Onomasticon& ono,
                            const ObservedData& observed, std::uint64_t master_seed,
                            unsigned threads = 1);

}  // namespace talpiot
