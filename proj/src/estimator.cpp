#include "talpiot/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <thread>

namespace talpiot {

namespace {

// Stream tag separating replicate substreams from everything else.
constexpr std::uint64_t kReplicateStreamTag = 0x7265706cu;  // "repl"

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

// Linear-interpolation quantile on a sorted copy.
double quantile(std::vector<double> sorted, double p) {
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

AlphaEstimate compute_alpha(std::int64_t n_jesus_son_of_joseph) {
    if (n_jesus_son_of_joseph < 1)
        throw Error("candidate count must be at least 1: the stipulated man exists");
    return {n_jesus_son_of_joseph, static_cast<double>(n_jesus_son_of_joseph - 1)};
}

AlphaEstimate compute_alpha(const Onomasticon& ono) {
    const auto& stipulated = Tomb::stipulated()[0];
    return compute_alpha(
        ono.expected_patronym_count(stipulated.name_lemma, stipulated.patronym_lemma));
}

double posterior_probability(double alpha, double beta) {
    if (!(alpha >= 0.0)) throw Error("alpha must be >= 0");
    if (!(beta > 0.0)) throw Error("beta must be > 0");
    return 1.0 / (1.0 + alpha * beta);
}

BetaEstimate finalize_beta(std::uint64_t hits_notj, std::uint64_t draws_notj,
                           std::uint64_t hits_j, std::uint64_t draws_j) {
    if (draws_notj == 0 || draws_j == 0) throw Error("beta estimate needs draws in both ensembles");
    if (hits_notj > draws_notj || hits_j > draws_j) throw Error("hit count exceeds draw count");
    BetaEstimate be;
    be.hits_notj = hits_notj;
    be.draws_notj = draws_notj;
    be.hits_j = hits_j;
    be.draws_j = draws_j;

    // Half-count continuity rule: a zero-hit ensemble would make the
    // ratio degenerate, so substitute half a hit and flag the estimate.
    double eff_notj = static_cast<double>(hits_notj);
    double eff_j = static_cast<double>(hits_j);
    if (hits_notj == 0) {
        eff_notj = 0.5;
        be.zero_hit_notj = true;
    }
    if (hits_j == 0) {
        eff_j = 0.5;
        be.zero_hit_j = true;
    }
    const double p_notj = eff_notj / static_cast<double>(draws_notj);
    const double p_j = eff_j / static_cast<double>(draws_j);
    be.beta_names = p_notj / p_j;

    const double var_log = (1.0 - p_notj) / (p_notj * static_cast<double>(draws_notj)) +
                           (1.0 - p_j) / (p_j * static_cast<double>(draws_j));
    be.std_error = be.beta_names * std::sqrt(std::max(0.0, var_log));
    return be;
}

BetaEstimate estimate_beta_names(const Scenario& s, const Onomasticon& ono,
                                 const ObservedData& observed, std::uint64_t master_seed) {
    const TombSampler sampler(s, ono);
    const Scorer scorer(effective_roster(s), ono);
    const double observed_score = scorer.score(observed.tomb, s.measure);

    SampleDiagnostics diag;
    std::uint64_t hits[2] = {0, 0};
    std::uint64_t draws[2] = {0, 0};
    const Hypothesis order[2] = {Hypothesis::NotJ, Hypothesis::J};
    for (int hi = 0; hi < 2; ++hi) {
        for (std::int64_t b = 0; b < s.batches; ++b) {
            const auto batch =
                sampler.sample_batch(order[hi], master_seed, static_cast<std::uint32_t>(b), &diag);
            for (const EnsembleDraw& d : batch)
                if (scorer.hit(d.tomb, observed_score, s.measure)) ++hits[hi];
            draws[hi] += batch.size();
        }
    }
    BetaEstimate be = finalize_beta(hits[0], draws[0], hits[1], draws[1]);
    be.observed_score = observed_score;
    be.diagnostics = diag;
    return be;
}

double replicate_posterior(double alpha, double beta_names, const RhoDraw& rho) {
    if (!(beta_names > 0.0)) throw Error("beta_names must be > 0");
    if (!(rho.rho_son >= 0.0 && rho.rho_son <= 1.0 && rho.rho_tomb >= 0.0 && rho.rho_tomb <= 1.0))
        throw Error("rho draws must lie in [0,1]");
    const double scale = rho.rho_son * rho.rho_tomb;
    // rho -> 0 sends beta to infinity; the posterior limit is 0 unless
    // alpha is 0, where it is identically 1.
    if (scale == 0.0) return alpha > 0.0 ? 0.0 : 1.0;
    return posterior_probability(alpha, beta_names / scale);
}

RngStream replicate_stream(std::uint64_t master_seed, std::uint64_t replicate_index) {
    return RngStream::derived(master_seed, {kReplicateStreamTag, replicate_index});
}

ReplicateResult run_replicate(const Scenario& s, const Onomasticon& ono,
                              const ObservedData& observed, double alpha, RngStream& rng) {
    const std::uint64_t beta_seed = rng.next_u64();
    const BetaEstimate be = estimate_beta_names(s, ono, observed, beta_seed);

    ReplicateResult r;
    r.beta_names = be.beta_names;
    r.flagged = be.flagged();
    r.diagnostics = be.diagnostics;
    if (s.apply_rho_son)
        r.rho.rho_son = rng.uniform(s.rho_son_distribution.low, s.rho_son_distribution.high);
    if (s.apply_rho_tomb)
        r.rho.rho_tomb = rng.uniform(s.rho_tomb_distribution.low, s.rho_tomb_distribution.high);
    r.posterior = replicate_posterior(alpha, be.beta_names, r.rho);
    return r;
}

PosteriorEstimate estimate_posterior(const Scenario& s, const Onomasticon& ono,
                                     const ObservedData& observed, std::uint64_t master_seed,
                                     unsigned threads) {
    std::vector<std::string> problems = validate_scenario(s, ono);
    if (!problems.empty()) throw ValidationError(std::move(problems));

    const double alpha = compute_alpha(ono).alpha;
    const std::size_t n = static_cast<std::size_t>(s.replicates);
    std::vector<ReplicateResult> results(n);

    const unsigned workers =
        std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    std::vector<std::exception_ptr> failures(workers);
    auto run_range = [&](std::size_t lo, std::size_t hi, unsigned worker) {
        try {
            for (std::size_t r = lo; r < hi; ++r) {
                RngStream rng = replicate_stream(master_seed, r);
                results[r] = run_replicate(s, ono, observed, alpha, rng);
            }
        } catch (...) {
            failures[worker] = std::current_exception();
        }
    };
    if (workers == 1) {
        run_range(0, n, 0);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t lo = std::min(n, static_cast<std::size_t>(w) * chunk);
            const std::size_t hi = std::min(n, lo + chunk);
            pool.emplace_back(run_range, lo, hi, w);
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    PosteriorEstimate est;
    est.scenario_id = s.id;
    est.master_seed = master_seed;
    est.alpha_used = alpha;
    est.replicate_values.reserve(n);
    std::vector<double> betas;
    betas.reserve(n);
    for (const ReplicateResult& r : results) {
        est.replicate_values.push_back(r.posterior);
        betas.push_back(r.beta_names);
        if (r.flagged) ++est.zero_hit_replicates;
        est.roster_overflow_draws += r.diagnostics.roster_overflow_draws;
        est.total_draws += r.diagnostics.draws;
    }
    double sum = 0.0;
    for (double v : est.replicate_values) sum += v;
    est.mean = sum / static_cast<double>(n);
    est.std_dev = sample_std(est.replicate_values, est.mean);

    std::vector<double> sorted = est.replicate_values;
    std::sort(sorted.begin(), sorted.end());
    est.q05 = quantile(sorted, 0.05);
    est.q50 = quantile(sorted, 0.50);
    est.q95 = quantile(sorted, 0.95);

    double beta_sum = 0.0;
    for (double b : betas) beta_sum += b;
    est.beta_names_mean = beta_sum / static_cast<double>(n);
    est.beta_names_std = sample_std(betas, est.beta_names_mean);
    return est;
}

namespace {

// All free-slot configurations under fixed per-slot distributions;
// accumulates the probability of scoring at least `threshold`.
double prob_score_at_least(const std::array<const WeightedFormTable*, 4>& slot_tables,
                           const Scorer& scorer, Measure m, double threshold,
                           const Onomasticon& ono) {
    auto options = [&](const WeightedFormTable& t) {
        std::vector<std::pair<FormId, double>> opts;
        for (FormId f : t.forms()) {
            const double p = t.probability_of(f);
            if (p > 0.0) opts.emplace_back(f, p);
        }
        const double other = t.probability_of(kOtherForm);
        if (other > 0.0) opts.emplace_back(kOtherForm, other);
        return opts;
    };
    const auto f0 = options(*slot_tables[0]);
    const auto f1 = options(*slot_tables[1]);
    const auto m0 = options(*slot_tables[2]);
    const auto m1 = options(*slot_tables[3]);

    Tomb tomb;
    tomb.females[0].gender = tomb.females[1].gender = Gender::female;
    tomb.males[0].gender = tomb.males[1].gender = Gender::male;

    double total = 0.0;
    for (const auto& [fa, pa] : f0) {
        tomb.females[0].name = fa;
        for (const auto& [fb, pb] : f1) {
            tomb.females[1].name = fb;
            for (const auto& [ma, pc] : m0) {
                tomb.males[0].name = ma;
                for (const auto& [mb, pd] : m1) {
                    tomb.males[1].name = mb;
                    if (scorer.hit(tomb, threshold, m)) total += pa * pb * pc * pd;
                }
            }
        }
    }
    (void)ono;
    return total;
}

}  // namespace

std::uint64_t enumeration_state_count(const Scenario& s, const Onomasticon& ono) {
    const long double nf = static_cast<long double>(ono.forms_of(Gender::female).size()) + 1.0L;
    const long double nm = static_cast<long double>(ono.forms_of(Gender::male).size()) + 1.0L;
    std::size_t members = 0;
    for (const RosterMember& m : effective_roster(s))
        if (m.inclusion_probability > 0.0) ++members;
    const long double states = nf * nf * nm * nm * std::pow(2.0L, static_cast<long double>(members));
    if (states > 1e18L) return UINT64_MAX;
    return static_cast<std::uint64_t>(states);
}

double enumerate_beta_exact(const Scenario& s, const Onomasticon& ono,
                            const ObservedData& observed, std::uint64_t max_states) {
    std::vector<std::string> problems = validate_scenario(s, ono);
    if (!problems.empty()) throw ValidationError(std::move(problems));
    const std::uint64_t states = enumeration_state_count(s, ono);
    if (states > max_states)
        throw Error("enumeration state space " + std::to_string(states) + " exceeds cap " +
                    std::to_string(max_states));

    const TombSampler sampler(s, ono);
    const Scorer scorer(effective_roster(s), ono);
    const double observed_score = scorer.score(observed.tomb, s.measure);

    const WeightedFormTable& female_free = sampler.female_free_table();
    const WeightedFormTable& male_free_j = sampler.male_free_table(Hypothesis::J);
    const WeightedFormTable& male_free_notj = sampler.male_free_table(Hypothesis::NotJ);

    const double p_notj = prob_score_at_least(
        {&female_free, &female_free, &male_free_notj, &male_free_notj}, scorer, s.measure,
        observed_score, ono);

    // J: marginalize roster inclusion exactly over all subsets.
    const auto& members = sampler.members();
    const std::size_t m = members.size();
    double p_j = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        double prob = 1.0;
        std::vector<int> realized;
        for (std::size_t i = 0; i < m; ++i) {
            const double p = members[i].inclusion_probability;
            if ((mask >> i) & 1u) {
                prob *= p;
                realized.push_back(static_cast<int>(i));
            } else {
                prob *= 1.0 - p;
            }
        }
        if (prob == 0.0) continue;

        const std::vector<int> placed_f = sampler.placed_members(realized, Gender::female);
        const std::vector<int> placed_m = sampler.placed_members(realized, Gender::male);

        std::array<const WeightedFormTable*, 4> tables = {&female_free, &female_free, &male_free_j,
                                                          &male_free_j};
        for (std::size_t i = 0; i < placed_f.size(); ++i)
            tables[i] = &members[static_cast<std::size_t>(placed_f[i])].forms;
        for (std::size_t i = 0; i < placed_m.size(); ++i)
            tables[2 + i] = &members[static_cast<std::size_t>(placed_m[i])].forms;

        p_j += prob * prob_score_at_least(tables, scorer, s.measure, observed_score, ono);
    }

    if (!(p_j > 0.0)) throw Error("observed data has zero probability under hypothesis J");
    return p_notj / p_j;
}

SweepGrid SweepGrid::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error("grid: expected an object mapping JSON pointers to value lists");
    SweepGrid grid;
    for (const auto& [key, values] : j.items()) {
        if (!values.is_array() || values.empty())
            throw Error("grid axis '" + key + "': expected a nonempty array of values");
        Axis axis;
        axis.pointer = key;
        for (const auto& v : values) axis.values.push_back(v);
        grid.axes.push_back(std::move(axis));
    }
    return grid;
}

SweepGrid SweepGrid::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open grid file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("grid file '" + path + "': " + e.what());
    }
    return from_json(j);
}

std::vector<SweepRow> sweep(const Scenario& base, const SweepGrid& grid, const Onomasticon& ono,
                            const ObservedData& observed, std::uint64_t master_seed,
                            unsigned threads) {
    if (grid.axes.empty()) throw Error("empty sweep grid");
    const nlohmann::json base_json = scenario_to_json(base);

    std::vector<std::string> problems;
    for (const auto& axis : grid.axes) {
        try {
            const nlohmann::json::json_pointer ptr(axis.pointer);
            if (!base_json.contains(ptr))
                problems.push_back("grid axis '" + axis.pointer +
                                   "' does not name a scenario field");
        } catch (const nlohmann::json::exception&) {
            problems.push_back("grid axis '" + axis.pointer + "' is not a valid JSON pointer");
        }
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));

    std::vector<SweepRow> rows;
    std::vector<std::size_t> odometer(grid.axes.size(), 0);
    while (true) {
        nlohmann::json point = base_json;
        std::string label;
        for (std::size_t a = 0; a < grid.axes.size(); ++a) {
            const auto& axis = grid.axes[a];
            const nlohmann::json& value = axis.values[odometer[a]];
            point[nlohmann::json::json_pointer(axis.pointer)] = value;
            if (!label.empty()) label += ",";
            label += axis.pointer + "=" + value.dump();
        }
        SweepRow row;
        row.variant = label;
        try {
            const Scenario sc = scenario_from_json(point);
            row.estimate = estimate_posterior(sc, ono, observed, master_seed, threads);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));

        // advance odometer, last axis fastest
        std::size_t a = grid.axes.size();
        while (a > 0) {
            --a;
            if (++odometer[a] < grid.axes[a].values.size()) break;
            odometer[a] = 0;
            if (a == 0) return rows;
        }
    }
}

}  // namespace talpiot
