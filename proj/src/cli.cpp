#include "talpiot/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "talpiot/version.hpp"

namespace talpiot::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string resolve_data_path(const std::string& given, const std::string& fallback_name) {
    if (!given.empty()) return given;
    if (const char* dir = std::getenv(kDataDirEnvVar))
        return (fs::path(dir) / fallback_name).string();
    throw Error("no path given and " + std::string(kDataDirEnvVar) + " is not set (expected " +
                fallback_name + ")");
}

void list_problems(const std::vector<std::string>& problems, std::ostream& err) {
    for (const auto& p : problems) err << "error: " << p << "\n";
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

json estimate_to_json(const PosteriorEstimate& est) {
    json j;
    j["scenario_id"] = est.scenario_id;
    j["mean"] = est.mean;
    j["std"] = est.std_dev;
    j["q05"] = est.q05;
    j["q50"] = est.q50;
    j["q95"] = est.q95;
    j["beta_names_mean"] = est.beta_names_mean;
    j["beta_names_std"] = est.beta_names_std;
    j["replicate_values"] = est.replicate_values;
    j["zero_hit_replicates"] = est.zero_hit_replicates;
    j["roster_overflow_draws"] = est.roster_overflow_draws;
    j["total_draws"] = est.total_draws;
    return j;
}

void print_summary(const PosteriorEstimate& est, const AlphaEstimate& alpha, std::ostream& out) {
    out << "scenario:        " << est.scenario_id << "\n";
    out << "seed:            " << est.master_seed << "\n";
    out << "alpha:           " << alpha.alpha << "  (candidates: " << alpha.n_candidates << ")\n";
    out << "beta_names:      " << est.beta_names_mean << " +/- " << est.beta_names_std
        << "  (across replicates)\n";
    out << "P(J|T) mean:     " << est.mean << "\n";
    out << "P(J|T) std:      " << est.std_dev << "\n";
    out << "P(J|T) quantiles: 5% " << est.q05 << "   50% " << est.q50 << "   95% " << est.q95
        << "\n";
    out << "replicates:      " << est.replicate_values.size() << ", draws: " << est.total_draws
        << "\n";
    if (est.roster_overflow_draws > 0)
        out << "note: roster overflowed the tomb slots in " << est.roster_overflow_draws
            << " draws (members dropped lowest-probability-first)\n";
}

struct LoadedInputs {
    Onomasticon ono;
    Scenario scenario;
    std::string ono_path;
    std::string scenario_path;
    std::string digest;
};

LoadedInputs load_inputs(const std::string& scenario_path, const std::string& ono_path,
                         std::int64_t male_pop, std::int64_t female_pop) {
    LoadedInputs in{
        Onomasticon::load_csv(resolve_data_path(ono_path, "onomasticon.csv"), male_pop, female_pop),
        load_scenario(resolve_data_path(scenario_path, "scenarios/baseline.json")),
        resolve_data_path(ono_path, "onomasticon.csv"),
        resolve_data_path(scenario_path, "scenarios/baseline.json"),
        "",
    };
    in.digest = file_digest(in.ono_path);
    return in;
}

}  // namespace

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for digest");
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a64_hex(buf.str());
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        LoadedInputs in = load_inputs(opt.scenario_path, opt.onomasticon_path,
                                      opt.male_population, opt.female_population);
        if (opt.batches) in.scenario.batches = *opt.batches;
        if (opt.batch_size) in.scenario.batch_size = *opt.batch_size;
        if (opt.replicates) in.scenario.replicates = *opt.replicates;

        const std::vector<std::string> problems = validate_scenario(in.scenario, in.ono);
        if (!problems.empty()) {
            list_problems(problems, err);
            return kExitValidation;
        }

        const ObservedData observed = ObservedData::talpiot(in.ono);
        const AlphaEstimate alpha = compute_alpha(in.ono);
        const PosteriorEstimate est =
            estimate_posterior(in.scenario, in.ono, observed, opt.seed, opt.threads);

        if (opt.dump_draws_path) {
            // audit trail: batch 0 of each ensemble under the first
            // replicate's beta seed, exactly as the estimator saw them
            const TombSampler sampler(in.scenario, in.ono);
            RngStream replicate0 = replicate_stream(opt.seed, 0);
            const std::uint64_t beta_seed = replicate0.next_u64();
            std::ofstream dump(*opt.dump_draws_path);
            if (!dump) throw Error("cannot write '" + *opt.dump_draws_path + "'");
            write_draw_dump_header(dump);
            write_draw_dump(dump, sampler.sample_batch(Hypothesis::NotJ, beta_seed, 0), in.ono);
            write_draw_dump(dump, sampler.sample_batch(Hypothesis::J, beta_seed, 0), in.ono);
        }

        json record;
        record["tool"] = {{"name", kToolName}, {"version", kVersion}};
        record["master_seed"] = opt.seed;
        record["onomasticon"] = {{"path", in.ono_path},
                                 {"digest", in.digest},
                                 {"male_population", in.ono.male_population()},
                                 {"female_population", in.ono.female_population()}};
        record["scenario"] = scenario_to_json(in.scenario);
        record["alpha"] = {{"n_candidates", alpha.n_candidates}, {"alpha", alpha.alpha}};
        record["posterior"] = estimate_to_json(est);
        const std::string record_digest = fnv1a64_hex(record.dump());
        record["created_utc"] = utc_now();

        fs::create_directories(opt.output_dir);
        const fs::path record_path = fs::path(opt.output_dir) / ("run_" + record_digest + ".json");
        // content-addressed and append-only: an identical rerun leaves the
        // original record (and its timestamp) in place
        if (!fs::exists(record_path)) {
            std::ofstream file(record_path);
            if (!file) throw Error("cannot write '" + record_path.string() + "'");
            file << record.dump(2) << "\n";
        }

        if (opt.format == "json") {
            out << record.dump(2) << "\n";
        } else if (opt.format == "csv") {
            out << "scenario_id,seed,alpha,beta_names_mean,beta_names_std,mean,std,q05,q50,q95,"
                   "zero_hit_replicates,roster_overflow_draws\n";
            out << csv_quote(est.scenario_id) << "," << est.master_seed << "," << alpha.alpha
                << "," << est.beta_names_mean << "," << est.beta_names_std << "," << est.mean
                << "," << est.std_dev << "," << est.q05 << "," << est.q50 << "," << est.q95 << ","
                << est.zero_hit_replicates << "," << est.roster_overflow_draws << "\n";
        } else {
            print_summary(est, alpha, out);
            out << "record:          " << record_path.string() << "\n";
        }
        if (est.zero_hit_replicates > 0) {
            err << "WARNING: " << est.zero_hit_replicates
                << " replicate(s) recorded zero hits in an ensemble; the half-count rule was "
                   "applied and the estimate should be treated as an unreliable upper bound\n";
            if (opt.strict) return kExitFlagged;
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        list_problems(e.problems(), err);
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

nlohmann::json load_run_record(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open run record '" + path + "'");
    json j;
    in >> j;
    j.erase("created_utc");
    return j;
}

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        LoadedInputs in = load_inputs(opt.scenario_path, opt.onomasticon_path,
                                      opt.male_population, opt.female_population);
        const SweepGrid grid = SweepGrid::load(opt.grid_path);
        const ObservedData observed = ObservedData::talpiot(in.ono);
        const std::vector<SweepRow> rows =
            sweep(in.scenario, grid, in.ono, observed, opt.seed, opt.threads);

        std::ofstream csv(opt.output_path);
        if (!csv) throw Error("cannot write '" + opt.output_path + "'");
        csv << "variant,scenario_id,mean,std,q05,q50,q95,beta_names_mean,beta_names_std,"
               "zero_hit_replicates,roster_overflow_draws,error\n";
        std::size_t ok = 0;
        for (const SweepRow& row : rows) {
            csv << csv_quote(row.variant) << ",";
            if (row.estimate) {
                const PosteriorEstimate& e = *row.estimate;
                csv << csv_quote(e.scenario_id) << "," << e.mean << "," << e.std_dev << ","
                    << e.q05 << "," << e.q50 << "," << e.q95 << "," << e.beta_names_mean << ","
                    << e.beta_names_std << "," << e.zero_hit_replicates << ","
                    << e.roster_overflow_draws << ",";
                ++ok;
            } else {
                csv << ",,,,,,,,,";
            }
            csv << csv_quote(row.error) << "\n";
        }
        out << "sweep: " << ok << "/" << rows.size() << " points succeeded, table written to "
            << opt.output_path << "\n";
        for (const SweepRow& row : rows)
            if (!row.error.empty()) err << "point '" << row.variant << "': " << row.error << "\n";
        return ok > 0 ? kExitOk : kExitValidation;
    } catch (const ValidationError& e) {
        list_problems(e.problems(), err);
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

namespace {

std::vector<RRFactor> load_factors(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open factors file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("factors file '" + path + "': " + e.what());
    }
    if (!j.is_array()) throw Error("factors file must contain a JSON array");
    std::vector<RRFactor> factors;
    for (const json& fj : j) {
        if (!fj.is_object()) throw Error("each factor must be an object");
        for (const auto& [key, value] : fj.items()) {
            (void)value;
            if (key != "label" && key != "value" && key != "correction")
                throw Error("factor: unknown key '" + key + "'");
        }
        RRFactor f;
        f.label = fj.at("label").get<std::string>();
        f.value = Rational::parse(fj.at("value").get<std::string>());
        const json& corr = fj.at("correction");
        if (!corr.is_array() || corr.size() != 2)
            throw Error("factor '" + f.label + "': correction must be [lo, hi]");
        f.correction.lo = Rational::parse(corr[0].get<std::string>());
        f.correction.hi = Rational::parse(corr[1].get<std::string>());
        std::vector<std::string> problems = validate_factor(f);
        if (!problems.empty()) throw ValidationError(std::move(problems));
        factors.push_back(std::move(f));
    }
    return factors;
}

}  // namespace

int cmd_audit_rr(const AuditOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        if (!(opt.base_rr > 0.0)) {
            err << "error: base RR must be positive\n";
            return kExitValidation;
        }
        RRValue rr;
        rr.base = opt.base_rr;
        rr.factors = opt.factors_path ? load_factors(*opt.factors_path) : builtin_corrections();

        out << "base RR: " << rr.base << "\n\n";
        out << "factor corrections:\n";
        for (const RRFactor& f : rr.factors) {
            out << "  " << f.label << "\n";
            out << "    applied value: " << f.value.to_string() << "   belongs in: ["
                << f.correction.lo.to_string() << ", " << f.correction.hi.to_string() << "]\n";
        }
        const RationalInterval ratio = correction_ratio(rr.factors);
        const Interval corrected = corrected_rr(rr);
        out << "\ncombined multiplier: [" << ratio.lo.to_string() << ", " << ratio.hi.to_string()
            << "] = [" << ratio.lo.to_double() << ", " << ratio.hi.to_double() << "]\n";
        out << "corrected RR: [" << corrected.lo << ", " << corrected.hi << "]\n";
        return kExitOk;
    } catch (const ValidationError& e) {
        list_problems(e.problems(), err);
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

int cmd_oracle(const OracleOptions& opt, std::ostream& out, std::ostream& err) {
    try {
        LoadedInputs in = load_inputs(opt.scenario_path, opt.onomasticon_path,
                                      opt.male_population, opt.female_population);
        const ObservedData observed = ObservedData::talpiot(in.ono);

        const std::uint64_t states = enumeration_state_count(in.scenario, in.ono);
        if (states > opt.max_states) {
            err << "error: enumeration state space " << states << " exceeds cap "
                << opt.max_states << "\n";
            return kExitValidation;
        }
        const double exact = enumerate_beta_exact(in.scenario, in.ono, observed, opt.max_states);
        out << "states enumerated: " << states << "\n";
        out << "exact beta_names:  " << exact << "\n";

        if (opt.seed) {
            Scenario mc = in.scenario;
            if (opt.draws)
                mc.batches = std::max<std::int64_t>(
                    1, (*opt.draws + mc.batch_size - 1) / mc.batch_size);
            const BetaEstimate be = estimate_beta_names(mc, in.ono, observed, *opt.seed);
            const double z =
                be.std_error > 0.0 ? (be.beta_names - exact) / be.std_error : 0.0;
            out << "monte carlo beta:  " << be.beta_names << " +/- " << be.std_error << "  ("
                << be.draws_notj << " draws per ensemble, seed " << *opt.seed << ")\n";
            out << "z-score:           " << z << "\n";
            if (be.flagged())
                err << "WARNING: zero-hit ensemble encountered; half-count rule applied\n";
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        list_problems(e.problems(), err);
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace talpiot::cli
