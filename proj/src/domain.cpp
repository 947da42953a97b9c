#include "talpiot/domain.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace talpiot {

namespace {

// Short form of Mary in the bundled dataset (Aramaic "Marya").
constexpr std::string_view kMariaForm = "Maria";
constexpr std::string_view kMariamenouForm = "Mariamenou";
constexpr std::string_view kYosehForm = "Yoseh";

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

const char* to_string(Hypothesis h) {
    return h == Hypothesis::J ? "J" : "notJ";
}

const std::array<Tomb::StipulatedInscription, 2>& Tomb::stipulated() {
    static const std::array<StipulatedInscription, 2> insc = {{
        {kJesusLemma, kJosephLemma},
        {kJudahLemma, kJesusLemma},
    }};
    return insc;
}

std::vector<std::string> validate_tomb(const Tomb& tomb, const Onomasticon& ono) {
    std::vector<std::string> problems;
    auto check_slot = [&](const Inscription& ins, Gender expected, const char* where) {
        if (ins.gender != expected)
            problems.push_back(std::string(where) + ": slot gender does not match its position");
        if (ins.name != kOtherForm && ono.form(ins.name).gender != expected)
            problems.push_back(std::string(where) + ": form '" + ono.form_name(ins.name) +
                               "' has the wrong gender for this slot");
        if (ins.patronym && *ins.patronym != kOtherForm &&
            ono.form(*ins.patronym).gender != Gender::male)
            problems.push_back(std::string(where) + ": patronym '" + ono.form_name(*ins.patronym) +
                               "' is not a male form");
    };
    for (int i = 0; i < Tomb::kFemaleSlots; ++i)
        check_slot(tomb.females[static_cast<std::size_t>(i)], Gender::female,
                   ("female slot " + std::to_string(i)).c_str());
    for (int i = 0; i < Tomb::kMaleSlots; ++i)
        check_slot(tomb.males[static_cast<std::size_t>(i)], Gender::male,
                   ("male slot " + std::to_string(i)).c_str());
    return problems;
}

ObservedData ObservedData::talpiot(const Onomasticon& ono) {
    ObservedData obs;
    obs.tomb.females[0] = {ono.form_id(kMariamenouForm), std::nullopt, Gender::female};
    obs.tomb.females[1] = {ono.form_id(kMariaForm), std::nullopt, Gender::female};
    obs.tomb.males[0] = {ono.form_id(kYosehForm), std::nullopt, Gender::male};
    // The fourth inscribed ossuary (Matya) is not engaged by the model;
    // it enters as an unlisted name so it never contributes to hits.
    obs.tomb.males[1] = {kOtherForm, std::nullopt, Gender::male};
    for (auto& p : validate_tomb(obs.tomb, ono))
        throw Error("observed tomb: " + p);
    return obs;
}

Measure measure_from_string(std::string_view name) {
    if (name == "M1") return Measure::M1;
    if (name == "M2") return Measure::M2;
    if (name == "M3") return Measure::M3;
    if (name == "M4") return Measure::M4;
    if (name == "M5") return Measure::M5;
    if (name == "M6") return Measure::M6;
    throw Error("unknown measure '" + std::string(name) + "' (expected M1..M6)");
}

const char* to_string(Measure m) {
    switch (m) {
        case Measure::M1: return "M1";
        case Measure::M2: return "M2";
        case Measure::M3: return "M3";
        case Measure::M4: return "M4";
        case Measure::M5: return "M5";
        case Measure::M6: return "M6";
    }
    return "M?";
}

Scenario default_scenario() {
    Scenario s;
    s.id = "baseline";
    // Mother plus the four named brothers; Magdalene is present as a
    // switchable entry but excluded by default. Inclusion probabilities
    // are user-facing knobs, not attested values.
    s.roster = {
        {std::string(kMotherRole), std::string(kMaryLemma), std::nullopt, 0.5},
        {"brother_yoseh", std::string(kJosephLemma), std::nullopt, 0.5},
        {"brother_yaakov", "Jacob", std::nullopt, 0.5},
        {"brother_shimon", "Simon", std::nullopt, 0.5},
        {"brother_yehuda", std::string(kJudahLemma), std::nullopt, 0.5},
        {std::string(kMagdaleneRole), std::string(kMaryLemma), std::nullopt, 0.0},
    };
    return s;
}

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> problems;
    if (s.id.empty()) problems.push_back("id must be nonempty");
    if (s.batch_size < 1) problems.push_back("batch_size must be >= 1");
    if (s.batches < 1) problems.push_back("batches must be >= 1");
    if (s.replicates < 2) problems.push_back("replicates must be >= 2");
    if (!(s.yoseh_patriarch_boost >= 0.0))
        problems.push_back("yoseh_patriarch_boost must be >= 0");
    auto check_rho = [&](const RhoDistribution& d, const char* name) {
        if (!(d.low >= 0.0 && d.high <= 1.0 && d.low <= d.high))
            problems.push_back(std::string(name) + " must satisfy 0 <= low <= high <= 1");
    };
    check_rho(s.rho_son_distribution, "rho_son_distribution");
    check_rho(s.rho_tomb_distribution, "rho_tomb_distribution");

    if (s.roster.size() > kMaxRosterSize)
        problems.push_back("roster has " + std::to_string(s.roster.size()) +
                           " members; at most " + std::to_string(kMaxRosterSize) + " supported");
    std::set<std::string> roles;
    for (const RosterMember& m : s.roster) {
        if (m.role.empty()) problems.push_back("roster member with empty role");
        if (m.lemma.empty()) problems.push_back("roster member '" + m.role + "': empty lemma");
        if (!(m.inclusion_probability >= 0.0 && m.inclusion_probability <= 1.0))
            problems.push_back("roster member '" + m.role + "': inclusion_probability " +
                               std::to_string(m.inclusion_probability) + " out of [0,1]");
        if (m.allowed_forms && m.allowed_forms->empty())
            problems.push_back("roster member '" + m.role +
                               "': allowed_forms must be nonempty (or \"any\")");
        if (!roles.insert(m.role).second)
            problems.push_back("duplicate roster role '" + m.role + "'");
    }
    if (s.magdalene_assumed &&
        std::none_of(s.roster.begin(), s.roster.end(),
                     [](const RosterMember& m) { return m.role == kMagdaleneRole; }))
        problems.push_back("magdalene_assumed requires a roster member with role 'magdalene'");
    return problems;
}

std::vector<std::string> validate_scenario(const Scenario& s, const Onomasticon& ono) {
    std::vector<std::string> problems = validate_scenario(s);
    for (const RosterMember& m : effective_roster(s)) {
        std::optional<LemmaId> lemma = ono.find_lemma(m.lemma, Gender::male);
        if (!lemma) lemma = ono.find_lemma(m.lemma, Gender::female);
        if (!lemma) {
            problems.push_back("roster member '" + m.role + "': lemma '" + m.lemma +
                               "' not in onomasticon");
            continue;
        }
        double mass = 0.0;
        if (m.allowed_forms) {
            std::set<std::string> seen;
            for (const std::string& form : *m.allowed_forms) {
                if (!seen.insert(form).second) {
                    problems.push_back("roster member '" + m.role + "': duplicate allowed form '" +
                                       form + "'");
                    continue;
                }
                auto id = ono.find_form(form);
                if (!id) {
                    problems.push_back("roster member '" + m.role + "': allowed form '" + form +
                                       "' not in onomasticon");
                } else if (ono.lemma_of(*id) != *lemma) {
                    problems.push_back("roster member '" + m.role + "': allowed form '" + form +
                                       "' does not belong to lemma '" + m.lemma + "'");
                } else {
                    mass += ono.form(*id).frequency;
                }
            }
        } else {
            mass = ono.lemma_frequency(*lemma);
        }
        if (m.inclusion_probability > 0.0 && !(mass > 0.0))
            problems.push_back("roster member '" + m.role +
                               "': allowed forms carry zero total frequency");
    }
    return problems;
}

std::vector<RosterMember> effective_roster(const Scenario& s) {
    std::vector<RosterMember> roster = s.roster;
    for (RosterMember& m : roster) {
        if (m.role == kMotherRole && !s.mother_any_mary_form && !m.allowed_forms)
            m.allowed_forms = std::vector<std::string>{std::string(kMariaForm)};
        if (m.role == kMagdaleneRole && s.magdalene_assumed) m.inclusion_probability = 1.0;
    }
    return roster;
}

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::set<std::string>& expected, const std::string& where) {
    std::vector<std::string> problems;
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (expected.count(key) == 0)
            problems.push_back(where + ": unknown key '" + key + "'");
    }
    for (const std::string& key : expected) {
        if (!j.contains(key)) problems.push_back(where + ": missing key '" + key + "'");
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
}

json member_to_json(const RosterMember& m) {
    json j;
    j["role"] = m.role;
    j["lemma"] = m.lemma;
    if (m.allowed_forms)
        j["allowed_forms"] = *m.allowed_forms;
    else
        j["allowed_forms"] = "any";
    j["inclusion_probability"] = m.inclusion_probability;
    return j;
}

RosterMember member_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw Error(where + ": roster member must be an object");
    require_keys(j, {"role", "lemma", "allowed_forms", "inclusion_probability"}, where);
    RosterMember m;
    m.role = j.at("role").get<std::string>();
    m.lemma = j.at("lemma").get<std::string>();
    const json& forms = j.at("allowed_forms");
    if (forms.is_string()) {
        if (forms.get<std::string>() != "any")
            throw Error(where + ": allowed_forms must be \"any\" or a list of forms");
        m.allowed_forms = std::nullopt;
    } else if (forms.is_array()) {
        m.allowed_forms = forms.get<std::vector<std::string>>();
    } else {
        throw Error(where + ": allowed_forms must be \"any\" or a list of forms");
    }
    m.inclusion_probability = j.at("inclusion_probability").get<double>();
    return m;
}

json rho_to_json(const RhoDistribution& d) {
    return json{{"low", d.low}, {"high", d.high}};
}

RhoDistribution rho_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw Error(where + ": expected an object with low/high");
    require_keys(j, {"low", "high"}, where);
    return RhoDistribution{j.at("low").get<double>(), j.at("high").get<double>()};
}

}  // namespace

nlohmann::json scenario_to_json(const Scenario& s) {
    json j;
    j["id"] = s.id;
    json roster = json::array();
    for (const RosterMember& m : s.roster) roster.push_back(member_to_json(m));
    j["roster"] = roster;
    j["mother_any_mary_form"] = s.mother_any_mary_form;
    j["apply_rho_son"] = s.apply_rho_son;
    j["apply_rho_tomb"] = s.apply_rho_tomb;
    j["rho_son_distribution"] = rho_to_json(s.rho_son_distribution);
    j["rho_tomb_distribution"] = rho_to_json(s.rho_tomb_distribution);
    j["magdalene_assumed"] = s.magdalene_assumed;
    j["yoseh_patriarch_boost"] = s.yoseh_patriarch_boost;
    j["measure"] = to_string(s.measure);
    j["batch_size"] = s.batch_size;
    j["batches"] = s.batches;
    j["replicates"] = s.replicates;
    return j;
}

Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error("scenario: expected a JSON object");
    require_keys(j,
                 {"id", "roster", "mother_any_mary_form", "apply_rho_son", "apply_rho_tomb",
                  "rho_son_distribution", "rho_tomb_distribution", "magdalene_assumed",
                  "yoseh_patriarch_boost", "measure", "batch_size", "batches", "replicates"},
                 "scenario");
    Scenario s;
    s.id = j.at("id").get<std::string>();
    if (!j.at("roster").is_array()) throw Error("scenario: roster must be an array");
    s.roster.clear();
    int idx = 0;
    for (const json& mj : j.at("roster")) {
        s.roster.push_back(member_from_json(mj, "roster[" + std::to_string(idx) + "]"));
        ++idx;
    }
    s.mother_any_mary_form = j.at("mother_any_mary_form").get<bool>();
    s.apply_rho_son = j.at("apply_rho_son").get<bool>();
    s.apply_rho_tomb = j.at("apply_rho_tomb").get<bool>();
    s.rho_son_distribution = rho_from_json(j.at("rho_son_distribution"), "rho_son_distribution");
    s.rho_tomb_distribution = rho_from_json(j.at("rho_tomb_distribution"), "rho_tomb_distribution");
    s.magdalene_assumed = j.at("magdalene_assumed").get<bool>();
    s.yoseh_patriarch_boost = j.at("yoseh_patriarch_boost").get<double>();
    s.measure = measure_from_string(j.at("measure").get<std::string>());
    s.batch_size = j.at("batch_size").get<std::int64_t>();
    s.batches = j.at("batches").get<std::int64_t>();
    s.replicates = j.at("replicates").get<std::int64_t>();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("scenario file '" + path + "': " + e.what());
    }
    return scenario_from_json(j);
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write scenario file '" + path + "'");
    out << scenario_to_json(s).dump(2) << "\n";
}

}  // namespace talpiot
