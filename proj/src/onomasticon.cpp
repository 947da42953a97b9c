#include "talpiot/onomasticon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace talpiot {

namespace {

const std::string kOtherName = "Other";

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string lemma_key(std::string_view lemma, Gender g) {
    return std::string(g == Gender::male ? "M:" : "F:") + std::string(lemma);
}

// Small tolerance for decimal dust when frequencies are summed.
constexpr double kSumTolerance = 1e-9;

}  // namespace

const char* to_string(Gender g) {
    return g == Gender::male ? "male" : "female";
}

Gender gender_from_code(std::string_view code) {
    if (code == "M" || code == "m") return Gender::male;
    if (code == "F" || code == "f") return Gender::female;
    throw Error("unknown gender code '" + std::string(code) + "' (expected M or F)");
}

WeightedFormTable::WeightedFormTable(std::vector<FormId> forms, std::vector<double> weights,
                                     double other_weight)
    : forms_(std::move(forms)), other_weight_(other_weight) {
    if (forms_.size() != weights.size()) throw Error("weight table size mismatch");
    if (other_weight_ < 0.0) throw Error("negative residual weight");
    cumulative_.reserve(forms_.size());
    double acc = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw Error("negative sampling weight");
        acc += w;
        cumulative_.push_back(acc);
    }
    total_ = acc + other_weight_;
    if (total_ <= 0.0) throw Error("sampling table has zero total weight");
}

WeightedFormTable WeightedFormTable::for_gender(const Onomasticon& ono, Gender g,
                                                const LemmaBoost* boost) {
    const auto& ids = ono.forms_of(g);
    std::vector<double> weights;
    weights.reserve(ids.size());
    double listed = 0.0;
    for (FormId id : ids) {
        const NameForm& f = ono.form(id);
        double w = f.frequency;
        listed += f.frequency;
        if (boost != nullptr && f.lemma == boost->lemma) w *= boost->multiplier;
        weights.push_back(w);
    }
    double other = std::max(0.0, 1.0 - listed);
    return WeightedFormTable(ids, std::move(weights), other);
}

FormId WeightedFormTable::at(double u) const {
    const double x = u * total_;
    // linear scan; form lists are short
    for (std::size_t i = 0; i < cumulative_.size(); ++i) {
        if (x < cumulative_[i]) return forms_[i];
    }
    return kOtherForm;
}

double WeightedFormTable::probability_of(FormId form) const {
    if (form == kOtherForm) return other_weight_ / total_;
    double prev = 0.0;
    for (std::size_t i = 0; i < forms_.size(); ++i) {
        if (forms_[i] == form) return (cumulative_[i] - prev) / total_;
        prev = cumulative_[i];
    }
    return 0.0;
}

Onomasticon Onomasticon::from_entries(std::vector<NameForm> entries,
                                      std::int64_t male_population,
                                      std::int64_t female_population) {
    Onomasticon ono;
    ono.entries_ = std::move(entries);
    ono.male_population_ = male_population;
    ono.female_population_ = female_population;

    std::vector<std::string> problems;
    if (ono.entries_.empty()) problems.push_back("no entries");
    if (male_population <= 0) problems.push_back("male_population must be positive");
    if (female_population <= 0) problems.push_back("female_population must be positive");

    double male_sum = 0.0, female_sum = 0.0;
    for (std::size_t i = 0; i < ono.entries_.size(); ++i) {
        const NameForm& f = ono.entries_[i];
        const FormId id = static_cast<FormId>(i);
        if (f.form.empty()) problems.push_back("entry " + std::to_string(i) + ": empty form");
        if (f.lemma.empty()) problems.push_back("form '" + f.form + "': empty lemma");
        if (f.form == kOtherName)
            problems.push_back("form name 'Other' is reserved for the residual mass");
        if (!(f.frequency >= 0.0 && f.frequency <= 1.0))
            problems.push_back("form '" + f.form + "': frequency " + std::to_string(f.frequency) +
                               " out of [0,1]");
        if (!ono.form_index_.emplace(f.form, id).second)
            problems.push_back("duplicate form '" + f.form + "'");

        (f.gender == Gender::male ? male_sum : female_sum) += f.frequency;

        const std::string key = lemma_key(f.lemma, f.gender);
        const std::string other_key = lemma_key(f.lemma, f.gender == Gender::male
                                                              ? Gender::female
                                                              : Gender::male);
        if (ono.lemma_index_.count(other_key) > 0)
            problems.push_back("lemma '" + f.lemma + "' appears with both genders");

        auto [it, inserted] = ono.lemma_index_.emplace(key, static_cast<LemmaId>(ono.lemmas_.size()));
        if (inserted) ono.lemmas_.push_back({f.lemma, f.gender, {}});
        ono.lemmas_[static_cast<std::size_t>(it->second)].forms.push_back(id);
        ono.form_lemma_.push_back(it->second);
        (f.gender == Gender::male ? ono.male_forms_ : ono.female_forms_).push_back(id);
    }
    if (male_sum > 1.0 + kSumTolerance)
        problems.push_back("male form frequencies sum to " + std::to_string(male_sum) + " > 1");
    if (female_sum > 1.0 + kSumTolerance)
        problems.push_back("female form frequencies sum to " + std::to_string(female_sum) + " > 1");

    if (!problems.empty()) throw ValidationError(std::move(problems));
    return ono;
}

Onomasticon Onomasticon::parse_csv(std::istream& in, std::int64_t male_population,
                                   std::int64_t female_population) {
    std::vector<NameForm> entries;
    std::vector<std::string> problems;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        if (!header_seen) {
            if (text != "form,lemma,gender,frequency") {
                throw Error("line " + std::to_string(line_no) +
                            ": expected header 'form,lemma,gender,frequency', got '" + text + "'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(text);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (fields.size() != 4) {
            problems.push_back("line " + std::to_string(line_no) + ": expected 4 fields, got " +
                               std::to_string(fields.size()));
            continue;
        }
        NameForm f;
        f.form = fields[0];
        f.lemma = fields[1];
        try {
            f.gender = gender_from_code(fields[2]);
        } catch (const Error& e) {
            problems.push_back("line " + std::to_string(line_no) + ": " + e.what());
            continue;
        }
        try {
            std::size_t pos = 0;
            f.frequency = std::stod(fields[3], &pos);
            if (pos != fields[3].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            problems.push_back("line " + std::to_string(line_no) + ": bad frequency '" + fields[3] +
                               "'");
            continue;
        }
        entries.push_back(std::move(f));
    }
    if (!header_seen && entries.empty() && problems.empty()) problems.push_back("no entries");
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return from_entries(std::move(entries), male_population, female_population);
}

Onomasticon Onomasticon::load_csv(const std::string& path, std::int64_t male_population,
                                  std::int64_t female_population) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open onomasticon file '" + path + "'");
    try {
        return parse_csv(in, male_population, female_population);
    } catch (const ValidationError& e) {
        std::vector<std::string> problems;
        problems.reserve(e.problems().size());
        for (const auto& p : e.problems()) problems.push_back(path + ": " + p);
        throw ValidationError(std::move(problems));
    }
}

std::optional<FormId> Onomasticon::find_form(std::string_view form) const {
    auto it = form_index_.find(std::string(form));
    if (it == form_index_.end()) return std::nullopt;
    return it->second;
}

FormId Onomasticon::form_id(std::string_view form) const {
    auto id = find_form(form);
    if (!id) throw Error("unknown form '" + std::string(form) + "'");
    return *id;
}

const std::string& Onomasticon::form_name(FormId id) const {
    if (id == kOtherForm) return kOtherName;
    return form(id).form;
}

double Onomasticon::form_frequency(std::string_view form) const {
    return entries_[static_cast<std::size_t>(form_id(form))].frequency;
}

std::optional<LemmaId> Onomasticon::find_lemma(std::string_view lemma, Gender g) const {
    auto it = lemma_index_.find(lemma_key(lemma, g));
    if (it == lemma_index_.end()) return std::nullopt;
    return it->second;
}

LemmaId Onomasticon::lemma_id(std::string_view lemma, Gender g) const {
    auto id = find_lemma(lemma, g);
    if (!id)
        throw Error("unknown " + std::string(to_string(g)) + " lemma '" + std::string(lemma) + "'");
    return *id;
}

LemmaId Onomasticon::lemma_of(FormId id) const {
    if (id == kOtherForm) return kOtherLemma;
    return form_lemma_.at(static_cast<std::size_t>(id));
}

const std::string& Onomasticon::lemma_name(LemmaId id) const {
    if (id == kOtherLemma) return kOtherName;
    return lemmas_.at(static_cast<std::size_t>(id)).name;
}

Gender Onomasticon::lemma_gender(LemmaId id) const {
    return lemmas_.at(static_cast<std::size_t>(id)).gender;
}

const std::vector<FormId>& Onomasticon::lemma_forms(LemmaId id) const {
    return lemmas_.at(static_cast<std::size_t>(id)).forms;
}

double Onomasticon::lemma_frequency(LemmaId id) const {
    const LemmaInfo& info = lemmas_.at(static_cast<std::size_t>(id));
    double sum = 0.0;
    for (FormId f : info.forms) sum += entries_[static_cast<std::size_t>(f)].frequency;
    return sum;
}

double Onomasticon::lemma_frequency(std::string_view lemma, Gender g) const {
    return lemma_frequency(lemma_id(lemma, g));
}

std::int64_t Onomasticon::expected_patronym_count(std::string_view son_lemma,
                                                  std::string_view father_lemma) const {
    const double f_son = lemma_frequency(son_lemma, Gender::male);
    const double f_father = lemma_frequency(father_lemma, Gender::male);
    return std::llround(static_cast<double>(male_population_) * f_son * f_father);
}

FormId Onomasticon::sample_name(Gender g, RngStream& rng, const LemmaBoost* boost) const {
    return sample_name_at(g, rng.uniform01(), boost);
}

FormId Onomasticon::sample_name_at(Gender g, double u, const LemmaBoost* boost) const {
    if (boost != nullptr && boost->multiplier < 0.0)
        throw Error("boost multiplier must be nonnegative");
    return WeightedFormTable::for_gender(*this, g, boost).at(u);
}

}  // namespace talpiot
