#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "talpiot/errors.hpp"
#include "talpiot/rng.hpp"

namespace talpiot {

enum class Gender : std::uint8_t { male, female };

const char* to_string(Gender g);
Gender gender_from_code(std::string_view code);  // "M" or "F"

// Forms are referenced by index into the onomasticon; kOtherForm is the
// sentinel for the residual "some other name" mass.
using FormId = std::int32_t;
inline constexpr FormId kOtherForm = -1;

using LemmaId = std::int32_t;
inline constexpr LemmaId kOtherLemma = -1;

// One attested spelling of a name, e.g. form "Yoseh" under lemma "Joseph".
// frequency is the probability of this form among persons of that gender.
struct NameForm {
    std::string form;
    std::string lemma;
    Gender gender = Gender::male;
    double frequency = 0.0;
};

// Multiplies every form of one lemma before renormalizing.
struct LemmaBoost {
    std::string lemma;
    double multiplier = 1.0;
};

class Onomasticon;

// Quantile-style categorical sampler over a fixed set of forms plus an
// implicit "other" bucket. Draws are inverse-transform: one uniform in
// [0,1) maps to a form, so two tables with equal weights produce
// identical draw sequences from identical streams.
class WeightedFormTable {
public:
    WeightedFormTable(std::vector<FormId> forms, std::vector<double> weights, double other_weight);

    static WeightedFormTable for_gender(const Onomasticon& ono, Gender g,
                                        const LemmaBoost* boost = nullptr);

    FormId at(double u) const;  // u in [0,1)
    FormId draw(RngStream& rng) const { return at(rng.uniform01()); }

    // Renormalized probability of drawing `form` (kOtherForm allowed).
    double probability_of(FormId form) const;

    const std::vector<FormId>& forms() const { return forms_; }
    double total_weight() const { return total_; }

private:
    std::vector<FormId> forms_;
    std::vector<double> cumulative_;  // strictly nondecreasing, size == forms_.size()
    double total_ = 0.0;              // includes other_weight
    double other_weight_ = 0.0;
};

// Immutable name-frequency catalogue for one population. Safe to share
// across any number of sampling workers; all randomness lives in the
// caller's RngStream.
class Onomasticon {
public:
    static constexpr std::int64_t kDefaultPopulation = 36420;

    static Onomasticon from_entries(std::vector<NameForm> entries,
                                    std::int64_t male_population = kDefaultPopulation,
                                    std::int64_t female_population = kDefaultPopulation);

    // CSV with header `form,lemma,gender,frequency`; `#` starts a comment.
    static Onomasticon parse_csv(std::istream& in,
                                 std::int64_t male_population = kDefaultPopulation,
                                 std::int64_t female_population = kDefaultPopulation);
    static Onomasticon load_csv(const std::string& path,
                                std::int64_t male_population = kDefaultPopulation,
                                std::int64_t female_population = kDefaultPopulation);

    const std::vector<NameForm>& entries() const { return entries_; }
    std::int64_t male_population() const { return male_population_; }
    std::int64_t female_population() const { return female_population_; }
    std::int64_t population(Gender g) const {
        return g == Gender::male ? male_population_ : female_population_;
    }

    std::optional<FormId> find_form(std::string_view form) const;
    FormId form_id(std::string_view form) const;  // throws Error on unknown form
    const NameForm& form(FormId id) const { return entries_.at(static_cast<std::size_t>(id)); }
    const std::string& form_name(FormId id) const;  // "Other" for kOtherForm
    double form_frequency(std::string_view form) const;

    std::optional<LemmaId> find_lemma(std::string_view lemma, Gender g) const;
    LemmaId lemma_id(std::string_view lemma, Gender g) const;  // throws Error on unknown lemma
    LemmaId lemma_of(FormId id) const;                         // kOtherLemma for kOtherForm
    const std::string& lemma_name(LemmaId id) const;
    Gender lemma_gender(LemmaId id) const;
    const std::vector<FormId>& lemma_forms(LemmaId id) const;

    // Sum of the lemma's form frequencies, accumulated in declaration order.
    double lemma_frequency(LemmaId id) const;
    double lemma_frequency(std::string_view lemma, Gender g) const;

    // round(male_population * freq(son) * freq(father)), half away from zero;
    // son and father names are treated as independent.
    std::int64_t expected_patronym_count(std::string_view son_lemma,
                                         std::string_view father_lemma) const;

    // Weighted draw of a form of the given gender; kOtherForm carries the
    // residual (1 - sum of frequencies) mass. `u` is the quantile variant
    // used by tests to pin specific branches.
    FormId sample_name(Gender g, RngStream& rng, const LemmaBoost* boost = nullptr) const;
    FormId sample_name_at(Gender g, double u, const LemmaBoost* boost = nullptr) const;

    const std::vector<FormId>& forms_of(Gender g) const {
        return g == Gender::male ? male_forms_ : female_forms_;
    }

private:
    struct LemmaInfo {
        std::string name;
        Gender gender;
        std::vector<FormId> forms;  // declaration order
    };

    std::vector<NameForm> entries_;
    std::int64_t male_population_ = kDefaultPopulation;
    std::int64_t female_population_ = kDefaultPopulation;

    std::unordered_map<std::string, FormId> form_index_;
    std::vector<LemmaInfo> lemmas_;
    std::unordered_map<std::string, LemmaId> lemma_index_;  // key "M:name" / "F:name"
    std::vector<LemmaId> form_lemma_;                       // parallel to entries_
    std::vector<FormId> male_forms_, female_forms_;
};

}  // namespace talpiot
