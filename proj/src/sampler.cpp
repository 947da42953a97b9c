#include "talpiot/sampler.hpp"

#include <algorithm>
#include <ostream>

namespace talpiot {

namespace {

const Scenario& validated(const Scenario& s, const Onomasticon& ono) {
    std::vector<std::string> problems = validate_scenario(s, ono);
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return s;
}

WeightedFormTable make_male_notj_table(const Scenario& s, const Onomasticon& ono) {
    if (s.yoseh_patriarch_boost == 1.0)
        return WeightedFormTable::for_gender(ono, Gender::male);
    const LemmaBoost boost{std::string(kJosephLemma), s.yoseh_patriarch_boost};
    return WeightedFormTable::for_gender(ono, Gender::male, &boost);
}

WeightedFormTable member_form_table(const RosterMember& m, LemmaId lemma,
                                    const Onomasticon& ono) {
    std::vector<FormId> ids;
    if (m.allowed_forms) {
        for (const std::string& f : *m.allowed_forms) ids.push_back(ono.form_id(f));
    } else {
        ids = ono.lemma_forms(lemma);
    }
    std::vector<double> weights;
    weights.reserve(ids.size());
    for (FormId id : ids) weights.push_back(ono.form(id).frequency);
    return WeightedFormTable(std::move(ids), std::move(weights), 0.0);
}

}  // namespace

TombSampler::TombSampler(const Scenario& scenario, const Onomasticon& ono)
    : ono_(&ono),
      batch_size_(validated(scenario, ono).batch_size),
      female_free_(WeightedFormTable::for_gender(ono, Gender::female)),
      male_free_(WeightedFormTable::for_gender(ono, Gender::male)),
      male_free_notj_(make_male_notj_table(scenario, ono)) {
    const std::vector<RosterMember> roster = effective_roster(scenario);
    for (std::size_t i = 0; i < roster.size(); ++i) {
        const RosterMember& m = roster[i];
        if (!(m.inclusion_probability > 0.0)) continue;  // never realized
        std::optional<LemmaId> lemma = ono.find_lemma(m.lemma, Gender::male);
        if (!lemma) lemma = ono.find_lemma(m.lemma, Gender::female);
        members_.push_back(PlacedMember{static_cast<int>(i), ono.lemma_gender(*lemma),
                                        m.inclusion_probability,
                                        member_form_table(m, *lemma, ono)});
    }
}

Tomb TombSampler::sample_tomb(Hypothesis h, RngStream& rng, SampleDiagnostics* diag) const {
    if (diag) diag->draws += 1;
    Tomb tomb;
    tomb.females[0].gender = tomb.females[1].gender = Gender::female;
    tomb.males[0].gender = tomb.males[1].gender = Gender::male;

    if (h == Hypothesis::NotJ) {
        // No constraints: every free slot follows the city distribution.
        tomb.females[0].name = female_free_.draw(rng);
        tomb.females[1].name = female_free_.draw(rng);
        tomb.males[0].name = male_free_notj_.draw(rng);
        tomb.males[1].name = male_free_notj_.draw(rng);
        return tomb;
    }

    // J: realize roster membership, one inclusion draw per member.
    std::vector<int> realized;
    realized.reserve(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i)
        if (rng.bernoulli(members_[i].inclusion_probability)) realized.push_back(static_cast<int>(i));

    std::size_t dropped_f = 0, dropped_m = 0;
    const std::vector<int> placed_females = placed_members(realized, Gender::female, &dropped_f);
    const std::vector<int> placed_males = placed_members(realized, Gender::male, &dropped_m);
    if (diag && (dropped_f + dropped_m) > 0) {
        diag->roster_overflow_draws += 1;
        diag->dropped_members += dropped_f + dropped_m;
    }

    // Fill slots left to right, placed members first, free draws after.
    auto fill = [&](auto& slots, const std::vector<int>& placed, const WeightedFormTable& free) {
        std::size_t s = 0;
        for (int idx : placed)
            slots[s++].name = members_[static_cast<std::size_t>(idx)].forms.draw(rng);
        for (; s < slots.size(); ++s) slots[s].name = free.draw(rng);
    };
    fill(tomb.females, placed_females, female_free_);
    fill(tomb.males, placed_males, male_free_);
    return tomb;
}

std::vector<int> TombSampler::placed_members(const std::vector<int>& realized, Gender g,
                                             std::size_t* dropped) const {
    std::vector<int> of_gender;
    for (int idx : realized)
        if (members_[static_cast<std::size_t>(idx)].gender == g) of_gender.push_back(idx);
    if (of_gender.size() > 2) {
        std::stable_sort(of_gender.begin(), of_gender.end(), [&](int a, int b) {
            return members_[static_cast<std::size_t>(a)].inclusion_probability >
                   members_[static_cast<std::size_t>(b)].inclusion_probability;
        });
        if (dropped) *dropped += of_gender.size() - 2;
        of_gender.resize(2);
        std::sort(of_gender.begin(), of_gender.end());  // back to declaration order
    }
    return of_gender;
}

std::vector<EnsembleDraw> TombSampler::sample_batch(Hypothesis h, std::uint64_t master_seed,
                                                    std::uint32_t batch_index,
                                                    SampleDiagnostics* diag) const {
    RngStream rng = RngStream::derived(master_seed, {batch_index});
    std::vector<EnsembleDraw> draws;
    draws.reserve(static_cast<std::size_t>(batch_size_));
    for (std::int64_t i = 0; i < batch_size_; ++i) {
        EnsembleDraw d;
        d.tomb = sample_tomb(h, rng, diag);
        d.hypothesis = h;
        d.seed_path = {master_seed, batch_index, static_cast<std::uint32_t>(i)};
        draws.push_back(d);
    }
    return draws;
}

void write_draw_dump_header(std::ostream& out) {
    out << "hypothesis,master_seed,batch_index,draw_index,female_0,female_1,male_0,male_1\n";
}

void write_draw_dump(std::ostream& out, const std::vector<EnsembleDraw>& draws,
                     const Onomasticon& ono) {
    for (const EnsembleDraw& d : draws) {
        out << to_string(d.hypothesis) << "," << d.seed_path.master_seed << ","
            << d.seed_path.batch_index << "," << d.seed_path.draw_index << ","
            << ono.form_name(d.tomb.females[0].name) << "," << ono.form_name(d.tomb.females[1].name)
            << "," << ono.form_name(d.tomb.males[0].name) << ","
            << ono.form_name(d.tomb.males[1].name) << "\n";
    }
}

}  // namespace talpiot
