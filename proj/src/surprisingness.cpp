#include "talpiot/surprisingness.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace talpiot {

namespace {

// Matching state over the four scored slots. Members are added one at a
// time via Kuhn augmentation, which yields a maximum matching for unit
// weights and (because every edge of a member carries the same weight)
// a maximum-weight matching when members arrive in descending weight.
struct MatchState {
    std::array<std::uint32_t, 4> slot_masks{};
    std::array<int, 4> owner{-1, -1, -1, -1};

    bool augment(int member, std::uint32_t& visited) {
        for (int s = 0; s < 4; ++s) {
            if ((visited >> s) & 1u) continue;
            if (!((slot_masks[static_cast<std::size_t>(s)] >> member) & 1u)) continue;
            visited |= 1u << s;
            if (owner[static_cast<std::size_t>(s)] < 0 ||
                augment(owner[static_cast<std::size_t>(s)], visited)) {
                owner[static_cast<std::size_t>(s)] = member;
                return true;
            }
        }
        return false;
    }

    bool add(int member) {
        std::uint32_t visited = 0;
        return augment(member, visited);
    }
};

}  // namespace

const std::array<MeasureInfo, 6>& all_measures() {
    static const std::array<MeasureInfo, 6> measures = {{
        {Measure::M1, "M1", "count of slots matching an allowed form of a distinct member"},
        {Measure::M2, "M2", "count of slots matching a distinct member at lemma level"},
        {Measure::M3, "M3", "lemma-level count weighted by name rarity (-log frequency)"},
        {Measure::M4, "M4", "lemma-level count restricted to patronym-consistent matches"},
        {Measure::M5, "M5", "lemma-level count minus roster-contradicting inscriptions"},
        {Measure::M6, "M6", "all-or-nothing: every likely member (p >= 0.5) present"},
    }};
    return measures;
}

Scorer::Scorer(const std::vector<RosterMember>& roster, const Onomasticon& ono) : ono_(&ono) {
    std::vector<std::uint32_t> member_bits_by_lemma;  // parallel to members_
    std::vector<std::optional<std::vector<FormId>>> allowed_ids;

    for (const RosterMember& m : roster) {
        if (!(m.inclusion_probability > 0.0)) continue;  // not part of the hypothesis
        if (members_.size() >= kMaxRosterSize)
            throw Error("roster has more than " + std::to_string(kMaxRosterSize) +
                        " members with positive inclusion probability");
        std::optional<LemmaId> lemma = ono.find_lemma(m.lemma, Gender::male);
        if (!lemma) lemma = ono.find_lemma(m.lemma, Gender::female);
        if (!lemma)
            throw Error("roster member '" + m.role + "': lemma '" + m.lemma +
                        "' not in onomasticon");

        MemberInfo info;
        info.lemma = *lemma;
        const double freq = std::max(ono.lemma_frequency(*lemma), DBL_MIN);
        info.weight = -std::log(freq);
        info.required = m.inclusion_probability >= 0.5;

        const int idx = static_cast<int>(members_.size());
        if (info.required) required_mask_ |= 1u << idx;
        if (m.role.rfind(kBrotherRolePrefix, 0) == 0) needs_joseph_mask_ |= 1u << idx;
        if (ono.lemma_gender(*lemma) == Gender::male) {
            if (std::find(male_roster_lemmas_.begin(), male_roster_lemmas_.end(), *lemma) ==
                male_roster_lemmas_.end())
                male_roster_lemmas_.push_back(*lemma);
        }

        if (m.allowed_forms) {
            std::vector<FormId> ids;
            for (const std::string& f : *m.allowed_forms) {
                const FormId id = ono.form_id(f);
                if (ono.lemma_of(id) != *lemma)
                    throw Error("roster member '" + m.role + "': allowed form '" + f +
                                "' does not belong to lemma '" + m.lemma + "'");
                ids.push_back(id);
            }
            allowed_ids.push_back(std::move(ids));
        } else {
            allowed_ids.push_back(std::nullopt);
        }
        members_.push_back(info);
    }

    m1_by_form_.assign(ono.entries().size(), 0);
    m2_by_form_.assign(ono.entries().size(), 0);
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const std::uint32_t bit = 1u << i;
        for (FormId f : ono.lemma_forms(members_[i].lemma))
            m2_by_form_[static_cast<std::size_t>(f)] |= bit;
        const auto& allowed = allowed_ids[i];
        const std::vector<FormId>& m1_forms =
            allowed ? *allowed : ono.lemma_forms(members_[i].lemma);
        for (FormId f : m1_forms) m1_by_form_[static_cast<std::size_t>(f)] |= bit;
    }

    weight_order_.resize(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) weight_order_[i] = static_cast<int>(i);
    std::stable_sort(weight_order_.begin(), weight_order_.end(), [this](int a, int b) {
        return members_[static_cast<std::size_t>(a)].weight >
               members_[static_cast<std::size_t>(b)].weight;
    });

    joseph_lemma_ = ono.find_lemma(kJosephLemma, Gender::male);
}

std::uint32_t Scorer::eligible_mask(const Inscription& ins, Measure m) const {
    if (ins.name == kOtherForm) return 0;
    std::uint32_t mask = (m == Measure::M1) ? m1_by_form_[static_cast<std::size_t>(ins.name)]
                                            : m2_by_form_[static_cast<std::size_t>(ins.name)];
    if (m == Measure::M4 && ins.patronym) {
        const LemmaId patronym_lemma =
            (*ins.patronym == kOtherForm) ? kOtherLemma : ono_->lemma_of(*ins.patronym);
        std::uint32_t consistent = ~needs_joseph_mask_;
        if (joseph_lemma_ && patronym_lemma == *joseph_lemma_) consistent |= needs_joseph_mask_;
        mask &= consistent;
    }
    return mask;
}

bool Scorer::contradicts(const Inscription& ins) const {
    if (!ins.patronym) return false;
    // A slot whose own name is a family name is not a contradiction.
    if (ins.name != kOtherForm && m2_by_form_[static_cast<std::size_t>(ins.name)] != 0)
        return false;
    const LemmaId patronym_lemma =
        (*ins.patronym == kOtherForm) ? kOtherLemma : ono_->lemma_of(*ins.patronym);
    if (patronym_lemma == kOtherLemma) return false;
    return std::find(male_roster_lemmas_.begin(), male_roster_lemmas_.end(), patronym_lemma) !=
           male_roster_lemmas_.end();
}

double Scorer::score(const Tomb& tomb, Measure m) const {
    const std::array<const Inscription*, 4> slots = {&tomb.females[0], &tomb.females[1],
                                                     &tomb.males[0], &tomb.males[1]};
    MatchState state;
    for (int s = 0; s < 4; ++s)
        state.slot_masks[static_cast<std::size_t>(s)] = eligible_mask(*slots[static_cast<std::size_t>(s)], m);

    switch (m) {
        case Measure::M1:
        case Measure::M2:
        case Measure::M4: {
            int count = 0;
            for (std::size_t i = 0; i < members_.size(); ++i)
                if (state.add(static_cast<int>(i))) ++count;
            return count;
        }
        case Measure::M3: {
            double total = 0.0;
            for (int i : weight_order_)
                if (state.add(i)) total += members_[static_cast<std::size_t>(i)].weight;
            return total;
        }
        case Measure::M5: {
            int count = 0;
            for (std::size_t i = 0; i < members_.size(); ++i)
                if (state.add(static_cast<int>(i))) ++count;
            int contradictions = 0;
            for (const Inscription* ins : slots)
                if (contradicts(*ins)) ++contradictions;
            return std::max(0, count - contradictions);
        }
        case Measure::M6: {
            if (required_mask_ == 0) return 0.0;
            for (std::size_t i = 0; i < members_.size(); ++i) {
                if (!((required_mask_ >> i) & 1u)) continue;
                if (!state.add(static_cast<int>(i))) return 0.0;
            }
            return 1.0;
        }
    }
    return 0.0;
}

double score(const Tomb& tomb, const std::vector<RosterMember>& roster, Measure m,
             const Onomasticon& ono) {
    return Scorer(roster, ono).score(tomb, m);
}

bool hit(const Tomb& draw, const Tomb& observed, const std::vector<RosterMember>& roster,
         Measure m, const Onomasticon& ono) {
    Scorer scorer(roster, ono);
    return scorer.hit(draw, scorer.score(observed, m), m);
}

}  // namespace talpiot
