#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "talpiot/domain.hpp"
#include "talpiot/onomasticon.hpp"

namespace talpiot {

struct MeasureInfo {
    Measure id;
    const char* name;
    const char* description;
};

// Exactly six registered measures.
const std::array<MeasureInfo, 6>& all_measures();

// Scores tombs against one roster. Construction precomputes per-form
// member-eligibility masks so the per-draw cost is a small matching
// search; instances are immutable and safe to share across workers.
//
// Members with inclusion_probability 0 are not part of the hypothesis
// and never matched. The stipulated inscriptions are conditioned on and
// excluded from every count. Matching is exact (maximum matching /
// maximum-weight matching), each member matched by at most one slot.
//
// M1  count of slots whose exact form is an allowed form of a member
// M2  count of slots whose lemma is a member's lemma ("any form" match)
// M3  sum of -log(lemma frequency) over the M2 matching (rarity weight)
// M4  M2, but a slot with a patronym must be consistent with the member's
//     relationship (brother_* members require a Joseph-lemma father)
// M5  M2 minus the count of slots that contradict the roster: an
//     unmatched-name slot whose patronym names a member's lemma as father
// M6  1 if every member with inclusion_probability >= 0.5 is M2-matched
//     (and at least one such member exists), else 0
class Scorer {
public:
    Scorer(const std::vector<RosterMember>& roster, const Onomasticon& ono);

    double score(const Tomb& tomb, Measure m) const;

    // score(tomb) >= observed_score, the weak-dominance hit predicate.
    bool hit(const Tomb& tomb, double observed_score, Measure m) const {
        return score(tomb, m) >= observed_score;
    }

    int member_count() const { return static_cast<int>(members_.size()); }

private:
    struct MemberInfo {
        LemmaId lemma;
        double weight;  // -log(lemma frequency), used by M3 and its greedy order
        bool required;  // inclusion_probability >= 0.5
    };

    std::uint32_t eligible_mask(const Inscription& ins, Measure m) const;
    bool contradicts(const Inscription& ins) const;

    const Onomasticon* ono_;
    std::vector<MemberInfo> members_;       // inclusion_probability > 0 only
    std::vector<std::uint32_t> m1_by_form_; // form id -> member mask (allowed-form match)
    std::vector<std::uint32_t> m2_by_form_; // form id -> member mask (lemma match)
    std::vector<int> weight_order_;         // members by descending weight
    std::uint32_t required_mask_ = 0;
    std::uint32_t needs_joseph_mask_ = 0;       // brother_* members, for M4
    std::vector<LemmaId> male_roster_lemmas_;   // lemmas of p>0 male members, for M5
    std::optional<LemmaId> joseph_lemma_;
};

// Convenience single-shot scoring.
double score(const Tomb& tomb, const std::vector<RosterMember>& roster, Measure m,
             const Onomasticon& ono);

bool hit(const Tomb& draw, const Tomb& observed, const std::vector<RosterMember>& roster,
         Measure m, const Onomasticon& ono);

}  // namespace talpiot
