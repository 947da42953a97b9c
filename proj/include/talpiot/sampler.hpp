#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "talpiot/domain.hpp"
#include "talpiot/onomasticon.hpp"
#include "talpiot/rng.hpp"

namespace talpiot {

// Reproducibility record: the draw is a pure function of these three.
struct SeedPath {
    std::uint64_t master_seed = 0;
    std::uint32_t batch_index = 0;
    std::uint32_t draw_index = 0;

    bool operator==(const SeedPath&) const = default;
};

struct EnsembleDraw {
    Tomb tomb;
    Hypothesis hypothesis = Hypothesis::NotJ;
    SeedPath seed_path;

    bool operator==(const EnsembleDraw&) const = default;
};

struct SampleDiagnostics {
    std::uint64_t draws = 0;
    std::uint64_t roster_overflow_draws = 0;  // draws where realized members outnumbered slots
    std::uint64_t dropped_members = 0;

    SampleDiagnostics& operator+=(const SampleDiagnostics& o) {
        draws += o.draws;
        roster_overflow_draws += o.roster_overflow_draws;
        dropped_members += o.dropped_members;
        return *this;
    }
};

// Draws tombs from the two stipulated-structure ensembles.
//
// Under NotJ the four free slots follow the city-wide name distribution,
// with the Joseph lemma boosted in the male slots when the scenario's
// multiplier is not 1 (a tomb whose patriarch is named Joseph sees the
// name more often). Under J, roster members are first realized
// independently with their inclusion probabilities and placed into
// matching-gender slots in declaration order; leftover slots are filled
// from the unboosted city distribution. Both ensembles implicitly carry
// the two stipulated inscriptions.
//
// Determinism contract: a batch is a pure function of (master_seed,
// batch_index); the one rng stream is consumed in a fixed slot order, so
// runs are reproducible under any parallel schedule. Instances are
// immutable after construction and safe to share across workers.
class TombSampler {
public:
    TombSampler(const Scenario& scenario, const Onomasticon& ono);

    Tomb sample_tomb(Hypothesis h, RngStream& rng, SampleDiagnostics* diag = nullptr) const;

    // batch_size draws from the stream derived for (master_seed, batch_index).
    std::vector<EnsembleDraw> sample_batch(Hypothesis h, std::uint64_t master_seed,
                                           std::uint32_t batch_index,
                                           SampleDiagnostics* diag = nullptr) const;

    // Free-slot content distributions (exposed for the enumeration oracle
    // and marginal tests).
    const WeightedFormTable& female_free_table() const { return female_free_; }
    const WeightedFormTable& male_free_table(Hypothesis h) const {
        return h == Hypothesis::NotJ ? male_free_notj_ : male_free_;
    }

    struct PlacedMember {
        int roster_index;  // into the effective roster
        Gender gender;
        double inclusion_probability;
        WeightedFormTable forms;  // distribution of the inscribed form
    };
    const std::vector<PlacedMember>& members() const { return members_; }

    // Overflow policy shared with the enumeration oracle: of the realized
    // members (indices into members(), declaration order), keep at most
    // two per gender, highest inclusion probability first, earlier
    // declaration winning ties; returned in declaration order.
    std::vector<int> placed_members(const std::vector<int>& realized, Gender g,
                                    std::size_t* dropped = nullptr) const;

    std::int64_t batch_size() const { return batch_size_; }

private:
    const Onomasticon* ono_;
    std::int64_t batch_size_;
    std::vector<PlacedMember> members_;  // effective roster, declaration order
    WeightedFormTable female_free_;
    WeightedFormTable male_free_;       // city distribution (J free slots)
    WeightedFormTable male_free_notj_;  // boosted when multiplier != 1
};

// Audit dump, one CSV record per draw. Off by default everywhere; wired
// to `run --dump-draws`.
void write_draw_dump_header(std::ostream& out);
void write_draw_dump(std::ostream& out, const std::vector<EnsembleDraw>& draws,
                     const Onomasticon& ono);

}  // namespace talpiot
