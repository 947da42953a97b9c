#include <doctest.h>

#include <cmath>

#include "talpiot/sampler.hpp"
#include "talpiot/surprisingness.hpp"
#include "test_helpers.hpp"

using namespace talpiot;
using talpiot::testing::bundled_onomasticon;

namespace {

// "" means Other.
Inscription insc(const Onomasticon& ono, const std::string& form, Gender g,
                 const std::string& patronym = "") {
    Inscription i;
    i.name = form.empty() ? kOtherForm : ono.form_id(form);
    i.gender = g;
    if (!patronym.empty())
        i.patronym = patronym == "Other" ? kOtherForm : ono.form_id(patronym);
    return i;
}

Tomb make_tomb(const Onomasticon& ono, const std::string& f0, const std::string& f1,
               const std::string& m0, const std::string& m1) {
    Tomb t;
    t.females[0] = insc(ono, f0, Gender::female);
    t.females[1] = insc(ono, f1, Gender::female);
    t.males[0] = insc(ono, m0, Gender::male);
    t.males[1] = insc(ono, m1, Gender::male);
    return t;
}

std::vector<RosterMember> default_roster() { return default_scenario().roster; }

}  // namespace

TEST_CASE("six measures are registered") {
    CHECK(all_measures().size() == 6);
}

TEST_CASE("empty roster scores zero on every measure") {
    const Onomasticon& ono = bundled_onomasticon();
    const Tomb observed = ObservedData::talpiot(ono).tomb;
    for (const MeasureInfo& info : all_measures())
        CHECK(score(observed, {}, info.id, ono) == 0.0);
}

TEST_CASE("observed tomb vs default roster, hand-enumerated") {
    const Onomasticon& ono = bundled_onomasticon();
    const Tomb observed = ObservedData::talpiot(ono).tomb;
    const std::vector<RosterMember> roster = default_roster();

    // Mariamenou -> mother, Yoseh -> brother_yoseh; Maria has no second
    // Mary-lemma member because magdalene sits at probability 0.
    CHECK(score(observed, roster, Measure::M1, ono) == 2.0);
    CHECK(score(observed, roster, Measure::M2, ono) == 2.0);
    CHECK(score(observed, roster, Measure::M4, ono) == 2.0);
    CHECK(score(observed, roster, Measure::M5, ono) == 2.0);
    // three brothers are required but absent
    CHECK(score(observed, roster, Measure::M6, ono) == 0.0);

    const double expected_m3 = -std::log(ono.lemma_frequency("Mary", Gender::female)) -
                               std::log(ono.lemma_frequency("Joseph", Gender::male));
    CHECK(score(observed, roster, Measure::M3, ono) ==
          doctest::Approx(expected_m3).epsilon(1e-12));
}

TEST_CASE("assuming magdalene adds the second Mary match") {
    const Onomasticon& ono = bundled_onomasticon();
    Scenario s = default_scenario();
    s.magdalene_assumed = true;
    CHECK(score(ObservedData::talpiot(ono).tomb, effective_roster(s), Measure::M2, ono) == 3.0);
}

TEST_CASE("all-Other tomb scores zero, M6 zero for a nonempty roster") {
    const Onomasticon& ono = bundled_onomasticon();
    const Tomb blank = make_tomb(ono, "", "", "", "");
    for (const MeasureInfo& info : all_measures())
        CHECK(score(blank, default_roster(), info.id, ono) == 0.0);
}

TEST_CASE("members with zero inclusion probability never match") {
    const Onomasticon& ono = bundled_onomasticon();
    std::vector<RosterMember> roster = {{"mother", "Mary", std::nullopt, 0.0}};
    CHECK(score(make_tomb(ono, "Maria", "Mariam", "", ""), roster, Measure::M2, ono) == 0.0);
}

TEST_CASE("a member is matched at most once") {
    const Onomasticon& ono = bundled_onomasticon();
    std::vector<RosterMember> roster = {{"mother", "Mary", std::nullopt, 1.0}};
    CHECK(score(make_tomb(ono, "Maria", "Mariam", "", ""), roster, Measure::M2, ono) == 1.0);
}

TEST_CASE("M1 respects allowed form sets where M2 does not") {
    const Onomasticon& ono = bundled_onomasticon();
    Scenario s = default_scenario();
    s.mother_any_mary_form = false;  // mother narrowed to the Maria rendition
    const auto roster = effective_roster(s);

    const Tomb t = make_tomb(ono, "Mariamenou", "", "Yoseh", "");
    CHECK(score(t, roster, Measure::M1, ono) == 1.0);  // Mariamenou not allowed
    CHECK(score(t, roster, Measure::M2, ono) == 2.0);  // lemma-level still matches

    const Tomb u = make_tomb(ono, "Maria", "", "Yoseh", "");
    CHECK(score(u, roster, Measure::M1, ono) == 2.0);
}

TEST_CASE("matching is maximum, not greedy") {
    const Onomasticon& ono = bundled_onomasticon();
    // A can be satisfied by either female form, B only by Maria; greedy
    // in declaration order would burn Maria on A.
    std::vector<RosterMember> roster = {
        {"a", "Mary", std::vector<std::string>{"Maria", "Mariam"}, 1.0},
        {"b", "Mary", std::vector<std::string>{"Maria"}, 1.0},
    };
    CHECK(score(make_tomb(ono, "Maria", "Mariam", "", ""), roster, Measure::M1, ono) == 2.0);
}

TEST_CASE("M4 requires brothers' patronyms to be Joseph forms") {
    const Onomasticon& ono = bundled_onomasticon();
    const auto roster = default_roster();

    Tomb t = make_tomb(ono, "Mariamenou", "", "Yoseh", "");
    t.males[0].patronym = ono.form_id("Yehuda");  // wrong father for a brother
    CHECK(score(t, roster, Measure::M2, ono) == 2.0);
    CHECK(score(t, roster, Measure::M4, ono) == 1.0);

    t.males[0].patronym = ono.form_id("Yehosef");
    CHECK(score(t, roster, Measure::M4, ono) == 2.0);

    // patronym-free inscriptions are never filtered
    t.males[0].patronym.reset();
    CHECK(score(t, roster, Measure::M4, ono) == 2.0);

    // the mother is not a brother_*: any patronym is consistent
    Tomb u = make_tomb(ono, "Maria", "", "", "");
    u.females[0].patronym = ono.form_id("Shimon");
    CHECK(score(u, roster, Measure::M4, ono) == 1.0);
}

TEST_CASE("M5 subtracts contradicting inscriptions and clamps at zero") {
    const Onomasticon& ono = bundled_onomasticon();
    const auto roster = default_roster();

    // Matya son of Yehosef: a stranger claiming the family patriarch
    Tomb t = make_tomb(ono, "Mariamenou", "", "Matya", "");
    t.males[0].patronym = ono.form_id("Yehosef");
    CHECK(score(t, roster, Measure::M2, ono) == 1.0);
    CHECK(score(t, roster, Measure::M5, ono) == 0.0);

    // same patronym on a family-named inscription is not a contradiction
    Tomb u = make_tomb(ono, "Mariamenou", "", "Yoseh", "");
    u.males[0].patronym = ono.form_id("Yehosef");
    CHECK(score(u, roster, Measure::M5, ono) == 2.0);

    // clamp: more contradictions than matches
    Tomb v = make_tomb(ono, "", "", "Matya", "");
    v.males[0].patronym = ono.form_id("Yehosef");
    CHECK(score(v, roster, Measure::M5, ono) == 0.0);

    // an unlisted patronym is no contradiction
    Tomb w = make_tomb(ono, "", "", "Matya", "");
    w.males[0].patronym = kOtherForm;
    CHECK(score(w, roster, Measure::M5, ono) == 0.0);
    CHECK(score(w, roster, Measure::M2, ono) == 0.0);
}

TEST_CASE("M6 is all-or-nothing over the likely members") {
    const Onomasticon& ono = bundled_onomasticon();
    std::vector<RosterMember> roster = {
        {"mother", "Mary", std::nullopt, 1.0},
        {"brother_yoseh", "Joseph", std::nullopt, 0.6},
    };
    CHECK(score(make_tomb(ono, "Maria", "", "Yoseh", ""), roster, Measure::M6, ono) == 1.0);
    CHECK(score(make_tomb(ono, "Maria", "", "", ""), roster, Measure::M6, ono) == 0.0);

    // optional members do not gate M6
    roster.push_back({"cousin", "Simon", std::nullopt, 0.2});
    CHECK(score(make_tomb(ono, "Maria", "", "Yoseh", ""), roster, Measure::M6, ono) == 1.0);

    // no member reaches the 0.5 bar: degenerate zero
    std::vector<RosterMember> unlikely = {{"mother", "Mary", std::nullopt, 0.3}};
    CHECK(score(make_tomb(ono, "Maria", "", "", ""), unlikely, Measure::M6, ono) == 0.0);
}

TEST_CASE("hit predicate: reflexive, universal at zero, monotone") {
    const Onomasticon& ono = bundled_onomasticon();
    const Tomb observed = ObservedData::talpiot(ono).tomb;
    const auto roster = default_roster();

    for (const MeasureInfo& info : all_measures())
        CHECK(hit(observed, observed, roster, info.id, ono));

    // empty roster: observed scores 0, everything hits
    CHECK(hit(make_tomb(ono, "", "", "", ""), observed, {}, Measure::M2, ono));

    // strictly more matches than observed
    const Tomb richer = make_tomb(ono, "Mariamenou", "Maria", "Yoseh", "Shimon");
    Scenario s = default_scenario();
    s.magdalene_assumed = true;
    CHECK(hit(richer, observed, effective_roster(s), Measure::M2, ono));
}

TEST_CASE("properties over random tombs: permutation, dominance, monotonicity") {
    const Onomasticon& ono = bundled_onomasticon();
    const Scenario s = default_scenario();
    const auto roster = effective_roster(s);
    const Scorer scorer(roster, ono);
    const TombSampler sampler(s, ono);
    const std::vector<FormId>& male_forms = ono.forms_of(Gender::male);

    RngStream rng(777);
    for (int i = 0; i < 10000; ++i) {
        Tomb t = sampler.sample_tomb(i % 2 == 0 ? Hypothesis::J : Hypothesis::NotJ, rng);
        // sprinkle patronyms so M4/M5 paths are exercised
        if (rng.bernoulli(0.3))
            t.males[0].patronym = rng.bernoulli(0.2)
                                      ? kOtherForm
                                      : male_forms[static_cast<std::size_t>(
                                            rng.uniform(0.0, 1.0) * male_forms.size())];

        std::array<double, 6> base{};
        for (const MeasureInfo& info : all_measures())
            base[static_cast<std::size_t>(info.id)] = scorer.score(t, info.id);

        // dominance
        CHECK(base[0] <= base[1]);  // M1 <= M2
        CHECK(base[3] <= base[1]);  // M4 <= M2
        CHECK(base[4] <= base[1]);  // M5 <= M2

        // permutation invariance
        Tomb swapped = t;
        std::swap(swapped.females[0], swapped.females[1]);
        std::swap(swapped.males[0], swapped.males[1]);
        for (const MeasureInfo& info : all_measures())
            CHECK(scorer.score(swapped, info.id) == base[static_cast<std::size_t>(info.id)]);

        // replacing an Other inscription with a roster match never hurts
        Tomb improved = t;
        bool changed = false;
        if (improved.females[0].name == kOtherForm) {
            improved.females[0] = insc(ono, "Maria", Gender::female);
            changed = true;
        } else if (improved.males[1].name == kOtherForm) {
            improved.males[1] = insc(ono, "Yoseh", Gender::male);
            changed = true;
        }
        if (changed) {
            for (const MeasureInfo& info : all_measures())
                CHECK(scorer.score(improved, info.id) >=
                      base[static_cast<std::size_t>(info.id)]);
        }
    }
}
