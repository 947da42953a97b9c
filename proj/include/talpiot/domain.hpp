#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "talpiot/onomasticon.hpp"

namespace talpiot {

// J: the stipulated "Jesus son of Joseph" is the historical Jesus of
// Nazareth. NotJ: he is one of the other men of that name.
enum class Hypothesis : std::uint8_t { J, NotJ };

const char* to_string(Hypothesis h);

// Lemma names fixed by the two stipulated inscriptions and the
// family-roster conventions. The bundled dataset uses these ids.
inline constexpr std::string_view kJesusLemma = "Jesus";
inline constexpr std::string_view kJosephLemma = "Joseph";
inline constexpr std::string_view kJudahLemma = "Judah";
inline constexpr std::string_view kMaryLemma = "Mary";

// Roster roles with built-in semantics (see effective_roster / scoring).
inline constexpr std::string_view kMotherRole = "mother";
inline constexpr std::string_view kMagdaleneRole = "magdalene";
inline constexpr std::string_view kBrotherRolePrefix = "brother";

// One inscribed ossuary: a name, an optional patronym ("X son of Y"),
// and the gender of the named person. kOtherForm marks a name outside
// the modeled onomasticon.
struct Inscription {
    FormId name = kOtherForm;
    std::optional<FormId> patronym;
    Gender gender = Gender::male;

    bool operator==(const Inscription&) const = default;
};

// A tomb in either ensemble: the two stipulated inscriptions (implicit,
// identical everywhere), two free female slots, two free male slots, and
// four uninscribed ossuaries. The 2+2+2+4 structure is fixed by type.
struct Tomb {
    static constexpr int kFemaleSlots = 2;
    static constexpr int kMaleSlots = 2;
    static constexpr int kUninscribedCount = 4;

    std::array<Inscription, kFemaleSlots> females;
    std::array<Inscription, kMaleSlots> males;

    struct StipulatedInscription {
        std::string_view name_lemma;
        std::string_view patronym_lemma;
    };
    // "Jesus son of Joseph" and "Judah son of Jesus"; conditioned on, never scored.
    static const std::array<StipulatedInscription, 2>& stipulated();

    bool operator==(const Tomb&) const = default;
};

// Structural problems (gender placement, non-male patronyms); empty means ok.
std::vector<std::string> validate_tomb(const Tomb& tomb, const Onomasticon& ono);

// The free-slot Talpiot data: Mariamenou-Mara and Maria on the female
// side, Yoseh and an unmodeled fourth inscription on the male side.
struct ObservedData {
    Tomb tomb;

    static ObservedData talpiot(const Onomasticon& ono);

    bool operator==(const ObservedData&) const = default;
};

// A hypothesized family member. allowed_forms empty (nullopt) means any
// form of the lemma counts as this person.
struct RosterMember {
    std::string role;
    std::string lemma;
    std::optional<std::vector<std::string>> allowed_forms;
    double inclusion_probability = 0.5;

    bool operator==(const RosterMember&) const = default;
};

// The six tomb-vs-roster agreement counts; definitions in surprisingness.hpp.
enum class Measure : std::uint8_t { M1, M2, M3, M4, M5, M6 };

Measure measure_from_string(std::string_view name);
const char* to_string(Measure m);

// Uniform[low, high]; degenerate low == high pins the value.
struct RhoDistribution {
    double low = 0.0;
    double high = 1.0;

    bool operator==(const RhoDistribution&) const = default;
};

struct Scenario {
    std::string id = "baseline";
    std::vector<RosterMember> roster;
    bool mother_any_mary_form = true;
    bool apply_rho_son = true;
    bool apply_rho_tomb = true;
    RhoDistribution rho_son_distribution;
    RhoDistribution rho_tomb_distribution;
    bool magdalene_assumed = false;
    double yoseh_patriarch_boost = 2.0;  // 1 disables the boost
    Measure measure = Measure::M1;
    std::int64_t batch_size = 10000;
    std::int64_t batches = 10;
    std::int64_t replicates = 100;

    bool operator==(const Scenario&) const = default;
};

// Scorers and samplers handle at most this many roster members.
inline constexpr std::size_t kMaxRosterSize = 16;

Scenario default_scenario();

// Every violated invariant, not just the first; empty means valid.
std::vector<std::string> validate_scenario(const Scenario& s);
// Adds cross-checks against the onomasticon (lemmas exist, allowed forms
// belong to the member's lemma, member form mass is positive).
std::vector<std::string> validate_scenario(const Scenario& s, const Onomasticon& ono);

// Resolves the scenario toggles into the roster actually simulated and
// scored: mother_any_mary_form narrows the mother to the short form when
// off, magdalene_assumed forces the magdalene entry's inclusion to 1.
std::vector<RosterMember> effective_roster(const Scenario& s);

// Config file round-trip. Unknown or missing keys are errors.
nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace talpiot
