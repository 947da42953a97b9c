#pragma once

#include <sstream>
#include <string>

#include "talpiot/domain.hpp"
#include "talpiot/onomasticon.hpp"

namespace talpiot::testing {

inline std::string data_path(const std::string& name) {
    return std::string(TALPIOT_DATA_DIR) + "/" + name;
}

inline const Onomasticon& bundled_onomasticon() {
    static const Onomasticon ono = Onomasticon::load_csv(data_path("onomasticon.csv"));
    return ono;
}

inline Onomasticon parse(const std::string& csv,
                         std::int64_t male_pop = Onomasticon::kDefaultPopulation,
                         std::int64_t female_pop = Onomasticon::kDefaultPopulation) {
    std::istringstream in(csv);
    return Onomasticon::parse_csv(in, male_pop, female_pop);
}

// At most three forms per gender; small enough to enumerate, rich enough
// to score and to carry the stipulated lemmas.
inline const Onomasticon& toy_onomasticon() {
    static const Onomasticon ono = parse(
        "form,lemma,gender,frequency\n"
        "Yeshua,Jesus,M,0.05\n"
        "Yoseh,Joseph,M,0.1\n"
        "Yehosef,Joseph,M,0.15\n"
        "Maria,Mary,F,0.2\n"
        "Mariamenou,Mary,F,0.01\n");
    return ono;
}

// A scenario with no Monte Carlo knobs turned: empty roster, no boost,
// rho factors off.
inline Scenario null_scenario() {
    Scenario s = default_scenario();
    s.id = "null";
    s.roster.clear();
    s.yoseh_patriarch_boost = 1.0;
    s.apply_rho_son = false;
    s.apply_rho_tomb = false;
    return s;
}

}  // namespace talpiot::testing
