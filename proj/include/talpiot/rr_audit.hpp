#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "talpiot/errors.hpp"

namespace talpiot {

// Exact rational, normalized (positive denominator, reduced). Products
// are overflow-checked; factor corrections stay exact until the final
// conversion to double at the reporting boundary.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational of(std::int64_t num, std::int64_t den);
    static Rational parse(std::string_view text);  // "7/46" or "1"

    Rational operator*(const Rational& o) const;
    bool operator==(const Rational&) const = default;

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;
};

struct RationalInterval {
    Rational lo;
    Rational hi;

    bool operator==(const RationalInterval&) const = default;
};

// One multiplicative factor of an RR value, with the interval it should
// have occupied: value is what was applied, correction is where the
// factor actually belongs.
struct RRFactor {
    std::string label;
    Rational value;
    RationalInterval correction;
};

std::vector<std::string> validate_factor(const RRFactor& f);

// The three corrections: the Mariamenou appellation factor (1/44 -> 1),
// the Marya-only rendition of the mother (13/44 -> 1), and the Yoseh
// rendition of the second brother (7/46 -> somewhere in [7/46, 1]).
std::vector<RRFactor> builtin_corrections();

struct RRValue {
    double base = 1.0;
    std::vector<RRFactor> factors;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Exact product of correction_i / value_i over all factors.
RationalInterval correction_ratio(const std::vector<RRFactor>& factors);

// base x correction_ratio as a floating interval.
Interval corrected_rr(const RRValue& rr);

}  // namespace talpiot
