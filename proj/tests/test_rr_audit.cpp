#include <doctest.h>

#include <cmath>

#include "talpiot/rr_audit.hpp"

using namespace talpiot;

TEST_CASE("rationals normalize, parse, and print") {
    CHECK(Rational::of(26, 44) == Rational::of(13, 22));
    CHECK(Rational::of(1, -2) == Rational::of(-1, 2));
    CHECK(Rational::of(0, 7) == Rational::of(0, 1));
    CHECK(Rational::parse("7/46") == Rational::of(7, 46));
    CHECK(Rational::parse("1") == Rational::of(1, 1));
    CHECK(Rational::parse("-3/9") == Rational::of(-1, 3));
    CHECK(Rational::of(7, 46).to_string() == "7/46");
    CHECK(Rational::of(44, 44).to_string() == "1");
    CHECK_THROWS_AS(Rational::of(1, 0), Error);
    CHECK_THROWS_AS(Rational::parse("x/3"), Error);
    CHECK_THROWS_AS(Rational::parse("1/2/3"), Error);
}

TEST_CASE("rational products are exact and overflow-checked") {
    CHECK(Rational::of(1, 44) * Rational::of(44, 1) == Rational::of(1, 1));
    CHECK(Rational::of(44, 1) * Rational::of(44, 13) == Rational::of(1936, 13));
    // cancelling factors survive even when the raw cross-product is huge
    const Rational big = Rational::of(INT64_MAX / 2, 1);
    CHECK(big * Rational::of(1, INT64_MAX / 2) == Rational::of(1, 1));
    CHECK_THROWS_AS(big * big, Error);
}

TEST_CASE("the three built-in corrections") {
    const std::vector<RRFactor> factors = builtin_corrections();
    REQUIRE(factors.size() == 3);

    CHECK(factors[0].value == Rational::of(1, 44));
    CHECK(factors[0].correction == RationalInterval{Rational::of(1, 1), Rational::of(1, 1)});

    CHECK(factors[1].value == Rational::of(13, 44));
    CHECK(factors[1].correction == RationalInterval{Rational::of(1, 1), Rational::of(1, 1)});

    CHECK(factors[2].value == Rational::of(7, 46));
    CHECK(factors[2].correction == RationalInterval{Rational::of(7, 46), Rational::of(1, 1)});

    for (const RRFactor& f : factors) CHECK(validate_factor(f).empty());
}

TEST_CASE("corrected_rr on single factors") {
    // removing the 1/44 multiplies by 44 exactly
    const Interval a =
        corrected_rr({0.001, {{"m", Rational::of(1, 44), {Rational::of(1, 1), Rational::of(1, 1)}}}});
    CHECK(a.lo == doctest::Approx(0.044).epsilon(1e-15));
    CHECK(a.hi == doctest::Approx(0.044).epsilon(1e-15));

    // the Yoseh interval spans [unchanged, full removal]
    const Interval b = corrected_rr(
        {0.001, {{"y", Rational::of(7, 46), {Rational::of(7, 46), Rational::of(1, 1)}}}});
    CHECK(b.lo == doctest::Approx(0.001).epsilon(1e-15));
    CHECK(b.hi == doctest::Approx(0.001 * 46.0 / 7.0).epsilon(1e-15));

    // no factors: identity interval
    const Interval c = corrected_rr({0.25, {}});
    CHECK(c.lo == 0.25);
    CHECK(c.hi == 0.25);

    CHECK_THROWS_AS(corrected_rr({-1.0, {}}), Error);
    CHECK_THROWS_AS(corrected_rr({0.0, {}}), Error);
}

TEST_CASE("all three corrections multiply the base by at least 44 * 44/13") {
    const RationalInterval ratio = correction_ratio(builtin_corrections());
    CHECK(ratio.lo == Rational::of(1936, 13));
    CHECK(ratio.hi == Rational::of(44 * 44 * 46, 13 * 7));

    const Interval corrected = corrected_rr({0.001, builtin_corrections()});
    const double expected_lo = 0.001 * 44.0 * (44.0 / 13.0);
    CHECK(corrected.lo == doctest::Approx(expected_lo).epsilon(1e-6));
    CHECK(corrected.lo >= 0.1489);
    CHECK(corrected.hi == doctest::Approx(0.001 * (44.0 * 44.0 * 46.0) / (13.0 * 7.0)).epsilon(1e-9));
}

TEST_CASE("bias removal never shrinks the value when corrections dominate") {
    // every built-in correction interval sits at or above the applied value
    for (double base : {1e-6, 0.001, 0.5, 1.0}) {
        const Interval corrected = corrected_rr({base, builtin_corrections()});
        CHECK(corrected.lo >= base);
        CHECK(corrected.hi >= corrected.lo);
    }
}

TEST_CASE("factor validation catches malformed inputs") {
    RRFactor bad{"b", Rational::of(3, 2), {Rational::of(1, 1), Rational::of(1, 1)}};
    CHECK(!validate_factor(bad).empty());  // value above 1

    RRFactor inverted{"i", Rational::of(1, 2), {Rational::of(1, 1), Rational::of(1, 2)}};
    CHECK(!validate_factor(inverted).empty());

    RRFactor above{"a", Rational::of(1, 2), {Rational::of(1, 4), Rational::of(1, 3)}};
    CHECK(!validate_factor(above).empty());  // value exceeds the upper bound

    RRFactor zero{"z", Rational::of(0, 1), {Rational::of(1, 1), Rational::of(1, 1)}};
    CHECK(!validate_factor(zero).empty());
}
