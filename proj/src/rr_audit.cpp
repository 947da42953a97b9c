#include "talpiot/rr_audit.hpp"

#include <charconv>
#include <numeric>

namespace talpiot {

namespace {

std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw Error("bad integer '" + std::string(text) + "' in rational");
    return value;
}

}  // namespace

Rational Rational::of(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational{num, den};
}

Rational Rational::parse(std::string_view text) {
    const std::size_t slash = text.find('/');
    if (slash == std::string_view::npos) return of(parse_int(text), 1);
    return of(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

Rational Rational::operator*(const Rational& o) const {
    // cross-reduce first so large-but-cancelling products survive
    const std::int64_t g1 = std::gcd(num < 0 ? -num : num, o.den);
    const std::int64_t g2 = std::gcd(o.num < 0 ? -o.num : o.num, den);
    const __int128 rn = static_cast<__int128>(num / g1) * (o.num / g2);
    const __int128 rd = static_cast<__int128>(den / g2) * (o.den / g1);
    const __int128 limit = static_cast<__int128>(INT64_MAX);
    if (rn > limit || rn < -limit || rd > limit)
        throw Error("rational product overflows 64-bit arithmetic");
    return of(static_cast<std::int64_t>(rn), static_cast<std::int64_t>(rd));
}

std::string Rational::to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

std::vector<std::string> validate_factor(const RRFactor& f) {
    std::vector<std::string> problems;
    const double v = f.value.to_double();
    if (!(v > 0.0 && v <= 1.0))
        problems.push_back("factor '" + f.label + "': value " + f.value.to_string() +
                           " must lie in (0, 1]");
    const double lo = f.correction.lo.to_double();
    const double hi = f.correction.hi.to_double();
    if (lo > hi)
        problems.push_back("factor '" + f.label + "': correction interval is inverted");
    if (!(lo > 0.0))
        problems.push_back("factor '" + f.label + "': correction lower bound must be positive");
    if (v > hi)
        problems.push_back("factor '" + f.label +
                           "': value exceeds the correction upper bound");
    return problems;
}

std::vector<RRFactor> builtin_corrections() {
    return {
        {"Mariamenou read as Magdalene's appellation", Rational::of(1, 44),
         {Rational::of(1, 1), Rational::of(1, 1)}},
        {"mother's name restricted to the Marya rendition", Rational::of(13, 44),
         {Rational::of(1, 1), Rational::of(1, 1)}},
        {"Yoseh rendition of the second brother", Rational::of(7, 46),
         {Rational::of(7, 46), Rational::of(1, 1)}},
    };
}

RationalInterval correction_ratio(const std::vector<RRFactor>& factors) {
    RationalInterval ratio{Rational::of(1, 1), Rational::of(1, 1)};
    for (const RRFactor& f : factors) {
        std::vector<std::string> problems = validate_factor(f);
        if (!problems.empty()) throw ValidationError(std::move(problems));
        const Rational inverse = Rational::of(f.value.den, f.value.num);
        ratio.lo = ratio.lo * f.correction.lo * inverse;
        ratio.hi = ratio.hi * f.correction.hi * inverse;
    }
    return ratio;
}

Interval corrected_rr(const RRValue& rr) {
    if (!(rr.base > 0.0)) throw Error("base RR must be positive");
    const RationalInterval ratio = correction_ratio(rr.factors);
    return {rr.base * ratio.lo.to_double(), rr.base * ratio.hi.to_double()};
}

}  // namespace talpiot
