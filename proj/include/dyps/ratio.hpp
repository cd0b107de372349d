#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <stdexcept>

namespace dyps {

/// Exact rational number in reduced form with a positive denominator.
///
/// Used for utilizations, coverage ratios and the interference bound so that
/// comparisons such as "sum of utilizations <= 1" never go through floating
/// point. Products and sums are carried out in 128-bit intermediates and
/// rejected if the reduced result does not fit back into 64 bits.
class Ratio {
public:
    constexpr Ratio() = default;
    Ratio(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Smallest integer >= this value.
    std::int64_t ceil() const;

    friend Ratio operator+(const Ratio& a, const Ratio& b);
    friend Ratio operator-(const Ratio& a, const Ratio& b);
    friend Ratio operator*(const Ratio& a, const Ratio& b);
    friend Ratio operator/(const Ratio& a, const Ratio& b);

    Ratio& operator+=(const Ratio& o) { return *this = *this + o; }

    friend bool operator==(const Ratio& a, const Ratio& b) = default;
    friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

private:
    static Ratio from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Ratio& r);

}  // namespace dyps
