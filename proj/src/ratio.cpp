#include "dyps/ratio.hpp"

#include <limits>
#include <ostream>

namespace dyps {

namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b)
{
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den)
{
    *this = from_wide(num, den);
}

Ratio Ratio::from_wide(__int128 num, __int128 den)
{
    if (den == 0)
        throw std::domain_error("Ratio: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    constexpr auto lo = std::numeric_limits<std::int64_t>::min();
    constexpr auto hi = std::numeric_limits<std::int64_t>::max();
    if (num < lo || num > hi || den > hi)
        throw std::overflow_error("Ratio: value does not fit in 64 bits");
    Ratio r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

std::int64_t Ratio::ceil() const
{
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0)
        ++q;
    return q;
}

Ratio operator+(const Ratio& a, const Ratio& b)
{
    return Ratio::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                            static_cast<__int128>(a.den_) * b.den_);
}

Ratio operator-(const Ratio& a, const Ratio& b)
{
    return Ratio::from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                            static_cast<__int128>(a.den_) * b.den_);
}

Ratio operator*(const Ratio& a, const Ratio& b)
{
    return Ratio::from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Ratio operator/(const Ratio& a, const Ratio& b)
{
    return Ratio::from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b)
{
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (lhs > rhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Ratio& r)
{
    os << r.num();
    if (r.den() != 1)
        os << '/' << r.den();
    return os;
}

}  // namespace dyps
