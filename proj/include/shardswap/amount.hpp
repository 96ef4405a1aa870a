#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "shardswap/types.hpp"

namespace shardswap {

using Int128 = __int128;
using Int256 = boost::multiprecision::int256_t;

// Decimal fixed-point quantity with 12 fractional digits on an exact
// integer backing. Every division truncates toward zero, so computed
// swap outputs never exceed their exact rational value: rounding always
// favors the pool. Magnitude is capped at 10^15 whole units, which keeps
// every intermediate product of the quote formula inside 256 bits.
class Amount {
public:
    static constexpr int fraction_digits = 12;
    static constexpr std::int64_t scale = 1'000'000'000'000;
    static constexpr long long max_units = 1'000'000'000'000'000; // 10^15

    constexpr Amount() = default;
    explicit Amount(long long whole_units) {
        if (whole_units > max_units || whole_units < -max_units)
            throw Error("amount out of range");
        raw_ = Int128(whole_units) * scale;
    }

    static Amount from_raw(Int128 raw) {
        if (raw > max_raw() || raw < -max_raw())
            throw Error("amount out of range");
        Amount a;
        a.raw_ = raw;
        return a;
    }

    // Parses a plain decimal string: [-]digits[.digits], at most 12
    // fractional digits. No exponents, no rounding.
    static Amount parse(std::string_view text);

    Int128 raw() const { return raw_; }
    bool is_zero() const { return raw_ == 0; }
    bool is_positive() const { return raw_ > 0; }
    bool is_negative() const { return raw_ < 0; }

    // Canonical decimal form, fraction trimmed of trailing zeros.
    std::string str() const;
    // Two-decimal display form, rounded half away from zero.
    std::string str2() const;

    // trunc(this * factor) where factor is another fixed-point value.
    Amount scaled_by(Amount factor) const {
        Int256 p = Int256(raw_) * Int256(factor.raw_) / scale;
        if (p > Int256(max_raw()) || p < -Int256(max_raw()))
            throw Error("amount out of range");
        return from_raw(p.convert_to<Int128>());
    }

    friend Amount operator+(Amount a, Amount b) { return from_raw(a.raw_ + b.raw_); }
    friend Amount operator-(Amount a, Amount b) { return from_raw(a.raw_ - b.raw_); }
    friend Amount operator-(Amount a) { return from_raw(-a.raw_); }
    Amount& operator+=(Amount b) { return *this = *this + b; }
    Amount& operator-=(Amount b) { return *this = *this - b; }

    friend bool operator==(Amount a, Amount b) { return a.raw_ == b.raw_; }
    friend std::strong_ordering operator<=>(Amount a, Amount b) {
        if (a.raw_ < b.raw_)
            return std::strong_ordering::less;
        if (a.raw_ > b.raw_)
            return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    static Amount min(Amount a, Amount b) { return a < b ? a : b; }

    static constexpr Int128 max_raw() { return Int128(1'000'000'000'000'000) * scale; }

private:
    Int128 raw_ = 0;
};

inline Amount Amount::parse(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty())
        throw Error("bad amount '" + std::string(text) + "'");

    Int128 raw = 0;
    std::size_t i = 0;
    bool any_digit = false;
    for (; i < s.size() && s[i] != '.'; ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw Error("bad amount '" + std::string(text) + "'");
        raw = raw * 10 + (s[i] - '0');
        if (raw > max_units)
            throw Error("amount out of range: '" + std::string(text) + "'");
        any_digit = true;
    }
    raw *= scale;
    if (i < s.size()) { // fraction part
        ++i;
        std::int64_t frac = 0;
        int digits = 0;
        for (; i < s.size(); ++i, ++digits) {
            if (s[i] < '0' || s[i] > '9')
                throw Error("bad amount '" + std::string(text) + "'");
            if (digits >= fraction_digits)
                throw Error("amount '" + std::string(text) + "' has more than 12 fractional digits");
            frac = frac * 10 + (s[i] - '0');
            any_digit = true;
        }
        for (; digits < fraction_digits; ++digits)
            frac *= 10;
        raw += frac;
    }
    if (!any_digit)
        throw Error("bad amount '" + std::string(text) + "'");
    return from_raw(negative ? -raw : raw);
}

inline std::string Amount::str() const {
    Int128 v = raw_ < 0 ? -raw_ : raw_;
    Int128 whole = v / scale;
    std::int64_t frac = static_cast<std::int64_t>(v % scale);

    std::string digits;
    if (whole == 0)
        digits = "0";
    while (whole > 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
        whole /= 10;
    }
    std::string out = (raw_ < 0 ? "-" : "") + digits;
    if (frac != 0) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%012lld", static_cast<long long>(frac));
        std::string f(buf);
        while (!f.empty() && f.back() == '0')
            f.pop_back();
        out += "." + f;
    }
    return out;
}

inline std::string Amount::str2() const {
    Int128 v = raw_ < 0 ? -raw_ : raw_;
    constexpr std::int64_t unit = scale / 100;
    Int128 cents = (v + unit / 2) / unit;
    Int128 whole = cents / 100;
    int rem = static_cast<int>(cents % 100);

    std::string digits;
    if (whole == 0)
        digits = "0";
    while (whole > 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
        whole /= 10;
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, ".%02d", rem);
    return (raw_ < 0 && cents != 0 ? "-" : "") + digits + buf;
}

// Retained-trade fraction; the swap fee is (1 - gamma). gamma = 1 is the
// fee-free protocol.
struct FeePolicy {
    Amount gamma = Amount(1);

    FeePolicy() = default;
    explicit FeePolicy(Amount g) : gamma(g) {
        if (!(g > Amount(0)) || g > Amount(1))
            throw Error("fee gamma must be in (0, 1]");
    }
};

// Constant-product quote: out = reserve_out - (reserve_in * reserve_out)
//                               / (reserve_in + gamma * delta_in),
// evaluated as one exact rational and truncated toward zero at the 12th
// fractional digit.
inline Amount quote(Amount reserve_in, Amount reserve_out, Amount delta_in,
                    const FeePolicy& fee = FeePolicy()) {
    if (!reserve_in.is_positive() || !reserve_out.is_positive())
        throw Error("quote: reserves must be positive");
    if (delta_in.is_negative())
        throw Error("quote: negative input");

    Int256 num = Int256(reserve_in.raw()) * Int256(reserve_out.raw()) * Amount::scale;
    Int256 den = Int256(reserve_in.raw()) * Amount::scale
               + Int256(fee.gamma.raw()) * Int256(delta_in.raw());
    Int256 withheld = (num + den - 1) / den; // ceil, so the output truncates
    Int256 out = Int256(reserve_out.raw()) - withheld;
    return Amount::from_raw(out.convert_to<Int128>());
}

} // namespace shardswap
