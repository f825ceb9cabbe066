#pragma once

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gametree {

/// Exact decimal value with 6 fractional digits, stored as a scaled integer.
/// All search values, terminal evaluations and tie-break perturbations use
/// this type so that comparisons are total and bit-identical across platforms.
class FixedPoint {
public:
    static constexpr std::int64_t kScale = 1'000'000;

    constexpr FixedPoint() = default;

    static constexpr FixedPoint from_raw(std::int64_t raw) {
        FixedPoint f;
        f.raw_ = raw;
        return f;
    }

    /// Whole units, e.g. from_units(-1) == -1.000000.
    static constexpr FixedPoint from_units(std::int64_t units) {
        return from_raw(units * kScale);
    }

    /// Accepts a double only if it is exactly the nearest double to some
    /// raw/10^6; rejects values that carry more precision than the grid.
    static std::optional<FixedPoint> from_double_exact(double v) {
        if (!std::isfinite(v)) return std::nullopt;
        double scaled = v * static_cast<double>(kScale);
        if (scaled > 9.0e15 || scaled < -9.0e15) return std::nullopt;
        auto raw = static_cast<std::int64_t>(std::llround(scaled));
        if (static_cast<double>(raw) / static_cast<double>(kScale) != v) return std::nullopt;
        return from_raw(raw);
    }

    /// Parses a plain decimal literal ("-0.25", "1", "0.000001").
    /// More than 6 fractional digits, or any other trailing text, fails.
    static std::optional<FixedPoint> parse(std::string_view text);

    constexpr std::int64_t raw() const { return raw_; }
    double to_double() const { return static_cast<double>(raw_) / static_cast<double>(kScale); }

    /// Canonical text form: sign, integer part, '.', exactly 6 digits.
    std::string to_string() const;

    friend constexpr FixedPoint operator+(FixedPoint a, FixedPoint b) {
        return from_raw(a.raw_ + b.raw_);
    }
    friend constexpr FixedPoint operator-(FixedPoint a, FixedPoint b) {
        return from_raw(a.raw_ - b.raw_);
    }
    constexpr FixedPoint operator-() const { return from_raw(-raw_); }
    friend constexpr FixedPoint operator*(FixedPoint a, std::int64_t k) {
        return from_raw(a.raw_ * k);
    }

    friend constexpr auto operator<=>(FixedPoint a, FixedPoint b) = default;

private:
    std::int64_t raw_ = 0;
};

inline std::optional<FixedPoint> FixedPoint::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool neg = false;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
        neg = text[0] == '-';
        i = 1;
    }
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
    std::int64_t units = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        units = units * 10 + (text[i] - '0');
        if (units > 9'000'000'000'000LL) return std::nullopt;
        ++i;
    }
    std::int64_t frac = 0;
    int frac_digits = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (++frac_digits > 6) return std::nullopt;
            frac = frac * 10 + (text[i] - '0');
            ++i;
        }
    }
    if (i != text.size()) return std::nullopt;
    for (; frac_digits < 6; ++frac_digits) frac *= 10;
    std::int64_t raw = units * FixedPoint::kScale + frac;
    return FixedPoint::from_raw(neg ? -raw : raw);
}

inline std::string FixedPoint::to_string() const {
    std::int64_t r = raw_;
    std::string out;
    if (r < 0) {
        out.push_back('-');
        r = -r;
    }
    out += std::to_string(r / kScale);
    out.push_back('.');
    std::string frac = std::to_string(r % kScale);
    out.append(6 - frac.size(), '0');
    out += frac;
    return out;
}

}  // namespace gametree
