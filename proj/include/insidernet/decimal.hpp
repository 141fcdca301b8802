#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace insidernet {

/// Non-negative fixed-point decimal that remembers its written scale, so
/// "9.50" is re-emitted as "9.50".
class Decimal {
public:
    static constexpr int kMaxScale = 9;

    constexpr Decimal() = default;
    constexpr Decimal(std::int64_t mantissa, int scale) : mantissa_(mantissa), scale_(scale) {}

    static std::optional<Decimal> parse(std::string_view s) {
        if (s.empty())
            return std::nullopt;
        std::int64_t mantissa = 0;
        int scale = 0;
        bool seen_point = false;
        bool seen_digit = false;
        for (char c : s) {
            if (c == '.') {
                if (seen_point)
                    return std::nullopt;
                seen_point = true;
                continue;
            }
            if (c < '0' || c > '9')
                return std::nullopt;
            if (mantissa > (INT64_MAX - 9) / 10)
                return std::nullopt;
            mantissa = mantissa * 10 + (c - '0');
            seen_digit = true;
            if (seen_point && ++scale > kMaxScale)
                return std::nullopt;
        }
        if (!seen_digit || (seen_point && scale == 0))
            return std::nullopt;
        return Decimal(mantissa, scale);
    }

    /// Rounds to `scale` fractional digits (half away from zero).
    static Decimal from_double(double v, int scale) {
        double p = 1.0;
        for (int i = 0; i < scale; ++i)
            p *= 10.0;
        return Decimal(static_cast<std::int64_t>(v * p + 0.5), scale);
    }

    double to_double() const {
        double p = 1.0;
        for (int i = 0; i < scale_; ++i)
            p *= 10.0;
        return static_cast<double>(mantissa_) / p;
    }

    std::string to_string() const {
        std::string digits = std::to_string(mantissa_);
        if (scale_ == 0)
            return digits;
        if (static_cast<int>(digits.size()) <= scale_)
            digits.insert(0, static_cast<std::size_t>(scale_ - static_cast<int>(digits.size()) + 1), '0');
        digits.insert(digits.size() - static_cast<std::size_t>(scale_), 1, '.');
        return digits;
    }

    constexpr std::int64_t mantissa() const noexcept { return mantissa_; }
    constexpr int scale() const noexcept { return scale_; }
    constexpr bool is_zero() const noexcept { return mantissa_ == 0; }

    friend constexpr bool operator==(const Decimal&, const Decimal&) = default;

private:
    std::int64_t mantissa_ = 0;
    int scale_ = 0;
};

} // namespace insidernet
