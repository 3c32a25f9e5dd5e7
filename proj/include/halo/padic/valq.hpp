#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace halo::padic {

// Rational valuation with a distinguished +infinity.
class ValQ {
public:
    ValQ() = default;
    ValQ(std::int64_t num, std::int64_t den = 1);

    static ValQ infinity();

    bool is_infinite() const { return inf_; }
    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    ValQ operator+(const ValQ& o) const;
    ValQ operator-(const ValQ& o) const;  // throws if o is infinite
    ValQ operator-() const;
    ValQ operator*(const ValQ& o) const;
    ValQ operator*(std::int64_t k) const;
    ValQ operator/(std::int64_t k) const;
    ValQ& operator+=(const ValQ& o) { return *this = *this + o; }

    std::strong_ordering operator<=>(const ValQ& o) const;
    bool operator==(const ValQ& o) const;

    std::int64_t floor() const;
    std::int64_t ceil() const;
    double to_double() const;
    // "3/2", "2", "inf"
    std::string str() const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    bool inf_ = false;
};

ValQ min(const ValQ& a, const ValQ& b);
ValQ max(const ValQ& a, const ValQ& b);

// A valuation that may only be known as a lower bound.
struct PadicVal {
    ValQ value;
    bool exact = true;

    bool at_least(const ValQ& bound) const { return value >= bound; }
    std::string str() const { return exact ? value.str() : ">=" + value.str(); }
};

}  // namespace halo::padic
