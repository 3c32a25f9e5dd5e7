#include "halo/padic/valq.hpp"

#include <numeric>
#include <stdexcept>

namespace halo::padic {

ValQ::ValQ(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("ValQ: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    num_ = num / g;
    den_ = den / g;
}

ValQ ValQ::infinity() {
    ValQ v;
    v.inf_ = true;
    return v;
}

ValQ ValQ::operator+(const ValQ& o) const {
    if (inf_ || o.inf_) return infinity();
    return ValQ(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

ValQ ValQ::operator-(const ValQ& o) const {
    if (o.inf_) throw std::domain_error("ValQ: subtracting infinity");
    if (inf_) return infinity();
    return ValQ(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

ValQ ValQ::operator-() const {
    if (inf_) throw std::domain_error("ValQ: negating infinity");
    return ValQ(-num_, den_);
}

ValQ ValQ::operator*(const ValQ& o) const {
    if (inf_ || o.inf_) {
        if ((!inf_ && num_ == 0) || (!o.inf_ && o.num_ == 0))
            throw std::domain_error("ValQ: 0 * infinity");
        return infinity();
    }
    return ValQ(num_ * o.num_, den_ * o.den_);
}

ValQ ValQ::operator*(std::int64_t k) const { return *this * ValQ(k); }

ValQ ValQ::operator/(std::int64_t k) const {
    if (inf_) return infinity();
    return ValQ(num_, den_ * k);
}

std::strong_ordering ValQ::operator<=>(const ValQ& o) const {
    if (inf_ || o.inf_) {
        if (inf_ && o.inf_) return std::strong_ordering::equal;
        return inf_ ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    __int128 l = static_cast<__int128>(num_) * o.den_;
    __int128 r = static_cast<__int128>(o.num_) * den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

bool ValQ::operator==(const ValQ& o) const { return (*this <=> o) == std::strong_ordering::equal; }

std::int64_t ValQ::floor() const {
    if (inf_) throw std::domain_error("ValQ: floor of infinity");
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::int64_t ValQ::ceil() const {
    if (inf_) throw std::domain_error("ValQ: ceil of infinity");
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
}

double ValQ::to_double() const {
    if (inf_) return 1.0 / 0.0;
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string ValQ::str() const {
    if (inf_) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

ValQ min(const ValQ& a, const ValQ& b) { return b < a ? b : a; }
ValQ max(const ValQ& a, const ValQ& b) { return a < b ? b : a; }

}  // namespace halo::padic
