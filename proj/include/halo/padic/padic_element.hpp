#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "halo/padic/field.hpp"
#include "halo/padic/valq.hpp"

namespace halo::padic {

// x = p^shift * (sum_i y_i pi^i), known modulo pi^prec (absolute, in pi-units).
class PadicElement {
public:
    PadicElement() = default;
    explicit PadicElement(FieldPtr f);  // zero at full storage precision

    static PadicElement from_int(FieldPtr f, std::int64_t n, std::optional<int> prec_vp = std::nullopt);
    static PadicElement from_coeffs(FieldPtr f, const std::vector<std::int64_t>& c,
                                    std::optional<int> prec_vp = std::nullopt);
    // raw coefficients already reduced mod p^cap, absolute precision in pi-units
    static PadicElement from_raw(FieldPtr f, std::vector<u64> y, int shift, int prec_pi);
    static PadicElement from_rational(FieldPtr f, std::int64_t num, std::int64_t den);
    static PadicElement uniformizer(FieldPtr f);
    static PadicElement one(FieldPtr f) { return from_int(std::move(f), 1); }

    const FieldPtr& field() const { return f_; }
    int prime() const { return f_->prime(); }
    int ram_index() const { return f_->ram_index(); }

    PadicVal valuation() const;
    // valuation in pi-units, capped at the precision (lower bound when not exact)
    int valuation_pi() const;
    ValQ precision() const { return ValQ(prec_, f_->ram_index()); }
    int precision_pi() const { return prec_; }
    bool is_zero() const { return !valuation().exact; }
    bool is_unit() const;

    PadicElement with_precision_pi(int prec_pi) const;
    PadicElement with_precision(int prec_vp) const { return with_precision_pi(prec_vp * ram_index()); }

    PadicElement operator+(const PadicElement& o) const;
    PadicElement operator-(const PadicElement& o) const;
    PadicElement operator-() const;
    PadicElement operator*(const PadicElement& o) const;
    PadicElement operator/(const PadicElement& o) const;
    PadicElement& operator+=(const PadicElement& o) { return *this = *this + o; }
    PadicElement& operator-=(const PadicElement& o) { return *this = *this - o; }
    PadicElement& operator*=(const PadicElement& o) { return *this = *this * o; }
    PadicElement pow(std::int64_t n) const;
    PadicElement inverse() const;

    // equality modulo the smaller of the two precisions
    bool equals(const PadicElement& o) const { return (*this - o).is_zero(); }

    // image under the canonical embedding into a larger field
    PadicElement embed(const FieldPtr& target) const;

    // integral coefficients y_i * p^shift mod p^cap; throws on negative valuation
    std::vector<u64> integral_coeffs() const;
    // for elements of Z_p: the representative in [0, p^cap)
    u64 to_u64() const;
    // signed representative in (-p^n/2, p^n/2] modulo p^n for n = floor(precision)
    std::vector<std::int64_t> balanced_coeffs(int n_vp) const;

    int shift() const { return shift_; }
    const std::vector<u64>& raw() const { return y_; }
    std::string str() const;

private:
    void check_same(const PadicElement& o) const;

    FieldPtr f_;
    std::vector<u64> y_;
    int shift_ = 0;
    int prec_ = 0;
};

// p-adic logarithm of a 1-unit (u = 1 mod p)
PadicElement plog(const PadicElement& u);
// exponential of x with v_p(x) >= 1
PadicElement pexp(const PadicElement& x);
// exp(p) in Z_p
PadicElement exp_p(int p);
// Teichmuller representative of a unit of Z_p
PadicElement teichmuller(const PadicElement& t);
// t = teichmuller(t) * one_unit_part(t)
PadicElement one_unit_part(const PadicElement& t);
// base^a for a in Z_p and a base with v_p(base - 1) > 0
PadicElement unit_pow(const PadicElement& base, const PadicElement& a);
// binomial coefficients C(a, j), j < count, for a in Z_p
std::vector<PadicElement> binom_coeffs(const PadicElement& a, int count);

}  // namespace halo::padic
