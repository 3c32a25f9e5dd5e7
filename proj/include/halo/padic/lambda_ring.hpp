#pragma once

#include <memory>
#include <vector>

#include "halo/padic/padic_element.hpp"

namespace halo::padic {

// O_E[[X]] / (p^N, X^Mx). An element is a flat array of Mx*e residues mod p^N,
// index m*e + i holding the coefficient of X^m pi^i.
class LambdaRing {
public:
    LambdaRing(FieldPtr E, int prec_vp, int x_trunc);

    const FieldPtr& field() const { return E_; }
    int prime() const { return E_->prime(); }
    int ram_index() const { return e_; }
    int precision() const { return N_; }
    int x_trunc() const { return Mx_; }
    std::size_t width() const { return width_; }
    u64 modulus() const { return mod_; }
    // pi^e = sum r_i pi^i, reduced mod p^N
    const std::vector<u64>& reduction() const { return red_; }
    // multiplication needs products to fit the 128-bit accumulators
    bool fast_mul_ok() const { return fast_; }

    void mul(const u64* a, const u64* b, u64* out) const;
    void add(const u64* a, const u64* b, u64* out) const;
    void sub(const u64* a, const u64* b, u64* out) const;

    // b_m as an element of E at precision N
    PadicElement coefficient(const u64* a, int m) const;
    // pi-adic valuation of b_m, e*N when b_m = 0 mod p^N
    int coeff_val_pi(const u64* a, int m) const;
    // sum_m b_m z^m in the field of z; precision capped by the X-truncation tail
    PadicElement evaluate(const u64* a, const PadicElement& z) const;

    // pi-adic coefficients of an integral element of E (or of a subfield) mod p^N
    std::vector<u64> lift(const PadicElement& x) const;

private:
    FieldPtr E_;
    int e_;
    int N_;
    int Mx_;
    std::size_t width_;
    u64 mod_;
    bool fast_;
    std::vector<u64> red_;
};

using LambdaRingPtr = std::shared_ptr<const LambdaRing>;

class LambdaElem {
public:
    LambdaElem() = default;
    explicit LambdaElem(const LambdaRing* r) : ring_(r), c_(r->width(), 0) {}
    static LambdaElem constant(const LambdaRing* r, const PadicElement& x);
    static LambdaElem from_int(const LambdaRing* r, std::int64_t n);
    // (1 + X)^a for a in Z_p
    static LambdaElem one_plus_x_pow(const LambdaRing* r, const PadicElement& a);

    const LambdaRing* ring() const { return ring_; }
    const std::vector<u64>& data() const { return c_; }
    std::vector<u64>& data() { return c_; }
    bool is_zero() const;

    LambdaElem operator+(const LambdaElem& o) const;
    LambdaElem operator-(const LambdaElem& o) const;
    LambdaElem operator*(const LambdaElem& o) const;
    LambdaElem& operator+=(const LambdaElem& o);

    PadicElement coefficient(int m) const { return ring_->coefficient(c_.data(), m); }
    int coeff_val_pi(int m) const { return ring_->coeff_val_pi(c_.data(), m); }
    PadicElement evaluate(const PadicElement& z) const { return ring_->evaluate(c_.data(), z); }

    // min_m (val_pi(b_m) + m); exact == false means only a lower bound is known
    struct Weighted {
        int value;
        bool exact;
    };
    Weighted weighted_valuation() const;

private:
    const LambdaRing* ring_ = nullptr;
    std::vector<u64> c_;
};

enum class BoundCheck { Holds, Violated };

// checks min_m (val_pi(b_m) + m) >= lambda as far as precision allows:
// every b_m with m < lambda must vanish modulo pi^{min(lambda - m, e N)}
BoundCheck check_weighted_bound(const LambdaElem& c, long lambda);
// whether the check above decided every coefficient (no coefficient capped by precision)
bool weighted_bound_resolved(const LambdaElem& c, long lambda);

}  // namespace halo::padic
