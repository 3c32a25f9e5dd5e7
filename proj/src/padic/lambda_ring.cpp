#include "halo/padic/lambda_ring.hpp"

#include <algorithm>

namespace halo::padic {

LambdaRing::LambdaRing(FieldPtr E, int prec_vp, int x_trunc)
    : E_(std::move(E)), e_(E_->ram_index()), N_(prec_vp), Mx_(x_trunc) {
    if (N_ < 1 || N_ > E_->cap())
        throw std::invalid_argument("Lambda precision must lie in [1, " + std::to_string(E_->cap()) + "]");
    if (Mx_ < 1) throw std::invalid_argument("X-truncation must be >= 1");
    width_ = static_cast<std::size_t>(Mx_) * static_cast<std::size_t>(e_);
    mod_ = E_->pow_p(N_);
    fast_ = mod_ < (static_cast<u64>(1) << 56) && width_ <= (static_cast<std::size_t>(1) << 14);
    red_.resize(static_cast<std::size_t>(e_));
    for (int i = 0; i < e_; ++i) red_[static_cast<std::size_t>(i)] = E_->pi_power_e()[static_cast<std::size_t>(i)] % mod_;
}

void LambdaRing::mul(const u64* a, const u64* b, u64* out) const {
    if (!fast_) throw PrecisionError("Lambda multiplication needs p^N < 2^56");
    const auto e = static_cast<std::size_t>(e_);
    const auto Mx = static_cast<std::size_t>(Mx_);
    if (e == 1) {
        std::vector<u128> acc(Mx, 0);
        for (std::size_t m1 = 0; m1 < Mx; ++m1) {
            if (a[m1] == 0) continue;
            const u128 av = a[m1];
            for (std::size_t m2 = 0; m1 + m2 < Mx; ++m2) acc[m1 + m2] += av * b[m2];
        }
        for (std::size_t m = 0; m < Mx; ++m) out[m] = static_cast<u64>(acc[m] % mod_);
        return;
    }
    const std::size_t s = 2 * e - 1;
    std::vector<u128> acc(Mx * s, 0);
    for (std::size_t m1 = 0; m1 < Mx; ++m1)
        for (std::size_t i1 = 0; i1 < e; ++i1) {
            const u128 av = a[m1 * e + i1];
            if (av == 0) continue;
            for (std::size_t m2 = 0; m1 + m2 < Mx; ++m2) {
                u128* dst = &acc[(m1 + m2) * s + i1];
                const u64* src = b + m2 * e;
                for (std::size_t i2 = 0; i2 < e; ++i2) dst[i2] += av * src[i2];
            }
        }
    std::vector<u64> slot(s);
    for (std::size_t m = 0; m < Mx; ++m) {
        for (std::size_t k = 0; k < s; ++k) slot[k] = static_cast<u64>(acc[m * s + k] % mod_);
        for (std::size_t k = s - 1; k >= e; --k) {
            const u64 ck = slot[k];
            if (ck == 0) continue;
            for (std::size_t i = 0; i < e; ++i)
                if (red_[i]) slot[k - e + i] = mod::add(slot[k - e + i], mod::mul(ck, red_[i], mod_), mod_);
        }
        for (std::size_t i = 0; i < e; ++i) out[m * e + i] = slot[i];
    }
}

void LambdaRing::add(const u64* a, const u64* b, u64* out) const {
    for (std::size_t i = 0; i < width_; ++i) out[i] = mod::add(a[i], b[i], mod_);
}

void LambdaRing::sub(const u64* a, const u64* b, u64* out) const {
    for (std::size_t i = 0; i < width_; ++i) out[i] = mod::sub(a[i], b[i], mod_);
}

PadicElement LambdaRing::coefficient(const u64* a, int m) const {
    const auto e = static_cast<std::size_t>(e_);
    std::vector<u64> y(a + static_cast<std::size_t>(m) * e, a + (static_cast<std::size_t>(m) + 1) * e);
    return PadicElement::from_raw(E_, std::move(y), 0, e_ * N_);
}

int LambdaRing::coeff_val_pi(const u64* a, int m) const {
    int best = e_ * N_;
    for (int i = 0; i < e_; ++i) {
        const u64 x = a[static_cast<std::size_t>(m * e_ + i)];
        if (x != 0) best = std::min(best, e_ * mod::vp(x, prime()) + i);
    }
    return best;
}

PadicElement LambdaRing::evaluate(const u64* a, const PadicElement& z) const {
    const auto& F = z.field();
    if (!E_->embeds_into(*F)) throw std::invalid_argument("evaluation point does not lie over " + E_->describe());
    PadicElement sum(F);
    PadicElement zp = PadicElement::one(F);
    for (int m = 0; m < Mx_; ++m) {
        sum += coefficient(a, m).embed(F) * zp;
        if (m + 1 < Mx_) zp = zp * z;
    }
    const long tail = static_cast<long>(Mx_) * z.valuation_pi();
    return sum.with_precision_pi(static_cast<int>(std::min<long>(tail, sum.precision_pi())));
}

std::vector<u64> LambdaRing::lift(const PadicElement& x) const {
    PadicElement y = x.field() == E_ ? x : x.embed(E_);
    if (y.precision_pi() < e_ * N_)
        throw PrecisionError("value known only to " + y.precision().str() + ", Lambda needs " + std::to_string(N_));
    auto c = y.integral_coeffs();
    for (auto& v : c) v %= mod_;
    return c;
}

LambdaElem LambdaElem::constant(const LambdaRing* r, const PadicElement& x) {
    LambdaElem out(r);
    auto c = r->lift(x);
    std::copy(c.begin(), c.end(), out.c_.begin());
    return out;
}

LambdaElem LambdaElem::from_int(const LambdaRing* r, std::int64_t n) {
    LambdaElem out(r);
    out.c_[0] = mod::from_signed(n, r->modulus());
    return out;
}

LambdaElem LambdaElem::one_plus_x_pow(const LambdaRing* r, const PadicElement& a) {
    LambdaElem out(r);
    auto bc = binom_coeffs(a, r->x_trunc());
    const auto e = static_cast<std::size_t>(r->ram_index());
    for (std::size_t m = 0; m < bc.size(); ++m) {
        auto c = r->lift(bc[m]);
        std::copy(c.begin(), c.end(), out.c_.begin() + static_cast<std::ptrdiff_t>(m * e));
    }
    return out;
}

bool LambdaElem::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

LambdaElem LambdaElem::operator+(const LambdaElem& o) const {
    LambdaElem r(ring_);
    ring_->add(c_.data(), o.c_.data(), r.c_.data());
    return r;
}

LambdaElem LambdaElem::operator-(const LambdaElem& o) const {
    LambdaElem r(ring_);
    ring_->sub(c_.data(), o.c_.data(), r.c_.data());
    return r;
}

LambdaElem LambdaElem::operator*(const LambdaElem& o) const {
    LambdaElem r(ring_);
    ring_->mul(c_.data(), o.c_.data(), r.c_.data());
    return r;
}

LambdaElem& LambdaElem::operator+=(const LambdaElem& o) {
    ring_->add(c_.data(), o.c_.data(), c_.data());
    return *this;
}

LambdaElem::Weighted LambdaElem::weighted_valuation() const {
    const int cap = ring_->ram_index() * ring_->precision();
    Weighted w{cap + 0, false};
    bool first = true;
    for (int m = 0; m < ring_->x_trunc(); ++m) {
        const int v = coeff_val_pi(m);
        const int s = v + m;
        if (first || s < w.value || (s == w.value && v < cap && !w.exact)) {
            w = {s, v < cap};
            first = false;
        }
    }
    return w;
}

BoundCheck check_weighted_bound(const LambdaElem& c, long lambda) {
    const LambdaRing& r = *c.ring();
    const long cap = static_cast<long>(r.ram_index()) * r.precision();
    const long top = std::min<long>(r.x_trunc(), lambda);
    for (long m = 0; m < top; ++m) {
        const long need = std::min(lambda - m, cap);
        if (c.coeff_val_pi(static_cast<int>(m)) < need) return BoundCheck::Violated;
    }
    return BoundCheck::Holds;
}

bool weighted_bound_resolved(const LambdaElem& c, long lambda) {
    const LambdaRing& r = *c.ring();
    return lambda <= static_cast<long>(r.ram_index()) * r.precision();
}

}  // namespace halo::padic
