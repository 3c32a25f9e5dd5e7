#include "halo/padic/padic_element.hpp"

#include <algorithm>
#include <sstream>

namespace halo::padic {

namespace {

std::vector<u64> scaled(const std::vector<u64>& y, int d, const ExtensionField& f) {
    std::vector<u64> r(y.size(), 0);
    if (d >= f.cap()) return r;
    const u64 m = f.modulus();
    const u64 s = f.pow_p(d);
    for (std::size_t i = 0; i < y.size(); ++i) r[i] = mod::mul(y[i], s, m);
    return r;
}

// unit u (val_pi(u) == 0) inverted mod p^cap
std::vector<u64> unit_inverse(const std::vector<u64>& u, const ExtensionField& f) {
    const u64 m = f.modulus();
    const auto e = u.size();
    std::vector<u64> x(e, 0);
    x[0] = mod::inv(u[0], m);
    if (e == 1) return x;
    // Newton: x <- x (2 - u x); pi-adic error squares each round
    int need = f.cap() * f.ram_index();
    std::vector<u64> ux(e), t(e);
    for (int acc = 1; acc < need; acc *= 2) {
        f.mul(u, x, ux);
        for (std::size_t i = 0; i < e; ++i) ux[i] = mod::sub(0, ux[i], m);
        ux[0] = mod::add(ux[0], 2, m);
        f.mul(x, ux, t);
        x = t;
    }
    return x;
}

}  // namespace

PadicElement::PadicElement(FieldPtr f) : f_(std::move(f)) {
    y_.assign(static_cast<std::size_t>(f_->ram_index()), 0);
    prec_ = f_->ram_index() * f_->cap();
}

PadicElement PadicElement::from_int(FieldPtr f, std::int64_t n, std::optional<int> prec_vp) {
    PadicElement r(std::move(f));
    const int e = r.f_->ram_index();
    const int p = r.f_->prime();
    if (n != 0) {
        int v = 0;
        while (n % p == 0) {
            n /= p;
            ++v;
        }
        r.shift_ = v;
        r.y_[0] = mod::from_signed(n, r.f_->modulus());
    }
    r.prec_ = e * (r.shift_ + r.f_->cap());
    if (prec_vp) r.prec_ = std::min(r.prec_, e * *prec_vp);
    return r;
}

PadicElement PadicElement::from_coeffs(FieldPtr f, const std::vector<std::int64_t>& c, std::optional<int> prec_vp) {
    PadicElement r(std::move(f));
    if (c.size() > r.y_.size()) throw std::invalid_argument("too many coefficients for field");
    for (std::size_t i = 0; i < c.size(); ++i) r.y_[i] = mod::from_signed(c[i], r.f_->modulus());
    if (prec_vp) r.prec_ = std::min(r.prec_, r.f_->ram_index() * *prec_vp);
    return r;
}

PadicElement PadicElement::from_raw(FieldPtr f, std::vector<u64> y, int shift, int prec_pi) {
    PadicElement r(std::move(f));
    if (y.size() != r.y_.size()) throw std::invalid_argument("from_raw: wrong coefficient count");
    const u64 m = r.f_->modulus();
    for (auto& v : y) v %= m;
    r.y_ = std::move(y);
    r.shift_ = shift;
    r.prec_ = std::min(prec_pi, r.f_->ram_index() * (shift + r.f_->cap()));
    return r;
}

PadicElement PadicElement::from_rational(FieldPtr f, std::int64_t num, std::int64_t den) {
    return from_int(f, num) / from_int(f, den);
}

PadicElement PadicElement::uniformizer(FieldPtr f) {
    if (f->ram_index() == 1) return from_int(f, f->prime());
    PadicElement r(std::move(f));
    r.y_[1] = 1;
    return r;
}

PadicVal PadicElement::valuation() const {
    const int e = f_->ram_index();
    const long v = static_cast<long>(e) * shift_ + f_->val_pi(y_);
    if (v < prec_) return {ValQ(v, e), true};
    return {ValQ(prec_, e), false};
}

int PadicElement::valuation_pi() const {
    const long v = static_cast<long>(f_->ram_index()) * shift_ + f_->val_pi(y_);
    return static_cast<int>(std::min<long>(v, prec_));
}

bool PadicElement::is_unit() const {
    auto v = valuation();
    return v.exact && v.value == ValQ(0);
}

PadicElement PadicElement::with_precision_pi(int prec_pi) const {
    PadicElement r = *this;
    r.prec_ = std::min(prec_, prec_pi);
    return r;
}

void PadicElement::check_same(const PadicElement& o) const {
    if (!f_ || !o.f_) throw std::invalid_argument("uninitialised p-adic element");
    if (f_ != o.f_) throw std::invalid_argument("field mismatch: " + f_->describe() + " vs " + o.f_->describe());
}

PadicElement PadicElement::operator+(const PadicElement& o) const {
    check_same(o);
    const int s = std::min(shift_, o.shift_);
    auto a = scaled(y_, shift_ - s, *f_);
    auto b = scaled(o.y_, o.shift_ - s, *f_);
    const u64 m = f_->modulus();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = mod::add(a[i], b[i], m);
    return from_raw(f_, std::move(a), s, std::min(prec_, o.prec_));
}

PadicElement PadicElement::operator-() const {
    PadicElement r = *this;
    const u64 m = f_->modulus();
    for (auto& v : r.y_) v = mod::sub(0, v, m);
    return r;
}

PadicElement PadicElement::operator-(const PadicElement& o) const { return *this + (-o); }

PadicElement PadicElement::operator*(const PadicElement& o) const {
    check_same(o);
    std::vector<u64> c(y_.size());
    f_->mul(y_, o.y_, c);
    const int prec = std::min(prec_ + o.valuation_pi(), o.prec_ + valuation_pi());
    return from_raw(f_, std::move(c), shift_ + o.shift_, prec);
}

PadicElement PadicElement::operator/(const PadicElement& o) const {
    check_same(o);
    auto vo = o.valuation();
    if (!vo.exact) throw PrecisionError("division by an element indistinguishable from zero at precision " + vo.value.str());
    const int e = f_->ram_index();
    const int r = f_->val_pi(o.y_);
    const int q = r / e;
    const int r0 = r % e;
    std::vector<u64> w = o.y_;
    int drop = q;
    std::vector<u64> tail(static_cast<std::size_t>(e), 0);  // pi^{e-r0}
    if (r0 > 0) {
        tail[static_cast<std::size_t>(e - r0)] = 1;
        f_->mul(w, tail, w);
        drop = q + 1;
    } else {
        tail[0] = 1;
    }
    const u64 pd = f_->pow_p(drop);
    for (auto& v : w) v /= pd;  // exact: every coefficient divisible by p^drop
    auto inv = unit_inverse(w, *f_);
    std::vector<u64> c(y_.size());
    f_->mul(y_, tail, c);
    f_->mul(c, inv, c);
    const int vo_pi = e * o.shift_ + r;
    const int shift = shift_ - o.shift_ - drop;
    int prec = std::min(prec_ - vo_pi, o.prec_ - 2 * vo_pi + valuation_pi());
    prec = std::min(prec, e * (shift + f_->cap() - drop));
    return from_raw(f_, std::move(c), shift, prec);
}

PadicElement PadicElement::inverse() const { return one(f_) / *this; }

PadicElement PadicElement::pow(std::int64_t n) const {
    if (n < 0) return inverse().pow(-n);
    PadicElement r = one(f_);
    PadicElement b = *this;
    while (n) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

PadicElement PadicElement::embed(const FieldPtr& target) const {
    if (target == f_) return *this;
    auto g = f_->image_of_pi(*target);
    const auto te = static_cast<std::size_t>(target->ram_index());
    const u64 m = target->modulus();
    std::vector<u64> acc(te, 0);
    for (std::size_t i = y_.size(); i-- > 0;) {
        target->mul(acc, g, acc);
        acc[0] = mod::add(acc[0], y_[i], m);
    }
    const int ratio = target->ram_index() / f_->ram_index();
    return from_raw(target, std::move(acc), shift_, prec_ * ratio);
}

std::vector<u64> PadicElement::integral_coeffs() const {
    if (shift_ >= 0) return scaled(y_, shift_, *f_);
    const u64 d = f_->pow_p(-shift_);
    std::vector<u64> r = y_;
    for (auto& v : r) {
        if (v % d != 0) throw std::domain_error("element has negative valuation");
        v /= d;
    }
    return r;
}

u64 PadicElement::to_u64() const {
    if (f_->ram_index() != 1) throw std::invalid_argument("to_u64 needs an element of Z_p");
    return integral_coeffs()[0];
}

std::vector<std::int64_t> PadicElement::balanced_coeffs(int n_vp) const {
    auto c = integral_coeffs();
    const u64 pn = f_->pow_p(std::min(n_vp, f_->cap()));
    std::vector<std::int64_t> r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        u64 v = c[i] % pn;
        r[i] = v > pn / 2 ? -static_cast<std::int64_t>(pn - v) : static_cast<std::int64_t>(v);
    }
    return r;
}

std::string PadicElement::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < y_.size(); ++i) os << (i ? "," : "") << y_[i];
    os << "]";
    if (shift_ != 0) os << "*p^" << shift_;
    os << " +O(pi^" << prec_ << ")";
    return os.str();
}

PadicElement plog(const PadicElement& u) {
    const auto& f = u.field();
    auto d = u - PadicElement::one(f);
    if (!d.valuation().at_least(ValQ(1))) throw std::domain_error("plog: argument is not a 1-unit");
    const int p = f->prime();
    const u64 m = f->modulus();
    auto y = d.integral_coeffs();
    for (auto& v : y) v /= static_cast<u64>(p);
    const auto e = y.size();
    std::vector<u64> sum(e, 0), ypow(e, 0);
    ypow[0] = 1;
    for (int n = 1; n < f->cap() + 8; ++n) {
        f->mul(ypow, y, ypow);
        const int vn = mod::vp(static_cast<u64>(n), p);
        const int pe = n - vn;
        if (pe >= f->cap()) continue;
        u64 unit = static_cast<u64>(n);
        for (int i = 0; i < vn; ++i) unit /= static_cast<u64>(p);
        u64 c = mod::mul(f->pow_p(pe), mod::inv(unit % m, m), m);
        if (n % 2 == 0) c = mod::sub(0, c, m);
        for (std::size_t i = 0; i < e; ++i) sum[i] = mod::add(sum[i], mod::mul(c, ypow[i], m), m);
    }
    return PadicElement::from_raw(f, std::move(sum), 0, u.precision_pi());
}

PadicElement pexp(const PadicElement& x) {
    const auto& f = x.field();
    if (!x.valuation().at_least(ValQ(1))) throw std::domain_error("pexp: argument must have valuation >= 1");
    const int p = f->prime();
    const u64 m = f->modulus();
    auto y = x.integral_coeffs();
    for (auto& v : y) v /= static_cast<u64>(p);
    const auto e = y.size();
    std::vector<u64> sum(e, 0), ypow(e, 0);
    ypow[0] = 1;
    sum[0] = 1;
    u64 fact_unit = 1;
    int fact_v = 0;
    for (int n = 1; n < 2 * f->cap() + 8; ++n) {
        f->mul(ypow, y, ypow);
        u64 k = static_cast<u64>(n);
        while (k % static_cast<u64>(p) == 0) {
            k /= static_cast<u64>(p);
            ++fact_v;
        }
        fact_unit = mod::mul(fact_unit, k % m, m);
        const int pe = n - fact_v;
        if (pe >= f->cap()) continue;
        const u64 c = mod::mul(f->pow_p(pe), mod::inv(fact_unit, m), m);
        for (std::size_t i = 0; i < e; ++i) sum[i] = mod::add(sum[i], mod::mul(c, ypow[i], m), m);
    }
    return PadicElement::from_raw(f, std::move(sum), 0, x.precision_pi());
}

PadicElement exp_p(int p) {
    auto f = ExtensionField::qp(p);
    return pexp(PadicElement::from_int(f, p));
}

PadicElement teichmuller(const PadicElement& t) {
    const auto& f = t.field();
    if (f->ram_index() != 1) throw std::invalid_argument("teichmuller: needs an element of Z_p");
    if (!t.is_unit()) throw std::domain_error("teichmuller: argument is not a unit");
    const u64 m = f->modulus();
    u64 x = t.to_u64() % static_cast<u64>(f->prime());
    for (int i = 0; i < f->cap(); ++i) x = mod::pow(x, static_cast<u64>(f->prime()), m);
    return PadicElement::from_raw(f, {x}, 0, f->cap());
}

PadicElement one_unit_part(const PadicElement& t) { return t / teichmuller(t); }

PadicElement unit_pow(const PadicElement& base, const PadicElement& a) {
    const auto& f = base.field();
    if (a.ram_index() != 1) throw std::invalid_argument("unit_pow: exponent must lie in Z_p");
    const auto one = PadicElement::one(f);
    if (!((base - one).valuation().value > ValQ(0)))
        throw std::domain_error("unit_pow: base is not congruent to 1");
    const int p = f->prime();
    u64 rem = a.to_u64();
    int rem_prec = a.precision_pi();
    PadicElement result = one;
    PadicElement cur = base;
    // peel p-adic digits until cur - 1 has valuation >= 1
    while (!(cur - one).valuation().at_least(ValQ(1))) {
        const u64 digit = rem % static_cast<u64>(p);
        if (digit) result = result * cur.pow(static_cast<std::int64_t>(digit));
        rem /= static_cast<u64>(p);
        --rem_prec;
        if (rem_prec <= 0) throw PrecisionError("unit_pow: exponent precision exhausted");
        cur = cur.pow(p);
    }
    auto qp = a.field();
    auto e = PadicElement::from_raw(qp, {rem}, 0, rem_prec).embed(f);
    return result * pexp(e * plog(cur));
}

std::vector<PadicElement> binom_coeffs(const PadicElement& a, int count) {
    const auto& f = a.field();
    if (f->ram_index() != 1) throw std::invalid_argument("binom_coeffs: needs an element of Z_p");
    const int p = f->prime();
    const int cap = f->cap();
    const u64 m = f->modulus();
    const u64 A = a.to_u64();
    const int prec_a = a.precision_pi();
    std::vector<PadicElement> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    u64 num = 1, fu = 1;
    int fv = 0;
    int logj = 0;
    for (int j = 0; j < count; ++j) {
        if (j > 0) {
            num = mod::mul(num, mod::sub(A, static_cast<u64>(j - 1) % m, m), m);
            u64 k = static_cast<u64>(j);
            while (k % static_cast<u64>(p) == 0) {
                k /= static_cast<u64>(p);
                ++fv;
            }
            fu = mod::mul(fu, k % m, m);
            if (static_cast<std::int64_t>(f->pow_p(std::min(logj + 1, cap))) <= j && logj + 1 <= cap) ++logj;
        }
        if (fv >= cap) throw PrecisionError("binom_coeffs: j! exceeds storage precision");
        const u64 mv = f->pow_p(cap - fv);
        const u64 val = mod::mul((num / f->pow_p(fv)) % mv, mod::inv(fu % mv, mv), mv);
        const int prec = j == 0 ? cap : std::min(cap - fv, prec_a - logj);
        out.push_back(PadicElement::from_raw(f, {val}, 0, prec));
    }
    return out;
}

}  // namespace halo::padic
