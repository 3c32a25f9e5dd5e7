#include "halo/weight/weight_space.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace halo::weight {

using padic::ExtensionField;
using padic::mod::vp;

namespace {

int norm_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

void require_unit(const PadicElement& t, const char* what) {
    if (t.ram_index() != 1) throw std::invalid_argument(std::string(what) + " must lie in Z_p");
    if (!t.is_unit()) throw std::invalid_argument(std::string(what) + " must be a unit of Z_p");
}

struct Decomposed {
    PadicElement d1, d2;  // Teichmuller parts
    PadicElement s;       // sqrt(<t1><t2>)
    PadicElement a;       // exponent of exp(p) in sqrt(<t1>/<t2>)
};

Decomposed decompose(const PadicElement& t1, const PadicElement& t2) {
    require_unit(t1, "t1");
    require_unit(t2, "t2");
    const int p = t1.prime();
    auto q = t1.field();
    auto d1 = padic::teichmuller(t1);
    auto d2 = padic::teichmuller(t2);
    auto L1 = padic::plog(t1 / d1);
    auto L2 = padic::plog(t2 / d2);
    auto two = PadicElement::from_int(q, 2);
    auto s = padic::pexp((L1 + L2) / two);
    auto a = (L1 - L2) / (two * PadicElement::from_int(q, p));
    return {d1, d2, s, a};
}

// omega(d1, d2) * s^w * eta(s), in the field of the component
PadicElement constant_part(const WeightComponent& comp, const Decomposed& D) {
    auto E = comp.field();
    auto c = D.d1.pow(comp.omega1) * D.d2.pow(comp.omega2) * D.s.pow(comp.w);
    return c.embed(E) * comp.eta.value(D.s, E);
}

}  // namespace

FiniteCharacter FiniteCharacter::make(int p, int tame, std::int64_t wild, int conductor) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("character prime must be odd");
    if (conductor < 0) throw std::invalid_argument("conductor exponent must be >= 0");
    FiniteCharacter c;
    c.p_ = p;
    c.m_ = conductor;
    c.tame_ = norm_mod(tame, p - 1);
    if (conductor >= 2) {
        const std::int64_t q = ipow(p, conductor - 1);
        c.wild_ = norm_mod(wild, q);
        if (c.wild_ % p == 0)
            throw std::invalid_argument("wild exponent must be prime to p for conductor p^" + std::to_string(conductor));
    } else {
        if (wild != 0) throw std::invalid_argument("wild exponent needs conductor >= p^2");
        if (conductor == 1 && c.tame_ == 0) throw std::invalid_argument("conductor p needs a nontrivial tame part");
        if (conductor == 0 && c.tame_ != 0) throw std::invalid_argument("nontrivial tame part needs conductor >= p");
    }
    return c;
}

FiniteCharacter FiniteCharacter::operator*(const FiniteCharacter& o) const {
    if (p_ != o.p_) throw std::invalid_argument("character primes differ");
    const int tame = norm_mod(tame_ + o.tame_, p_ - 1);
    const int L = std::max({value_level(), o.value_level(), 0});
    std::int64_t sum = 0;
    if (L > 0) {
        const std::int64_t q = ipow(p_, L);
        auto lift = [&](const FiniteCharacter& x) -> std::int64_t {
            return x.m_ >= 2 ? x.wild_ * ipow(p_, L - (x.m_ - 1)) % q : 0;
        };
        sum = (lift(*this) + lift(o)) % q;
    }
    if (sum == 0) return make(p_, tame, 0, tame ? 1 : 0);
    const int v = vp(static_cast<std::uint64_t>(sum), p_);
    const int level = L - v;
    return make(p_, tame, (sum / ipow(p_, v)) % ipow(p_, level), level + 1);
}

FiniteCharacter FiniteCharacter::inverse() const {
    if (m_ >= 2) return make(p_, -tame_, -wild_, m_);
    return make(p_, -tame_, 0, m_);
}

PadicElement root_of_unity(const FieldPtr& cyc, int j) {
    if (j == 0) return PadicElement::one(cyc);
    if (cyc->kind() != padic::FieldKind::Cyclotomic || cyc->level() < j)
        throw std::invalid_argument("field does not contain zeta_{p^" + std::to_string(j) + "}");
    auto z = PadicElement::one(cyc) + PadicElement::uniformizer(cyc);
    for (int i = 0; i < cyc->level() - j; ++i) z = z.pow(cyc->prime());
    return z;
}

PadicElement FiniteCharacter::value_at_exp_p(const FieldPtr& target) const {
    if (m_ < 2) return PadicElement::one(target);
    return root_of_unity(target, m_ - 1).pow(wild_);
}

PadicElement FiniteCharacter::value(const PadicElement& t, const FieldPtr& target) const {
    require_unit(t, "character argument");
    auto res = padic::teichmuller(t).pow(tame_).embed(target);
    if (m_ < 2) return res;
    auto u = padic::one_unit_part(t);
    auto a = padic::plog(u) / PadicElement::from_int(t.field(), p_);
    if (a.precision_pi() < m_ - 1) throw padic::PrecisionError("character argument known to too low precision");
    const auto q = static_cast<padic::u64>(ipow(p_, m_ - 1));
    const auto ex = static_cast<std::int64_t>((a.to_u64() % q) * static_cast<padic::u64>(wild_) % q);
    return res * root_of_unity(target, m_ - 1).pow(ex);
}

std::string FiniteCharacter::str() const {
    std::ostringstream os;
    os << "chi(tame=" << tame_ << ",wild=" << wild_ << ",cond=p^" << m_ << ")";
    return os.str();
}

void WeightComponent::validate() const {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("component prime must be odd");
    if (eta.prime() != p) throw std::invalid_argument("eta has the wrong prime");
    if (omega1 < 0 || omega1 >= p - 1 || omega2 < 0 || omega2 >= p - 1)
        throw std::invalid_argument("omega exponents must be reduced mod p-1");
    if (norm_mod(omega1 + omega2 - w - eta.tame(), p - 1) != 0)
        throw std::invalid_argument("omega on the diagonal must equal eta: omega1+omega2 != w + tame(eta) mod p-1");
}

std::string WeightComponent::str() const {
    std::ostringstream os;
    os << "component(p=" << p << ",w=" << w << ",eta=" << eta.str() << ",omega=(" << omega1 << "," << omega2
       << "),c=" << field_level() << ")";
    return os.str();
}

WeightComponent make_component(int p, int w, const FiniteCharacter& eta, int omega1, int omega2) {
    WeightComponent c{p, w, eta, norm_mod(omega1, p - 1), norm_mod(omega2, p - 1)};
    c.validate();
    return c;
}

int WeightPoint::value_level() const {
    if (!is_locally_algebraic()) return component.field_level();
    const auto& a = algebraic();
    return std::max({component.field_level(), a.eps1.value_level(), a.eps2.value_level()});
}

FieldPtr WeightPoint::value_field() const {
    if (!is_locally_algebraic()) return std::get<Specialized>(position).z.field();
    return ExtensionField::cyclotomic(component.p, value_level());
}

std::string WeightPoint::str() const {
    std::ostringstream os;
    os << component.str() << " ";
    if (is_locally_algebraic()) {
        const auto& a = algebraic();
        os << "k=" << a.k << " eps=(" << a.eps1.str() << "," << a.eps2.str() << ")";
    } else {
        const auto& z = std::get<Specialized>(position).z;
        os << "z in " << z.field()->describe() << " v(z)=" << z.valuation().str();
    }
    return os.str();
}

WeightPoint make_locally_algebraic(int p, int k, int w, const FiniteCharacter& eps1, const FiniteCharacter& eps2) {
    if (k < 2) throw std::invalid_argument("weight k must be >= 2");
    if ((k - w) % 2 != 0) throw std::invalid_argument("parity mismatch: k and w must agree mod 2");
    if (eps1.prime() != p || eps2.prime() != p) throw std::invalid_argument("character prime mismatch");
    auto eta = eps1 * eps2;
    const int o1 = norm_mod((w + k - 2) / 2 + eps1.tame(), p - 1);
    const int o2 = norm_mod((w - k + 2) / 2 + eps2.tame(), p - 1);
    return WeightPoint{make_component(p, w, eta, o1, o2), LocallyAlgebraic{k, eps1, eps2}};
}

WeightPoint make_specialized(const WeightComponent& comp, const PadicElement& z) {
    comp.validate();
    if (!comp.field()->embeds_into(*z.field()))
        throw std::invalid_argument("z must lie in a field containing " + comp.field()->describe());
    if (!(z.valuation().value > ValQ(0))) throw std::invalid_argument("z must have positive valuation");
    return WeightPoint{comp, Specialized{z}};
}

std::pair<PadicElement, padic::PadicVal> z_coordinate(const WeightPoint& wp) {
    if (!wp.is_locally_algebraic()) {
        const auto& z = std::get<Specialized>(wp.position).z;
        return {z, z.valuation()};
    }
    const auto& a = wp.algebraic();
    auto F = wp.value_field();
    auto ep = padic::exp_p(wp.component.p).embed(F);
    auto z = ep.pow(a.k - 2) * a.eps1.value_at_exp_p(F) / a.eps2.value_at_exp_p(F) - PadicElement::one(F);
    return {z, z.valuation()};
}

bool in_boundary_annulus(const PadicElement& z, const WeightComponent& comp) {
    auto v = z.valuation();
    return v.exact && v.value > ValQ(0) && v.value < comp.uniformizer_valuation();
}

LambdaElem eval_weight_series(const WeightComponent& comp, const PadicElement& t1, const PadicElement& t2,
                              const LambdaRing& ring) {
    auto D = decompose(t1, t2);
    return LambdaElem::constant(&ring, constant_part(comp, D)) * LambdaElem::one_plus_x_pow(&ring, D.a);
}

PadicElement eval_weight_at_z(const WeightComponent& comp, const PadicElement& t1, const PadicElement& t2,
                              const PadicElement& z, int prec_vp) {
    auto D = decompose(t1, t2);
    const auto& F = z.field();
    auto one = PadicElement::one(F);
    auto r = constant_part(comp, D).embed(F) * padic::unit_pow(one + z, D.a);
    return r.with_precision(prec_vp);
}

PadicElement eval_locally_algebraic(const WeightPoint& wp, const PadicElement& t1, const PadicElement& t2,
                                    const FieldPtr& target) {
    require_unit(t1, "t1");
    require_unit(t2, "t2");
    const auto& a = wp.algebraic();
    const int w = wp.component.w;
    auto alg = t1.pow((w + a.k - 2) / 2) * t2.pow((w - a.k + 2) / 2);
    return alg.embed(target) * a.eps1.value(t1, target) * a.eps2.value(t2, target);
}

PadicElement eval_weight_point(const WeightPoint& wp, const PadicElement& t1, const PadicElement& t2, int prec_vp) {
    if (wp.is_locally_algebraic()) return eval_locally_algebraic(wp, t1, t2, wp.value_field());
    return eval_weight_at_z(wp.component, t1, t2, std::get<Specialized>(wp.position).z, prec_vp);
}

}  // namespace halo::weight
