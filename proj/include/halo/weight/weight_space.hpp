#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>

#include "halo/padic/lambda_ring.hpp"
#include "halo/padic/padic_element.hpp"

namespace halo::weight {

using padic::FieldPtr;
using padic::LambdaElem;
using padic::LambdaRing;
using padic::PadicElement;
using padic::ValQ;

// Character of Z_p^x of conductor p^m:
// t = teich(t) * exp(p)^a  maps to  teich(t)^tame * zeta_{p^{m-1}}^{wild * a}.
class FiniteCharacter {
public:
    FiniteCharacter() = default;
    static FiniteCharacter trivial(int p) { return make(p, 0, 0, 0); }
    // throws std::invalid_argument when the exponents do not match the conductor
    static FiniteCharacter make(int p, int tame, std::int64_t wild, int conductor);

    int prime() const { return p_; }
    int tame() const { return tame_; }
    std::int64_t wild() const { return wild_; }
    int conductor() const { return m_; }
    bool is_trivial() const { return m_ == 0; }
    // level c of the cyclotomic field Q_p(zeta_{p^c}) holding the values
    int value_level() const { return m_ >= 2 ? m_ - 1 : 0; }

    FiniteCharacter operator*(const FiniteCharacter& o) const;
    FiniteCharacter inverse() const;
    bool operator==(const FiniteCharacter& o) const = default;

    // value at a unit t of Z_p, in a cyclotomic field of level >= value_level()
    PadicElement value(const PadicElement& t, const FieldPtr& target) const;
    // value at exp(p)
    PadicElement value_at_exp_p(const FieldPtr& target) const;
    std::string str() const;

private:
    int p_ = 3;
    int tame_ = 0;
    std::int64_t wild_ = 0;
    int m_ = 0;
};

// zeta_{p^j} = (1 + pi)^{p^{L-j}} inside Q_p(zeta_{p^L})
PadicElement root_of_unity(const FieldPtr& cyc, int j);

struct WeightComponent {
    int p = 3;
    int w = 0;
    FiniteCharacter eta;  // the finite part of the central character
    int omega1 = 0;       // exponents of Teichmuller on the two factors, mod p-1
    int omega2 = 0;

    // c with E = Q_p(zeta_{p^c})
    int field_level() const { return eta.value_level(); }
    FieldPtr field() const { return padic::ExtensionField::cyclotomic(p, field_level()); }
    // v_p of the uniformizer of E: 1/phi(p^c)
    ValQ uniformizer_valuation() const { return ValQ(1, padic::euler_phi_ppow(p, field_level())); }
    void validate() const;
    std::string str() const;
    bool operator==(const WeightComponent& o) const = default;
};

WeightComponent make_component(int p, int w, const FiniteCharacter& eta, int omega1, int omega2);

struct Specialized {
    PadicElement z;
};
struct LocallyAlgebraic {
    int k;
    FiniteCharacter eps1;
    FiniteCharacter eps2;
};

struct WeightPoint {
    WeightComponent component;
    std::variant<Specialized, LocallyAlgebraic> position;

    bool is_locally_algebraic() const { return std::holds_alternative<LocallyAlgebraic>(position); }
    const LocallyAlgebraic& algebraic() const { return std::get<LocallyAlgebraic>(position); }
    // cyclotomic level of a field holding every character value at this point
    int value_level() const;
    // field in which matrices at this point are assembled
    FieldPtr value_field() const;
    std::string str() const;
};

WeightPoint make_locally_algebraic(int p, int k, int w, const FiniteCharacter& eps1, const FiniteCharacter& eps2);
WeightPoint make_specialized(const WeightComponent& comp, const PadicElement& z);

// z = exp(p)^{k-2} (eps1/eps2)(exp(p)) - 1 and its valuation
std::pair<PadicElement, padic::PadicVal> z_coordinate(const WeightPoint& wp);

bool in_boundary_annulus(const PadicElement& z, const WeightComponent& comp);

// Universal character of the component at (t1, t2), as a series in X
LambdaElem eval_weight_series(const WeightComponent& comp, const PadicElement& t1, const PadicElement& t2,
                              const LambdaRing& ring);
// ... and with X = z (needs v_p(z) > 0), summed to absolute precision prec_vp
PadicElement eval_weight_at_z(const WeightComponent& comp, const PadicElement& t1, const PadicElement& t2,
                              const PadicElement& z, int prec_vp);
// chi_k * eps evaluated directly, in a cyclotomic field of level >= wp.value_level()
PadicElement eval_locally_algebraic(const WeightPoint& wp, const PadicElement& t1, const PadicElement& t2,
                                    const FieldPtr& target);
// dispatches on the position of wp; values in wp.value_field() or the field of z
PadicElement eval_weight_point(const WeightPoint& wp, const PadicElement& t1, const PadicElement& t2, int prec_vp);

}  // namespace halo::weight
