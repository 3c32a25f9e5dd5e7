#include <random>

#include "doctest.h"
#include "halo/weight/weight_space.hpp"

using namespace halo;
using namespace halo::weight;
using padic::ExtensionField;

namespace {

PadicElement rand_unit(std::mt19937_64& rng, int p) {
    std::int64_t t;
    do t = static_cast<std::int64_t>(rng() % 10000000) + 1;
    while (t % p == 0);
    return PadicElement::from_int(ExtensionField::qp(p), rng() % 2 ? t : -t);
}

FiniteCharacter wild_char(int p, int conductor, std::int64_t wild = 1, int tame = 0) {
    return FiniteCharacter::make(p, tame, wild, conductor);
}

}  // namespace

TEST_CASE("finite characters") {
    auto chi = wild_char(3, 3, 2);
    CHECK(chi.value_level() == 2);
    CHECK((chi * chi.inverse()).is_trivial());
    auto psi = wild_char(3, 2, 1);
    auto prod = chi * psi;  // level-2 character times level-1 character
    CHECK(prod.conductor() == 3);
    CHECK_THROWS(FiniteCharacter::make(3, 0, 3, 2));  // wild exponent divisible by p
    CHECK_THROWS(FiniteCharacter::make(3, 1, 0, 0));
    // multiplicativity on random units
    std::mt19937_64 rng(2);
    auto K = ExtensionField::cyclotomic(3, 2);
    for (int i = 0; i < 20; ++i) {
        auto a = rand_unit(rng, 3), b = rand_unit(rng, 3);
        CHECK(chi.value(a * b, K).equals(chi.value(a, K) * chi.value(b, K)));
        CHECK(prod.value(a, K).equals(chi.value(a, K) * psi.value(a, K)));
    }
    // a conductor-p^m character is trivial on 1 + p^m Z_p
    auto one_plus = PadicElement::from_int(ExtensionField::qp(3), 1 + 27 * 5);
    CHECK(chi.value(one_plus, K).equals(PadicElement::one(K)));
    CHECK_FALSE(chi.value(PadicElement::from_int(ExtensionField::qp(3), 1 + 9), K).equals(PadicElement::one(K)));
}

TEST_CASE("locally algebraic weights") {
    auto triv = FiniteCharacter::trivial(3);
    auto wp = make_locally_algebraic(3, 2, 0, triv, triv);
    CHECK(wp.component.eta.is_trivial());
    CHECK(wp.component.omega1 == 0);
    CHECK(wp.component.omega2 == 0);
    CHECK(wp.is_locally_algebraic());

    CHECK_THROWS_AS(make_locally_algebraic(3, 3, 0, triv, triv), std::invalid_argument);
    CHECK_THROWS_AS(make_locally_algebraic(3, 1, 1, triv, triv), std::invalid_argument);

    // eps = (chi, chi^{-1}) wild of conductor p^2: eta trivial, values need zeta_p
    auto chi = wild_char(3, 2);
    auto wp2 = make_locally_algebraic(3, 2, 0, chi, chi.inverse());
    CHECK(wp2.component.eta.is_trivial());
    CHECK(wp2.component.field_level() == 0);
    CHECK(wp2.value_level() == 1);
}

TEST_CASE("z coordinate valuations") {
    auto triv = FiniteCharacter::trivial(3);
    auto [z0, v0] = z_coordinate(make_locally_algebraic(3, 2, 0, triv, triv));
    CHECK(z0.is_zero());
    CHECK_FALSE(v0.exact);

    auto [z4, v4] = z_coordinate(make_locally_algebraic(3, 4, 0, triv, triv));
    CHECK(v4.exact);
    CHECK(v4.value == ValQ(1));

    for (int p : {3, 5})
        for (int k = 3; k < 14; ++k) {
            auto t = FiniteCharacter::trivial(p);
            auto [z, v] = z_coordinate(make_locally_algebraic(p, k, k % 2, t, t));
            CHECK(v.value == ValQ(1 + padic::mod::vp(static_cast<padic::u64>(k - 2), p)));
        }

    // eps2/eps1 of conductor p^{c+2}: v(z) = 1/phi(p^{c+1})
    for (int c = 0; c <= 2; ++c)
        for (int k : {2, 3, 4, 7})
            for (std::int64_t wild : {1, 2, 4}) {
                auto eps1 = wild_char(3, c + 2, wild);
                auto t = FiniteCharacter::trivial(3);
                auto [z, v] = z_coordinate(make_locally_algebraic(3, k, k % 2, eps1, t));
                CHECK(v.exact);
                CHECK(v.value == ValQ(1, padic::euler_phi_ppow(3, c + 1)));
            }
}

TEST_CASE("boundary annulus") {
    auto comp0 = make_component(3, 0, FiniteCharacter::trivial(3), 0, 0);
    auto F2 = ExtensionField::pure(3, 2);
    CHECK(in_boundary_annulus(PadicElement::uniformizer(F2), comp0));
    CHECK_FALSE(in_boundary_annulus(PadicElement::from_int(F2, 3), comp0));
    CHECK_FALSE(in_boundary_annulus(PadicElement(F2), comp0));

    auto comp1 = make_component(3, 0, wild_char(3, 2), 0, 0);
    CHECK(comp1.field_level() == 1);
    auto K2 = ExtensionField::cyclotomic(3, 2);
    auto z = PadicElement::uniformizer(K2).pow(2);  // v = 1/3
    CHECK(z.valuation().value == ValQ(1, 3));
    CHECK(in_boundary_annulus(z, comp1));
    CHECK_FALSE(in_boundary_annulus(PadicElement::uniformizer(K2).pow(3), comp1));
}

TEST_CASE("universal character as a series") {
    auto f = ExtensionField::qp(3);
    auto ep = padic::exp_p(3);
    padic::LambdaRing R(f, 20, 8);
    for (int w : {0, 1, 2}) {
        auto comp = make_component(3, w, FiniteCharacter::trivial(3), w % 2, 0);
        auto s = eval_weight_series(comp, ep, ep.inverse(), R);
        CHECK(s.coefficient(0).equals(PadicElement::one(f)));
        CHECK(s.coefficient(1).equals(PadicElement::one(f)));
        for (int m = 2; m < 8; ++m) CHECK(s.coefficient(m).is_zero());
    }
    // diagonal: no X dependence, value t^w eta(t)
    std::mt19937_64 rng(4);
    auto eta = wild_char(3, 2, 1, 1);
    auto E = ExtensionField::cyclotomic(3, 1);
    padic::LambdaRing RE(E, 15, 6);
    for (int w : {0, 1, 3}) {
        auto comp = make_component(3, w, eta, (w + 1) % 2, 0);
        for (int i = 0; i < 20; ++i) {
            auto t = rand_unit(rng, 3);
            auto s = eval_weight_series(comp, t, t, RE);
            auto want = t.pow(w).embed(E) * eta.value(t, E);
            CHECK(s.coefficient(0).equals(want));
            for (int m = 1; m < 6; ++m) CHECK(s.coefficient(m).is_zero());
        }
    }
}

TEST_CASE("universal character reproduces locally algebraic weights") {
    std::mt19937_64 rng(8);
    struct Case {
        int p, k, w;
        FiniteCharacter e1, e2;
    };
    std::vector<Case> cases{
        {3, 2, 0, FiniteCharacter::trivial(3), FiniteCharacter::trivial(3)},
        {3, 4, 0, FiniteCharacter::trivial(3), FiniteCharacter::trivial(3)},
        {3, 3, 1, FiniteCharacter::make(3, 1, 0, 1), FiniteCharacter::trivial(3)},
        {3, 2, 0, wild_char(3, 2), wild_char(3, 2).inverse()},
        {3, 5, 1, wild_char(3, 3, 2), wild_char(3, 2, 1, 1)},
        {5, 4, 2, FiniteCharacter::make(5, 3, 0, 1), wild_char(5, 2, 3)},
        {5, 3, -1, wild_char(5, 2, 2, 1), FiniteCharacter::trivial(5)},
    };
    int n = 0;
    for (const auto& c : cases) {
        auto wp = make_locally_algebraic(c.p, c.k, c.w, c.e1, c.e2);
        auto [z, vz] = z_coordinate(wp);
        auto F = wp.value_field();
        for (int i = 0; i < 30; ++i) {
            auto t1 = rand_unit(rng, c.p), t2 = rand_unit(rng, c.p);
            auto direct = eval_locally_algebraic(wp, t1, t2, F);
            auto universal = eval_weight_at_z(wp.component, t1, t2, z, 15);
            CHECK(universal.equals(direct));
            ++n;
        }
    }
    CHECK(n == 210);
}

TEST_CASE("series evaluation agrees with evaluation at z") {
    std::mt19937_64 rng(12);
    auto comp = make_component(3, 0, FiniteCharacter::trivial(3), 0, 0);
    padic::LambdaRing R(ExtensionField::qp(3), 20, 16);
    auto F = ExtensionField::pure(3, 2);
    auto z = PadicElement::uniformizer(F) * PadicElement::from_int(F, 2);
    for (int i = 0; i < 20; ++i) {
        auto t1 = rand_unit(rng, 3), t2 = rand_unit(rng, 3);
        auto s = eval_weight_series(comp, t1, t2, R).evaluate(z);
        auto d = eval_weight_at_z(comp, t1, t2, z, 20);
        CHECK(s.precision() == ValQ(8));
        CHECK(s.equals(d));
    }
}
