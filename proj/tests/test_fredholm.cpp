#include <random>

#include "doctest.h"
#include "halo/classical/classical.hpp"
#include "halo/fredholm/fredholm.hpp"

using namespace halo;
using namespace halo::fredholm;
using padic::ExtensionField;
using padic::PadicVal;

namespace {

LambdaElem rand_elem(std::mt19937_64& rng, const LambdaRing* R, int sparsity = 2) {
    LambdaElem x(R);
    for (auto& v : x.data())
        if (rng() % static_cast<unsigned>(sparsity) == 0) v = rng() % R->modulus();
    return x;
}

// lowest convex minorant at n, by brute force over all pairs
ValQ brute_hull(const std::vector<NPPoint>& pts, long n) {
    ValQ best = ValQ::infinity();
    for (const auto& a : pts)
        for (const auto& b : pts) {
            if (a.n > n || b.n < n) continue;
            ValQ v = a.n == b.n ? a.value : a.value + (b.value - a.value) * ValQ(n - a.n) / (b.n - a.n);
            if (v < best) best = v;
        }
    return best;
}

LambdaSeries series_from(const LambdaRingPtr& R, int p, int t_prime, std::vector<LambdaElem> c) {
    LambdaSeries S;
    S.ring = R;
    S.p = p;
    S.t_prime = t_prime;
    S.level = R->field()->level();
    S.c = std::move(c);
    return S;
}

}  // namespace

TEST_CASE("small Fredholm determinants") {
    auto f = ExtensionField::qp(3);
    LambdaRing R(f, 10, 4);
    auto cst = [&](std::int64_t v) { return LambdaElem::from_int(&R, v); };
    linalg::Matrix<LambdaElem> Z(2, 2, LambdaElem(&R));
    auto c0 = fredholm_coefficients(R, Z, 2);
    CHECK(c0[0].data() == cst(1).data());
    CHECK(c0[1].is_zero());
    CHECK(c0[2].is_zero());

    linalg::Matrix<LambdaElem> P(1, 1, cst(3));
    auto c1 = fredholm_coefficients(R, P, 1);
    CHECK(c1[1].data() == cst(-3).data());

    linalg::Matrix<LambdaElem> D(2, 2, LambdaElem(&R));
    D(0, 0) = cst(1);
    D(1, 1) = cst(3);
    auto c2 = fredholm_coefficients(R, D, 2);
    CHECK(c2[1].data() == cst(-4).data());
    CHECK(c2[2].data() == cst(3).data());
    CHECK_THROWS_AS(fredholm_coefficients(R, D, 3), std::invalid_argument);
}

TEST_CASE("elimination agrees with Berkowitz") {
    std::mt19937_64 rng(17);
    for (auto E : {ExtensionField::qp(3), ExtensionField::cyclotomic(3, 1), ExtensionField::qp(5)}) {
        LambdaRing R(E, 12, 5);
        for (int trial = 0; trial < 6; ++trial) {
            const std::size_t D = 2 + static_cast<std::size_t>(trial);
            linalg::Matrix<LambdaElem> A(D, D, LambdaElem(&R));
            for (std::size_t i = 0; i < D; ++i)
                for (std::size_t j = 0; j < D; ++j) A(i, j) = rand_elem(rng, &R, trial % 2 ? 3 : 1);
            auto want = linalg::fredholm_berkowitz(A, LambdaElem(&R), LambdaElem::from_int(&R, 1));
            const long n = static_cast<long>(D) - static_cast<long>(trial % 2);
            auto got = fredholm_coefficients(R, A, n);
            auto got2 = fredholm_coefficients(R, A, n, 3);
            for (long i = 0; i <= n; ++i) {
                CHECK(got[static_cast<std::size_t>(i)].data() == want[static_cast<std::size_t>(i)].data());
                CHECK(got2[static_cast<std::size_t>(i)].data() == want[static_cast<std::size_t>(i)].data());
            }
        }
    }
}

TEST_CASE("lambda sequence") {
    auto lam = lambda_table(3, 1, 6);
    CHECK(lam == std::vector<long>{0, 0, 1, 3, 5, 8, 12});
    CHECK(lambda_lower_bound(3, 1, {6, 0}) == std::vector<long>{12, 0});
    // touch point identity at k = 3, c = 0
    CHECK(touch_index(3, 0, 1, 3) == 6);
    CHECK_THROWS_AS(lambda_table(3, 0, 4), std::invalid_argument);
    CHECK(elimination_precision_cap(3) == 35);
    CHECK(elimination_precision_cap(5) == 24);
}

TEST_CASE("Newton polygons") {
    auto np = newton_polygon(std::vector<PadicVal>{{ValQ(0), true}, {ValQ(0), true}, {ValQ(1), true}});
    CHECK(np.vertices().size() == 3);
    CHECK(np.slope_list() == std::vector<ValQ>{ValQ(0), ValQ(1)});

    // lambda(n) v for v = 1/2: slopes (lambda(n+1) - lambda(n)) / 2
    std::vector<NPPoint> pts;
    auto lam = lambda_table(3, 1, 10);
    for (long n = 0; n <= 10; ++n) pts.push_back({n, ValQ(lam[static_cast<std::size_t>(n)], 2), true});
    auto sl = newton_polygon(pts).slope_list();
    for (long n = 0; n < 10; ++n)
        CHECK(sl[static_cast<std::size_t>(n)] ==
              ValQ(lam[static_cast<std::size_t>(n + 1)] - lam[static_cast<std::size_t>(n)], 2));

    // a bound-only point on the chord blocks certification, one above does not
    std::vector<NPPoint> q{{0, ValQ(0), true}, {1, ValQ(1), false}, {2, ValQ(2), true}};
    auto a = newton_polygon(q);
    CHECK_FALSE(a.segments()[0].certified);
    q[1].value = ValQ(3, 2);
    auto b = newton_polygon(q);
    REQUIRE(b.segments().size() == 1);
    CHECK(b.segments()[0].certified);
    CHECK(b.certified_vertex(2));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<NPPoint> r{{0, ValQ(0), true}};
        const long n = 2 + static_cast<long>(rng() % 10);
        for (long i = 1; i <= n; ++i) r.push_back({i, ValQ(static_cast<std::int64_t>(rng() % 20), 1 + rng() % 3), true});
        auto P = newton_polygon(r);
        for (long i = 0; i <= n; ++i) CHECK(P.value_at(i) == brute_hull(r, i));
        auto s = P.slope_list();
        CHECK(std::is_sorted(s.begin(), s.end()));
    }
    CHECK_THROWS_AS(newton_polygon(std::vector<NPPoint>{{1, ValQ(0), true}}), std::invalid_argument);
}

TEST_CASE("slope multisets of triangular matrices") {
    auto f = ExtensionField::qp(3);
    linalg::Matrix<PadicElement> D(3, 3, PadicElement(f));
    D(0, 0) = PadicElement::from_int(f, 1);
    D(1, 1) = PadicElement::from_int(f, 3);
    D(2, 2) = PadicElement::from_int(f, 27);
    D(0, 2) = PadicElement::from_int(f, 5);
    auto s = classical::slope_multiset(D);
    CHECK(s.slopes == std::vector<ValQ>{ValQ(0), ValQ(1), ValQ(3)});
    CHECK(s.exact());
}

TEST_CASE("specialization") {
    auto E = ExtensionField::qp(3);
    auto R = std::make_shared<const LambdaRing>(E, 20, 6);
    LambdaElem X(R.get());
    X.data()[1] = 1;
    auto S = series_from(R, 3, 1, {LambdaElem::from_int(R.get(), 1), X});
    auto z = PadicElement::uniformizer(ExtensionField::pure(3, 2));
    auto sp = specialize(S, z);
    CHECK(sp.coeffs[1].v.exact);
    CHECK(sp.coeffs[1].v.value == ValQ(1, 2));
    CHECK_THROWS_AS(specialize(S, PadicElement(E)), std::invalid_argument);
    CHECK_THROWS_AS(specialize(S, PadicElement::from_int(E, 3)), std::invalid_argument);

    // a unit at lambda(n) gives equality, a non-unit the strong floor
    auto T = make_patterned_series(3, 0, 0, 1, 20, 20, 6, [](long n) { return n != 3; }, 1);
    CHECK(bound_violations(T).empty());
    CHECK(unit_flag(T, 3) == UnitFlag::NonUnit);
    CHECK(unit_flag(T, 4) == UnitFlag::Unit);
    for (int e : {2, 3, 5}) {
        auto zz = PadicElement::uniformizer(ExtensionField::pure(3, e));
        auto s2 = specialize(T, zz);
        CHECK(s2.violations() == 0);
        CHECK(s2.coeffs[4].v.value == s2.coeffs[4].floor);
        CHECK(s2.coeffs[3].v.value >= s2.coeffs[3].strong_floor);
    }
}

TEST_CASE("synthetic operators satisfy the coefficient bound") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        coset::SyntheticParams P;
        P.t = 1 + static_cast<int>(seed % 2);
        P.d = seed == 3 ? 2 : 1;
        P.w = seed == 3 ? 1 : 0;
        if (P.d == 2) P.k_list = {3};
        auto ds = coset::gen_synthetic(seed, P);
        auto comp = weight::make_component(3, P.w, weight::FiniteCharacter::trivial(3), P.w % 2, 0);
        dist::AssemblyOptions o;
        o.moments = 12;
        auto U = dist::u_v_matrix(ds, comp, 20, 10, o);
        auto S = fredholm_series(U, 8);
        CHECK(S.t_prime == ds.t_prime());
        CHECK(bound_violations(S).empty());
    }
}

TEST_CASE("point series agrees with specialization of the universal series") {
    coset::SyntheticParams P;
    P.t = 2;
    auto ds = coset::gen_synthetic(11, P);
    auto comp = weight::make_component(3, 0, weight::FiniteCharacter::trivial(3), 0, 0);
    dist::AssemblyOptions o;
    o.moments = 6;
    auto U = dist::u_v_matrix(ds, comp, 20, 30, o);
    auto S = fredholm_series(U, 6);
    auto z = PadicElement::uniformizer(ExtensionField::pure(3, 2));
    auto pm = dist::u_v_matrix_at(ds, weight::make_specialized(comp, z), 20, o);
    auto c = fredholm_point(pm, 6, 20);
    for (long n = 0; n <= 6; ++n) CHECK(c[static_cast<std::size_t>(n)].equals(S.c[static_cast<std::size_t>(n)].evaluate(z)));
    // Berkowitz at the point
    auto b = linalg::fredholm_berkowitz(pm.a, PadicElement(pm.field), PadicElement::one(pm.field));
    for (long n = 0; n <= 6; ++n) CHECK(c[static_cast<std::size_t>(n)].equals(b[static_cast<std::size_t>(n)]));
}

TEST_CASE("halo report on constructed series") {
    CHECK(halo_s0(0) == 1);
    CHECK(halo_s0(1) == 2);
    CHECK(halo_weights(0, 4) == std::vector<int>{1, 2, 4});
    CHECK(halo_weights(1, 5) == std::vector<int>{1, 3, 5});

    // every b_{n, lambda(n)} a unit: the polygon is that of lambda(n) v_p(z)
    auto S = make_patterned_series(3, 0, 0, 1, 37, 40, 10, [](long) { return true; }, 2);
    HaloParams hp;
    hp.k_max = 4;
    for (int e : {2, 3, 4}) hp.z_samples.push_back(PadicElement::uniformizer(ExtensionField::pure(3, e)));
    auto rep = halo_report(S, hp);
    CHECK(rep.all_ok());
    for (const auto& z : hp.z_samples) {
        auto poly = specialized_polygon(specialize(S, z), S, 24);
        auto lam = lambda_table(3, 1, 11);
        for (std::size_t n = 1; n <= 10; ++n) {
            const bool kink = lam[n + 1] - lam[n] != lam[n] - lam[n - 1];
            CHECK(poly.certified_vertex(static_cast<long>(n)) == kink);
        }
        CHECK(poly.certified_vertex(0));
    }

    // units only at 0, n_k - 1, n_k + 1 for k = 2 (n_k = 3)
    auto T = make_patterned_series(3, 0, 0, 1, 37, 40, 10, [](long n) { return n == 2 || n == 4; }, 3);
    HaloParams h2;
    h2.k_max = 2;
    h2.z_samples = hp.z_samples;
    auto r2 = halo_report(T, h2);
    REQUIRE(r2.ks.size() == 2);
    CHECK(r2.ks[1].n_minus == 2);
    CHECK(r2.ks[1].n_plus == 4);
    CHECK(r2.ks[0].n_plus == 0);
    for (const auto& c : r2.ks[1].checks) CHECK(c.ok());
    CHECK(r2.all_ok());

    // refusal when N is too small
    auto U = make_patterned_series(3, 0, 0, 1, 10, 40, 10, [](long) { return true; }, 4);
    CHECK_THROWS_AS(halo_report(U, hp), PrecisionRefusal);
}

TEST_CASE("small slope scan") {
    auto comp = weight::make_component(3, 0, weight::FiniteCharacter::trivial(3), 0, 0);
    auto S = make_patterned_series(3, 0, 0, 1, 30, 30, 8, [](long) { return true; }, 5);
    auto res = small_slope_scan(S, comp, 2, 3);
    REQUIRE(res.first.has_value());
    CHECK(res.entries[*res.first].vz == ValQ(1, 2));
    CHECK(res.entries[0].conductor == 2);
    CHECK_THROWS_AS(small_slope_scan(S, comp, 3, 2), std::invalid_argument);
}
