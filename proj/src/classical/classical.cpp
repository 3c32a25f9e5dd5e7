#include "halo/classical/classical.hpp"

#include "halo/fredholm/fredholm.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace halo::classical {

using linalg::Matrix;

PointMatrix classical_hecke_matrix(const coset::CosetDataset& ds, const std::string& name,
                                   const weight::WeightPoint& wp) {
    if (!wp.is_locally_algebraic()) throw std::invalid_argument("classical spaces need a locally algebraic weight");
    const auto& la = wp.algebraic();
    wp.component.validate();
    if (wp.component.p != ds.p) throw std::invalid_argument("weight prime differs from the dataset prime");
    if (wp.component.w != ds.w) throw std::invalid_argument("weight w differs from the dataset w");
    if (la.eps1.conductor() > 1 || la.eps2.conductor() > 1)
        throw std::invalid_argument("character conductor exceeds the dataset level (at most p)");
    const auto* h = ds.find(name);
    if (!h) throw std::invalid_argument("no Hecke datum named " + name);

    const int k = la.k;
    auto F = wp.value_field();
    PointMatrix out;
    out.field = F;
    out.layout = dist::Layout{ds.t, ds.alg_dim(), k - 1};
    out.datum = name;
    out.weight = wp.str();
    out.a = Matrix<PadicElement>(out.layout.dim(), out.layout.dim(), PadicElement(F));
    const auto& L = out.layout;

    for (const auto& item : h->items) {
        auto g = dist::exact_matrix(item.mats[0], ds.p);
        auto det = g.det();
        auto v = det.valuation();
        if (!v.exact) throw std::invalid_argument("singular matrix in " + name);
        auto detu = det / PadicElement::from_int(det.field(), static_cast<std::int64_t>(det.field()->pow_p(
                                                                 static_cast<int>(v.value.floor()))));
        // kappa at x = 0, with the polynomial part (a + b x)^{k-2} divided out
        auto scal = weight::eval_locally_algebraic(wp, g.a, detu / g.a, F) / g.a.pow(k - 2).embed(F);
        auto poly = dist::algebraic_action(item.mats[0], ds.p, k, k - 2);
        auto A = dist::coefficient_action(ds, item);
        for (int i = 0; i < ds.t; ++i) {
            const int s = item.sigma[static_cast<std::size_t>(i)];
            for (int al = 0; al < L.alg_dim; ++al)
                for (int be = 0; be < L.alg_dim; ++be) {
                    const auto& aab = A(static_cast<std::size_t>(al), static_cast<std::size_t>(be));
                    if (aab.is_zero()) continue;
                    auto c = aab.embed(F) * scal;
                    for (int r = 0; r < k - 1; ++r)
                        for (int q = 0; q < k - 1; ++q) {
                            auto& dst = out.a(L.index(i, al, r), L.index(s, be, q));
                            dst += c * poly(static_cast<std::size_t>(r), static_cast<std::size_t>(q)).embed(F);
                        }
                }
        }
    }
    return out;
}

PointMatrix classical_u_v(const coset::CosetDataset& ds, const weight::WeightPoint& wp) {
    return classical_hecke_matrix(ds, ds.u_v().name, wp);
}

SlopeMultiset slope_multiset(const Matrix<PadicElement>& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("slope multiset needs a square matrix");
    if (A.rows() == 0) return {};
    auto f = A(0, 0).field();
    auto c = linalg::fredholm_berkowitz(A, PadicElement(f), PadicElement::one(f));
    std::vector<padic::PadicVal> vals;
    for (const auto& x : c) vals.push_back(x.valuation());
    vals[0] = {ValQ(0), true};
    return fredholm::newton_polygon(vals).slopes();
}

std::size_t slope_anomalies(const SlopeMultiset& s, int k) {
    return static_cast<std::size_t>(std::count_if(s.slopes.begin(), s.slopes.end(), [&](const ValQ& x) {
        return x < ValQ(0) || x > ValQ(k - 1);
    }));
}

SlopeMultiset overconvergent_slopes_below(const PointMatrix& A, int t_prime, const ValQ& h, int prec_vp,
                                          const ValQ& unit, int threads) {
    auto c = fredholm::fredholm_point(A, static_cast<long>(A.dim()), prec_vp, threads);
    std::vector<padic::PadicVal> v;
    for (const auto& x : c) v.push_back(x.valuation());
    v[0] = {ValQ(0), true};
    return fredholm::specialized_polygon(v, A.field->prime(), t_prime, unit, static_cast<long>(A.dim())).slopes_below(h);
}

std::string ClassicalityComparison::str() const {
    std::ostringstream os;
    os << "k=" << k << " moments=" << moments << "\n";
    os << "overconvergent_below=" << overconvergent.str() << "\n";
    os << "overconvergent_below_M+4=" << stability.str() << "\n";
    os << "classical_below=" << classical.str() << "\n";
    os << "decided=" << (decided() ? "true" : "false") << " match=" << (match() ? "true" : "false")
       << " stable=" << (stable() ? "true" : "false") << "\n";
    return os.str();
}

ClassicalityComparison compare_classicality(const coset::CosetDataset& ds, const weight::WeightPoint& wp,
                                            int moments, int prec_vp, int threads) {
    if (!wp.is_locally_algebraic()) throw std::invalid_argument("classicality needs a locally algebraic weight");
    ClassicalityComparison r;
    r.k = wp.algebraic().k;
    r.moments = moments;
    const ValQ h(r.k - 1);
    r.classical = slope_multiset(classical_u_v(ds, wp)).below(h);
    for (int M : {moments, moments + 4}) {
        dist::AssemblyOptions o;
        o.moments = M;
        auto A = dist::u_v_matrix_at(ds, wp, prec_vp, o);
        (M == moments ? r.overconvergent : r.stability) =
            overconvergent_slopes_below(A, ds.t_prime(), h, prec_vp, ValQ(1), threads);
    }
    return r;
}

long classical_dimension(int p, int k, int n, int t) {
    if (k < 2 || n < 1 || t < 1) throw std::invalid_argument("need k >= 2, n >= 1, t >= 1");
    long d = static_cast<long>(k - 1) * t;
    for (int i = 1; i < n; ++i) d *= p;
    return d;
}

std::string ALReport::str() const {
    std::ostringstream os;
    os << "k=" << k << " count=" << count << " pointwise=" << (pointwise ? "pass" : "fail");
    if (first_violation >= 0)
        os << " first_violation=" << (violation_list == 0 ? "eps[" : "eps_inv[") << first_violation << "]";
    os << " sum=" << sum.str() << " expected_sum=" << expected_sum.str() << " sum_check=" << (sum_ok ? "pass" : "fail");
    return os.str();
}

ALReport al_duality_check(const SlopeMultiset& s_eps, const SlopeMultiset& s_inv, int k, std::size_t expected_count) {
    if (s_eps.count() != expected_count || s_inv.count() != expected_count)
        throw std::invalid_argument("slope lists have " + std::to_string(s_eps.count()) + " and " +
                                    std::to_string(s_inv.count()) + " entries, expected " +
                                    std::to_string(expected_count));
    ALReport r;
    r.k = k;
    r.count = expected_count;
    const std::size_t N = expected_count;
    // entry i of either list pairs with entry N-1-i of the other; report the smallest failing index
    for (std::size_t i = 0; i < N && r.pointwise; ++i) {
        if (s_eps.slopes[i] != ValQ(k - 1) - s_inv.slopes[N - 1 - i]) {
            r.pointwise = false;
            r.first_violation = static_cast<long>(i);
            r.violation_list = 0;
        } else if (s_inv.slopes[i] != ValQ(k - 1) - s_eps.slopes[N - 1 - i]) {
            r.pointwise = false;
            r.first_violation = static_cast<long>(i);
            r.violation_list = 1;
        }
    }
    r.sum = ValQ(0);
    for (const auto& x : s_eps.slopes) r.sum += x;
    for (const auto& x : s_inv.slopes) r.sum += x;
    r.expected_sum = ValQ(k - 1) * ValQ(static_cast<std::int64_t>(N));
    r.sum_ok = r.sum == r.expected_sum;
    return r;
}

}  // namespace halo::classical
