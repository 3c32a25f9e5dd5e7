#pragma once

#include <string>

#include "halo/dist/distribution.hpp"
#include "halo/fredholm/newton.hpp"

namespace halo::classical {

using dist::PointMatrix;
using fredholm::SlopeMultiset;
using padic::PadicElement;
using padic::ValQ;

// Star-normalised operator on (L^v (x) L(k, w, eps))^t, monomial basis x^i, i <= k-2.
// Characters of conductor above p are rejected: the dataset carries a single level.
PointMatrix classical_hecke_matrix(const coset::CosetDataset& ds, const std::string& name,
                                   const weight::WeightPoint& wp);
PointMatrix classical_u_v(const coset::CosetDataset& ds, const weight::WeightPoint& wp);

// Newton-polygon slopes of det(1 - T A), by Berkowitz
SlopeMultiset slope_multiset(const linalg::Matrix<PadicElement>& A);
inline SlopeMultiset slope_multiset(const PointMatrix& A) { return slope_multiset(A.a); }

// number of slopes outside [0, k-1]
std::size_t slope_anomalies(const SlopeMultiset& s, int k);

// (k-1) p^{n-1} t
long classical_dimension(int p, int k, int n, int t);

// Slopes below h of det(1 - T A) for an overconvergent point matrix. Past the
// computed coefficients, lambda(n) * unit bounds the valuations (compactness).
SlopeMultiset overconvergent_slopes_below(const PointMatrix& A, int t_prime, const ValQ& h, int prec_vp,
                                          const ValQ& unit = ValQ(1), int threads = 1);

struct ClassicalityComparison {
    int k = 2;
    int moments = 0;
    SlopeMultiset overconvergent;  // below k-1, M moments
    SlopeMultiset stability;       // below k-1, M + 4 moments
    SlopeMultiset classical;       // below k-1
    bool decided() const { return overconvergent.exact() && stability.exact() && classical.exact(); }
    bool match() const { return decided() && overconvergent.slopes == classical.slopes; }
    bool stable() const { return decided() && overconvergent.slopes == stability.slopes; }
    std::string str() const;
};

ClassicalityComparison compare_classicality(const coset::CosetDataset& ds, const weight::WeightPoint& wp,
                                            int moments, int prec_vp, int threads = 1);

struct ALReport {
    int k = 2;
    std::size_t count = 0;
    bool pointwise = true;
    long first_violation = -1;  // smallest failing index over both lists
    int violation_list = 0;     // 0: first list, 1: second list
    ValQ sum;
    ValQ expected_sum;
    bool sum_ok = true;
    bool ok() const { return pointwise && sum_ok; }
    std::string str() const;
};

// alpha_i(eps) = k - 1 - alpha_{N-1-i}(eps^-1) and sum of both lists = (k-1) N.
// Throws std::invalid_argument when a list does not have expected_count entries.
ALReport al_duality_check(const SlopeMultiset& s_eps, const SlopeMultiset& s_inv, int k, std::size_t expected_count);

}  // namespace halo::classical
