#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "halo/dist/distribution.hpp"
#include "halo/fredholm/newton.hpp"

namespace halo::fredholm {

using padic::LambdaElem;
using padic::LambdaRing;
using padic::LambdaRingPtr;
using padic::PadicElement;

struct PrecisionRefusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// c_0..c_n of det(1 - T A) in O_E[[X]]/(p^N, X^Mx), c_0 = 1
struct LambdaSeries {
    LambdaRingPtr ring;
    int p = 3;
    int t_prime = 1;
    int level = 0;  // E = Q_p(zeta_{p^level})
    int w = 0;
    std::vector<LambdaElem> c;

    long n_max() const { return static_cast<long>(c.size()) - 1; }
    // v_p of the uniformizer of E
    ValQ uniformizer_valuation() const;
};

// Elimination of I - T A over Lambda[T]/T^{n+1}: every pivot is 1 + O(T), so
// no p-adic division happens. threads > 1 splits row updates.
std::vector<LambdaElem> fredholm_coefficients(const LambdaRing& ring, const linalg::Matrix<LambdaElem>& A, long n_max,
                                              int threads = 1);
LambdaSeries fredholm_series(const dist::UMatrix& A, long n_max, int threads = 1);

// largest N with p^N < 2^56, the reach of the elimination kernel
int elimination_precision_cap(int p);

// Same engine over the value field of a point matrix (entries must be integral).
// Precision is the smallest of prec_vp, the entry precisions and the kernel cap.
std::vector<PadicElement> fredholm_point(const dist::PointMatrix& A, long n_max, int prec_vp, int threads = 1);

// indices n with min_m (v(b_{n,m}) + m) < lambda(n), decided at precision
std::vector<long> bound_violations(const LambdaSeries& S);

enum class UnitFlag { Unit, NonUnit, Unknown };
std::string flag_str(UnitFlag f);
// whether b_{n, lambda(n)} is a unit of O_E; Unknown when lambda(n) >= Mx
UnitFlag unit_flag(const LambdaSeries& S, long n);

struct SpecializedCoeff {
    long n = 0;
    padic::PadicVal v;      // v_p(c_n(z)), exact or a lower bound
    ValQ floor;             // lambda(n) v_p(z)
    ValQ strong_floor;      // floor + min(v_p(z), v_p(pi_E) - v_p(z))
    UnitFlag flag = UnitFlag::Unknown;
    bool floor_ok = true;     // v >= floor, at precision
    bool equality_ok = true;  // unit flag <=> v = floor (when decidable)
    bool strong_ok = true;    // non-units satisfy the strong floor
    bool decided = true;      // valuation resolved below the precision
    bool ok() const { return floor_ok && equality_ok && strong_ok; }
};

struct Specialization {
    PadicElement z;
    ValQ vz;
    std::vector<SpecializedCoeff> coeffs;
    std::size_t violations() const;
};

// requires 0 < v_p(z) < v_p(pi_E)
Specialization specialize(const LambdaSeries& S, const PadicElement& z);
bool in_annulus(const LambdaSeries& S, const PadicElement& z);

// Polygon of the specialized values, with lambda(n) * unit as lower bounds for n_max < n <= horizon.
NewtonPolygon specialized_polygon(const std::vector<padic::PadicVal>& vals, int p, int t_prime, const ValQ& unit,
                                  long horizon);
NewtonPolygon specialized_polygon(const Specialization& s, const LambdaSeries& S, long horizon);

// ---- halo report ----

struct Interval {
    ValQ lo, hi;     // normalised slope range
    bool point;      // {lo} when true, (lo, hi) otherwise
    long rank = -1;  // number of slopes, -1 when unresolved
    std::string str() const;
    bool contains(const ValQ& x) const { return point ? x == lo : (lo < x && x < hi); }
};

struct TouchCheck {
    std::string z;
    ValQ vz;
    bool minus_vertex = false;
    bool plus_vertex = false;
    bool consecutive = false;
    bool slope_ok = false;
    bool ok() const { return minus_vertex && plus_vertex && consecutive && slope_ok; }
};

struct KEntry {
    int k = 2;
    long n_k = 0;
    long lambda_nk = 0;
    long window_lo = 0, window_hi = 0;
    std::vector<UnitFlag> flags;  // over [window_lo, window_hi]
    std::optional<long> n_minus, n_plus;
    std::vector<TouchCheck> checks;
};

struct ZCheck {
    std::string z;
    ValQ vz;
    std::size_t slopes_checked = 0;
    std::size_t slopes_outside = 0;    // measured slope outside its interval
    std::size_t uncertified = 0;       // segments needed but not certified
    std::size_t floor_violations = 0;  // specialization floors
    bool ok() const { return slopes_outside == 0 && uncertified == 0 && floor_violations == 0; }
};

struct HaloParams {
    int k_max = 4;
    std::vector<PadicElement> z_samples;
    long horizon = 0;  // tail bound reach; 0 picks 2 n_max
};

struct HaloReport {
    int p = 3, level = 0, w = 0, t_prime = 1;
    int s0 = 1;
    ValQ phi;  // phi(p^{c+1})
    std::vector<KEntry> ks;
    std::vector<Interval> intervals;
    std::vector<ZCheck> zs;
    bool all_ok() const;
    std::string str() const;
};

int halo_s0(int w);
// n_k = (k-1) p^{c+1} t'
long touch_index(int p, int level, int t_prime, int k);
// the weights k with k - 1 in {0} u {s0, s0 + 2, ...}, up to k_max
std::vector<int> halo_weights(int w, int k_max);
// throws PrecisionRefusal when N or Mx cannot decide the coefficients up to n_needed
void require_precision(const LambdaSeries& S, long n_needed);

HaloReport halo_report(const LambdaSeries& S, const HaloParams& params);

// default samples: v_p(z) = 1/phi(p^{c+1}), 1/phi(p^{c+2}) and a ramified generic point
std::vector<PadicElement> default_z_samples(int p, int level);

// ---- small slope scan ----

struct ScanEntry {
    std::string weight;
    int conductor = 0;
    ValQ vz;
    std::vector<ValQ> small_slopes;  // certified slopes below k-1
    bool all_tracked_small = false;
};

struct ScanResult {
    std::vector<ScanEntry> entries;
    std::optional<std::size_t> first;  // index of the first weight with all tracked slopes below k-1
    std::string diagnostics;
};

// Weights (k, w, eps1 = eta chi, eps2 = chi^-1) in the component of S with chi wild of growing conductor.
ScanResult small_slope_scan(const LambdaSeries& S, const weight::WeightComponent& comp, int k, int samples,
                            int tracked = 1);

// ---- constructed series ----

// c_n = u_n X^{lambda(n)} + extra terms of weighted valuation > lambda(n);
// u_n is a unit iff unit(n), otherwise u_n = pi_E.
LambdaSeries make_patterned_series(int p, int level, int w, int t_prime, int prec_vp, int x_trunc, long n_max,
                                   const std::function<bool(long)>& unit, std::uint64_t seed = 0);

}  // namespace halo::fredholm
