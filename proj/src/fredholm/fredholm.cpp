#include "halo/fredholm/fredholm.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace halo::fredholm {

using padic::u128;
using padic::u64;
using padic::ExtensionField;
using padic::PadicVal;

ValQ LambdaSeries::uniformizer_valuation() const { return ValQ(1, padic::euler_phi_ppow(p, level)); }

namespace {

// Lambda[T]/T^L arithmetic on flat arrays; a polynomial is L consecutive ring elements.
class PolyKernel {
public:
    PolyKernel(const LambdaRing& r, std::size_t L)
        : r_(r), e_(static_cast<std::size_t>(r.ram_index())), Mx_(static_cast<std::size_t>(r.x_trunc())),
          W_(r.width()), L_(L), s_(2 * e_ - 1), mod_(r.modulus()), acc_(L * Mx_ * s_), tmp_(W_) {
        if (!r.fast_mul_ok()) throw padic::PrecisionError("Fredholm elimination needs p^N < 2^56");
        if (L_ * Mx_ * e_ >= (static_cast<std::size_t>(1) << 16))
            throw std::invalid_argument("T-degree times X-truncation too large for the accumulators");
    }

    std::size_t width() const { return W_; }

    // out -= a * b, degrees below va + vb skipped
    void mul_sub(u64* out, const u64* a, std::size_t va, const u64* b, std::size_t vb) { run(out, a, va, b, vb, true); }
    // out = a * b
    void mul_set(u64* out, const u64* a, std::size_t va, const u64* b, std::size_t vb) { run(out, a, va, b, vb, false); }

private:
    void run(u64* out, const u64* a, std::size_t va, const u64* b, std::size_t vb, bool subtract) {
        const std::size_t lo = va + vb;
        if (!subtract) std::fill(out, out + L_ * W_, 0);
        if (lo >= L_) return;
        const std::size_t slab = Mx_ * s_;
        std::fill(acc_.begin() + static_cast<std::ptrdiff_t>(lo * slab), acc_.end(), 0);
        for (std::size_t i = va; i < L_; ++i) {
            const u64* ai = a + i * W_;
            for (std::size_t j = vb; i + j < L_; ++j) accumulate(ai, b + j * W_, &acc_[(i + j) * slab]);
        }
        for (std::size_t d = lo; d < L_; ++d) {
            reduce(&acc_[d * slab], tmp_.data());
            u64* o = out + d * W_;
            if (subtract)
                r_.sub(o, tmp_.data(), o);
            else
                std::copy(tmp_.begin(), tmp_.end(), o);
        }
    }

    void accumulate(const u64* a, const u64* b, u128* acc) const {
        if (e_ == 1) {
            for (std::size_t m1 = 0; m1 < Mx_; ++m1) {
                if (a[m1] == 0) continue;
                const u128 av = a[m1];
                u128* dst = acc + m1;
                const std::size_t top = Mx_ - m1;
                for (std::size_t m2 = 0; m2 < top; ++m2) dst[m2] += av * b[m2];
            }
            return;
        }
        for (std::size_t m1 = 0; m1 < Mx_; ++m1)
            for (std::size_t i1 = 0; i1 < e_; ++i1) {
                const u128 av = a[m1 * e_ + i1];
                if (av == 0) continue;
                for (std::size_t m2 = 0; m1 + m2 < Mx_; ++m2) {
                    u128* dst = acc + (m1 + m2) * s_ + i1;
                    const u64* src = b + m2 * e_;
                    for (std::size_t i2 = 0; i2 < e_; ++i2) dst[i2] += av * src[i2];
                }
            }
    }

    void reduce(const u128* acc, u64* out) const {
        if (e_ == 1) {
            for (std::size_t m = 0; m < Mx_; ++m) out[m] = static_cast<u64>(acc[m] % mod_);
            return;
        }
        const auto& red = r_.reduction();
        std::vector<u64> slot(s_);
        for (std::size_t m = 0; m < Mx_; ++m) {
            for (std::size_t k = 0; k < s_; ++k) slot[k] = static_cast<u64>(acc[m * s_ + k] % mod_);
            for (std::size_t k = s_ - 1; k >= e_; --k) {
                const u64 ck = slot[k];
                if (ck == 0) continue;
                for (std::size_t i = 0; i < e_; ++i)
                    if (red[i]) slot[k - e_ + i] = padic::mod::add(slot[k - e_ + i], padic::mod::mul(ck, red[i], mod_), mod_);
            }
            for (std::size_t i = 0; i < e_; ++i) out[m * e_ + i] = slot[i];
        }
    }

    const LambdaRing& r_;
    std::size_t e_, Mx_, W_, L_, s_;
    u64 mod_;
    std::vector<u128> acc_;
    std::vector<u64> tmp_;
};

std::size_t lowest_degree(const u64* poly, std::size_t L, std::size_t W) {
    for (std::size_t d = 0; d < L; ++d)
        for (std::size_t i = 0; i < W; ++i)
            if (poly[d * W + i]) return d;
    return L;
}

std::vector<std::vector<u64>> eliminate(const LambdaRing& ring, const std::vector<std::vector<u64>>& entries,
                                        std::size_t D, long n_max, int threads) {
    const std::size_t L = static_cast<std::size_t>(n_max) + 1;
    const std::size_t W = ring.width();
    const std::size_t PS = L * W;  // polynomial size
    std::vector<u64> B(D * D * PS, 0);
    std::vector<std::size_t> tv(D * D, L);
    auto at = [&](std::size_t i, std::size_t j) { return B.data() + (i * D + j) * PS; };
    const u64 mod = ring.modulus();
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) {
            u64* p = at(i, j);
            if (i == j) p[0] = 1;
            if (L > 1) {
                const auto& a = entries[i * D + j];
                for (std::size_t q = 0; q < W; ++q) p[W + q] = a[q] ? mod - a[q] : 0;
            }
            tv[i * D + j] = lowest_degree(p, L, W);
        }

    PolyKernel main_kernel(ring, L);
    std::vector<u64> det(PS, 0), inv(PS, 0), scratch(PS, 0);
    det[0] = 1;
    std::vector<u64> left(D * PS, 0);  // B(i,k) P^{-1}
    std::vector<std::size_t> left_v(D, L);
    const int nthreads = std::max(1, threads);
    std::vector<PolyKernel> kernels;
    for (int t = 0; t < nthreads; ++t) kernels.emplace_back(ring, L);

    for (std::size_t k = 0; k < D; ++k) {
        const u64* P = at(k, k);
        // P = 1 + O(T): inverse by the recurrence inv_d = -sum_{a>=1} P_a inv_{d-a}
        std::fill(inv.begin(), inv.end(), 0);
        inv[0] = 1;
        for (std::size_t d = 1; d < L; ++d) {
            u64* out = inv.data() + d * W;
            std::vector<u64> prod(W);
            for (std::size_t a = 1; a <= d; ++a) {
                ring.mul(P + a * W, inv.data() + (d - a) * W, prod.data());
                ring.sub(out, prod.data(), out);
            }
        }
        main_kernel.mul_set(scratch.data(), det.data(), 0, P, 0);
        det.swap(scratch);

        std::vector<std::size_t> rows, cols;
        for (std::size_t i = k + 1; i < D; ++i)
            if (tv[i * D + k] < L) rows.push_back(i);
        for (std::size_t j = k + 1; j < D; ++j)
            if (tv[k * D + j] < L) cols.push_back(j);
        if (rows.empty() || cols.empty()) continue;
        for (auto i : rows) {
            main_kernel.mul_set(left.data() + i * PS, at(i, k), tv[i * D + k], inv.data(), 0);
            left_v[i] = lowest_degree(left.data() + i * PS, L, W);
        }
        auto work = [&](std::size_t from, std::size_t to, PolyKernel& K) {
            for (std::size_t r = from; r < to; ++r) {
                const std::size_t i = rows[r];
                if (left_v[i] >= L) continue;
                for (auto j : cols) {
                    const std::size_t vr = tv[k * D + j];
                    if (left_v[i] + vr >= L) continue;
                    K.mul_sub(at(i, j), left.data() + i * PS, left_v[i], at(k, j), vr);
                    tv[i * D + j] = lowest_degree(at(i, j), L, W);
                }
            }
        };
        if (nthreads == 1 || rows.size() < 8) {
            work(0, rows.size(), kernels[0]);
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (rows.size() + static_cast<std::size_t>(nthreads) - 1) / static_cast<std::size_t>(nthreads);
            for (int t = 0; t < nthreads; ++t) {
                const std::size_t from = static_cast<std::size_t>(t) * chunk;
                const std::size_t to = std::min(rows.size(), from + chunk);
                if (from >= to) break;
                pool.emplace_back(work, from, to, std::ref(kernels[static_cast<std::size_t>(t)]));
            }
            for (auto& th : pool) th.join();
        }
    }
    std::vector<std::vector<u64>> out(L);
    for (std::size_t d = 0; d < L; ++d) out[d].assign(det.begin() + static_cast<std::ptrdiff_t>(d * W), det.begin() + static_cast<std::ptrdiff_t>((d + 1) * W));
    return out;
}

}  // namespace

std::vector<LambdaElem> fredholm_coefficients(const LambdaRing& ring, const linalg::Matrix<LambdaElem>& A, long n_max,
                                              int threads) {
    const std::size_t D = A.rows();
    if (A.cols() != D) throw std::invalid_argument("Fredholm series needs a square matrix");
    if (n_max < 0 || static_cast<std::size_t>(n_max) > D)
        throw std::invalid_argument("n_max must lie in [0, dim] = [0, " + std::to_string(D) + "]");
    std::vector<std::vector<u64>> entries(D * D);
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) {
            if (A(i, j).ring() != &ring) throw std::invalid_argument("matrix entries live in a different ring");
            entries[i * D + j] = A(i, j).data();
        }
    auto raw = eliminate(ring, entries, D, n_max, threads);
    std::vector<LambdaElem> c;
    for (auto& r : raw) {
        LambdaElem x(&ring);
        x.data() = std::move(r);
        c.push_back(std::move(x));
    }
    return c;
}

LambdaSeries fredholm_series(const dist::UMatrix& A, long n_max, int threads) {
    LambdaSeries S;
    S.ring = A.ring;
    S.p = A.ring->prime();
    S.t_prime = A.layout.t * A.layout.alg_dim;
    S.level = A.ring->field()->level();
    S.w = A.component.w;
    S.c = fredholm_coefficients(*A.ring, A.a, n_max, threads);
    return S;
}

int elimination_precision_cap(int p) {
    int N = 0;
    for (unsigned __int128 q = p; q < (static_cast<unsigned __int128>(1) << 56); q *= static_cast<unsigned>(p)) ++N;
    return N;
}

std::vector<PadicElement> fredholm_point(const dist::PointMatrix& A, long n_max, int prec_vp, int threads) {
    const std::size_t D = A.dim();
    int N = std::min(prec_vp, elimination_precision_cap(A.field->prime()));
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) {
            const auto& x = A.a(i, j);
            if (x.valuation().value < ValQ(0)) throw std::invalid_argument("point matrix has a non-integral entry");
            N = std::min<int>(N, static_cast<int>(x.precision().floor()));
        }
    if (N < 1) throw PrecisionRefusal("point matrix entries carry no precision");
    LambdaRing ring(A.field, N, 1);
    linalg::Matrix<LambdaElem> M(D, D, LambdaElem(&ring));
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) M(i, j) = LambdaElem::constant(&ring, A.a(i, j).with_precision(N));
    auto c = fredholm_coefficients(ring, M, n_max, threads);
    std::vector<PadicElement> out;
    for (const auto& x : c) out.push_back(x.coefficient(0));
    return out;
}

std::vector<long> bound_violations(const LambdaSeries& S) {
    auto lam = lambda_table(S.p, S.t_prime, S.n_max());
    std::vector<long> bad;
    for (long n = 0; n <= S.n_max(); ++n)
        if (padic::check_weighted_bound(S.c[static_cast<std::size_t>(n)], lam[static_cast<std::size_t>(n)]) ==
            padic::BoundCheck::Violated)
            bad.push_back(n);
    return bad;
}

std::string flag_str(UnitFlag f) {
    switch (f) {
        case UnitFlag::Unit: return "unit";
        case UnitFlag::NonUnit: return "nonunit";
        default: return "unknown";
    }
}

UnitFlag unit_flag(const LambdaSeries& S, long n) {
    const long lam = lambda_table(S.p, S.t_prime, n)[static_cast<std::size_t>(n)];
    if (n > S.n_max() || lam >= S.ring->x_trunc()) return UnitFlag::Unknown;
    return S.c[static_cast<std::size_t>(n)].coeff_val_pi(static_cast<int>(lam)) == 0 ? UnitFlag::Unit : UnitFlag::NonUnit;
}

std::size_t Specialization::violations() const {
    return static_cast<std::size_t>(std::count_if(coeffs.begin(), coeffs.end(), [](const SpecializedCoeff& c) { return !c.ok(); }));
}

bool in_annulus(const LambdaSeries& S, const PadicElement& z) {
    auto v = z.valuation();
    return v.exact && ValQ(0) < v.value && v.value < S.uniformizer_valuation();
}

Specialization specialize(const LambdaSeries& S, const PadicElement& z) {
    if (!in_annulus(S, z))
        throw std::invalid_argument("z = " + z.str() + " lies outside the boundary annulus 0 < v < " +
                                    S.uniformizer_valuation().str());
    Specialization out;
    out.z = z;
    out.vz = z.valuation().value;
    const ValQ vpi = S.uniformizer_valuation();
    const ValQ extra = padic::min(out.vz, vpi - out.vz);
    auto lam = lambda_table(S.p, S.t_prime, S.n_max());
    for (long n = 0; n <= S.n_max(); ++n) {
        SpecializedCoeff sc;
        sc.n = n;
        sc.v = S.c[static_cast<std::size_t>(n)].evaluate(z).valuation();
        sc.floor = out.vz * ValQ(lam[static_cast<std::size_t>(n)]);
        sc.strong_floor = sc.floor + extra;
        sc.flag = unit_flag(S, n);
        // an inexact value is only known to be >= its precision
        if (sc.v.exact) sc.floor_ok = sc.v.value >= sc.floor;
        sc.decided = sc.v.exact || sc.v.value > sc.strong_floor;
        if (sc.flag == UnitFlag::Unit) {
            if (sc.v.exact)
                sc.equality_ok = sc.v.value == sc.floor;
            else
                sc.equality_ok = !(sc.v.value > sc.floor);
        } else if (sc.flag == UnitFlag::NonUnit) {
            sc.equality_ok = !(sc.v.exact && sc.v.value == sc.floor);
            if (sc.v.exact) sc.strong_ok = sc.v.value >= sc.strong_floor;
        }
        out.coeffs.push_back(sc);
    }
    return out;
}

NewtonPolygon specialized_polygon(const std::vector<PadicVal>& vals, int p, int t_prime, const ValQ& unit,
                                  long horizon) {
    const long n_max = static_cast<long>(vals.size()) - 1;
    const long top = std::max(n_max, horizon);
    auto lam = lambda_table(p, t_prime, top);
    std::vector<NPPoint> pts;
    for (long n = 0; n <= top; ++n) {
        const ValQ bound = unit * ValQ(lam[static_cast<std::size_t>(n)]);
        if (n == 0) {
            pts.push_back({0, ValQ(0), true});
        } else if (n <= n_max) {
            const auto& v = vals[static_cast<std::size_t>(n)];
            pts.push_back({n, v.exact ? v.value : padic::max(v.value, bound), v.exact});
        } else {
            pts.push_back({n, bound, false});
        }
    }
    return NewtonPolygon(std::move(pts));
}

NewtonPolygon specialized_polygon(const Specialization& s, const LambdaSeries& S, long horizon) {
    std::vector<PadicVal> vals;
    for (const auto& c : s.coeffs) vals.push_back(c.v);
    return specialized_polygon(vals, S.p, S.t_prime, s.vz, horizon);
}

// ---- halo ----

std::string Interval::str() const {
    std::string s = point ? "{" + lo.str() + "}" : "(" + lo.str() + "," + hi.str() + ")";
    return s + " rank=" + (rank >= 0 ? std::to_string(rank) : std::string("?"));
}

int halo_s0(int w) { return (w % 2 == 0) ? 1 : 2; }

long touch_index(int p, int level, int t_prime, int k) {
    long n = static_cast<long>(k - 1) * t_prime;
    for (int i = 0; i <= level; ++i) n *= p;
    return n;
}

std::vector<int> halo_weights(int w, int k_max) {
    std::vector<int> ks{1};
    for (int k = halo_s0(w) + 1; k <= k_max; k += 2) ks.push_back(k);
    return ks;
}

void require_precision(const LambdaSeries& S, long n_needed) {
    if (n_needed > S.n_max())
        throw std::invalid_argument("series known to n = " + std::to_string(S.n_max()) + ", need " +
                                    std::to_string(n_needed));
    const long lam = lambda_table(S.p, S.t_prime, n_needed)[static_cast<std::size_t>(n_needed)];
    const long need_N = (ValQ(lam) * S.uniformizer_valuation()).ceil() + 4;
    std::ostringstream os;
    if (S.ring->precision() < need_N)
        os << "precision N = " << S.ring->precision() << " too small: need N >= " << need_N << " (lambda("
           << n_needed << ") = " << lam << ")";
    if (S.ring->x_trunc() <= lam) {
        if (!os.str().empty()) os << "; ";
        os << "X-truncation Mx = " << S.ring->x_trunc() << " too small: need Mx >= " << lam + 1;
    }
    if (!os.str().empty()) throw PrecisionRefusal(os.str());
}

std::vector<PadicElement> default_z_samples(int p, int level) {
    std::vector<PadicElement> zs;
    zs.push_back(PadicElement::uniformizer(ExtensionField::cyclotomic(p, level + 1)));
    zs.push_back(PadicElement::uniformizer(ExtensionField::cyclotomic(p, level + 2)));
    if (level == 0)
        zs.push_back(PadicElement::uniformizer(ExtensionField::pure(p, 3)) * PadicElement::from_int(ExtensionField::pure(p, 3), 1 + p));
    else
        zs.push_back(PadicElement::uniformizer(ExtensionField::cyclotomic(p, level + 2)).pow(2));
    return zs;
}

HaloReport halo_report(const LambdaSeries& S, const HaloParams& params) {
    HaloReport R;
    R.p = S.p;
    R.level = S.level;
    R.w = S.w;
    R.t_prime = S.t_prime;
    R.s0 = halo_s0(S.w);
    R.phi = ValQ(padic::euler_phi_ppow(S.p, S.level + 1));
    const auto weights = halo_weights(S.w, params.k_max);
    long n_needed = 0;
    for (int k : weights) n_needed = std::max(n_needed, touch_index(S.p, S.level, S.t_prime, k) + S.t_prime);
    require_precision(S, n_needed);

    for (int k : weights) {
        KEntry e;
        e.k = k;
        e.n_k = k == 1 ? 0 : touch_index(S.p, S.level, S.t_prime, k);
        e.lambda_nk = lambda_table(S.p, S.t_prime, e.n_k)[static_cast<std::size_t>(e.n_k)];
        e.window_lo = std::max(0L, e.n_k - S.t_prime);
        e.window_hi = e.n_k + S.t_prime;
        for (long i = e.window_lo; i <= e.window_hi; ++i) e.flags.push_back(unit_flag(S, i));
        for (long i = e.window_lo; i <= e.n_k; ++i)
            if (e.flags[static_cast<std::size_t>(i - e.window_lo)] == UnitFlag::Unit) {
                e.n_minus = i;
                break;
            }
        for (long i = e.window_hi; i >= e.n_k; --i)
            if (e.flags[static_cast<std::size_t>(i - e.window_lo)] == UnitFlag::Unit) {
                e.n_plus = i;
                break;
            }
        R.ks.push_back(std::move(e));
    }
    for (std::size_t a = 0; a < R.ks.size(); ++a) {
        const auto& A = R.ks[a];
        Interval pt{ValQ(A.k - 1), ValQ(A.k - 1), true, -1};
        if (A.n_minus && A.n_plus) pt.rank = *A.n_plus - *A.n_minus;
        R.intervals.push_back(pt);
        if (a + 1 < R.ks.size()) {
            const auto& B = R.ks[a + 1];
            Interval open{ValQ(A.k - 1), ValQ(B.k - 1), false, -1};
            if (A.n_plus && B.n_minus) open.rank = *B.n_minus - *A.n_plus;
            R.intervals.push_back(open);
        }
    }

    const long horizon = params.horizon > 0 ? params.horizon : 2 * S.n_max();
    for (const auto& z : params.z_samples) {
        auto spec = specialize(S, z);
        auto poly = specialized_polygon(spec, S, horizon);
        ZCheck zc;
        zc.z = z.str();
        zc.vz = spec.vz;
        zc.floor_violations = spec.violations();
        const ValQ unit = R.phi * spec.vz;
        for (auto& e : R.ks) {
            TouchCheck tc;
            tc.z = zc.z;
            tc.vz = spec.vz;
            if (e.n_minus && e.n_plus) {
                tc.minus_vertex = poly.certified_vertex(*e.n_minus);
                tc.plus_vertex = poly.certified_vertex(*e.n_plus);
                if (*e.n_minus == *e.n_plus) {
                    tc.consecutive = tc.slope_ok = true;
                } else {
                    for (const auto& s : poly.segments())
                        if (s.start == *e.n_minus && s.end == *e.n_plus) {
                            tc.consecutive = true;
                            tc.slope_ok = s.slope == unit * ValQ(e.k - 1);
                        }
                }
            }
            e.checks.push_back(tc);
        }
        // classify every segment up to the last touch point
        const auto& last = R.ks.back();
        const long end = last.n_plus ? *last.n_plus : last.n_k;
        for (const auto& s : poly.segments()) {
            if (s.start >= end) break;
            const Interval* home = nullptr;
            for (std::size_t a = 0; a < R.ks.size() && !home; ++a) {
                const auto& A = R.ks[a];
                if (A.n_minus && A.n_plus && *A.n_minus <= s.start && s.end <= *A.n_plus)
                    home = &R.intervals[2 * a];
                else if (a + 1 < R.ks.size() && A.n_plus && R.ks[a + 1].n_minus && *A.n_plus <= s.start &&
                         s.end <= *R.ks[a + 1].n_minus)
                    home = &R.intervals[2 * a + 1];
            }
            zc.slopes_checked += static_cast<std::size_t>(s.length());
            if (!s.certified) zc.uncertified += static_cast<std::size_t>(s.length());
            // compare slope / (phi v(z)) with the interval without dividing
            bool inside = false;
            if (home) {
                if (home->point)
                    inside = s.slope == unit * home->lo;
                else
                    inside = unit * home->lo < s.slope && s.slope < unit * home->hi;
            }
            if (!inside) zc.slopes_outside += static_cast<std::size_t>(s.length());
        }
        R.zs.push_back(zc);
    }
    return R;
}

bool HaloReport::all_ok() const {
    for (const auto& e : ks) {
        if (!e.n_minus || !e.n_plus) return false;
        for (const auto& c : e.checks)
            if (!c.ok()) return false;
    }
    for (const auto& z : zs)
        if (!z.ok()) return false;
    return true;
}

std::string HaloReport::str() const {
    std::ostringstream os;
    os << "# component p=" << p << " c=" << level << " w=" << w << " t'=" << t_prime << " s0=" << s0
       << " phi(p^(c+1))=" << phi.str() << "\n";
    for (const auto& e : ks) {
        os << "k=" << e.k << " n_k=" << e.n_k << " lambda(n_k)=" << e.lambda_nk << " window=[" << e.window_lo << ","
           << e.window_hi << "] flags=";
        for (std::size_t i = 0; i < e.flags.size(); ++i) os << (i ? "," : "") << flag_str(e.flags[i]);
        os << " n-=" << (e.n_minus ? std::to_string(*e.n_minus) : "none")
           << " n+=" << (e.n_plus ? std::to_string(*e.n_plus) : "none") << "\n";
        for (const auto& c : e.checks)
            os << "  z v=" << c.vz.str() << " minus_vertex=" << c.minus_vertex << " plus_vertex=" << c.plus_vertex
               << " consecutive=" << c.consecutive << " slope=" << c.slope_ok << (c.ok() ? " pass" : " FAIL") << "\n";
    }
    for (const auto& I : intervals) os << "interval " << I.str() << "\n";
    for (const auto& z : zs)
        os << "z v=" << z.vz.str() << " slopes=" << z.slopes_checked << " outside=" << z.slopes_outside
           << " uncertified=" << z.uncertified << " floor_violations=" << z.floor_violations
           << (z.ok() ? " pass" : " FAIL") << "\n";
    os << "overall " << (all_ok() ? "pass" : "FAIL") << "\n";
    return os.str();
}

// ---- small slope scan ----

ScanResult small_slope_scan(const LambdaSeries& S, const weight::WeightComponent& comp, int k, int samples,
                            int tracked) {
    if ((k - comp.w) % 2 != 0 || k < 2) throw std::invalid_argument("need k >= 2 and k = w mod 2");
    ScanResult res;
    const int p = comp.p;
    const int c = comp.field_level();
    const int e2 = (comp.w - k + 2) / 2;
    const int a = (((e2 - comp.omega2) % (p - 1)) + (p - 1)) % (p - 1);
    std::ostringstream diag;
    for (int i = 0; i < samples; ++i) {
        const int m = c + 2 + i;
        auto chi = weight::FiniteCharacter::make(p, a, 1, m);
        auto eps1 = comp.eta * chi;
        auto eps2 = chi.inverse();
        auto wp = weight::make_locally_algebraic(p, k, comp.w, eps1, eps2);
        if (!(wp.component == comp)) {
            diag << "conductor " << m << ": weight lands in " << wp.component.str() << "\n";
            continue;
        }
        auto [z, vz] = weight::z_coordinate(wp);
        ScanEntry e;
        e.weight = wp.str();
        e.conductor = m;
        e.vz = vz.value;
        if (!in_annulus(S, z)) {
            diag << "conductor " << m << ": z outside the annulus\n";
            continue;
        }
        auto spec = specialize(S, z);
        auto poly = specialized_polygon(spec, S, 2 * S.n_max());
        auto sl = poly.slopes();
        bool all = sl.count() >= static_cast<std::size_t>(tracked);
        for (std::size_t j = 0; j < sl.count(); ++j) {
            const bool small = sl.slopes[j] < ValQ(k - 1);
            if (small && sl.certified[j]) e.small_slopes.push_back(sl.slopes[j]);
            if (j < static_cast<std::size_t>(tracked) && !(small && sl.certified[j])) all = false;
        }
        e.all_tracked_small = all;
        res.entries.push_back(e);
        if (all && !res.first) res.first = res.entries.size() - 1;
    }
    res.diagnostics = diag.str();
    return res;
}

// ---- constructed series ----

LambdaSeries make_patterned_series(int p, int level, int w, int t_prime, int prec_vp, int x_trunc, long n_max,
                                   const std::function<bool(long)>& unit, std::uint64_t seed) {
    auto E = ExtensionField::cyclotomic(p, level);
    LambdaSeries S;
    S.ring = std::make_shared<const LambdaRing>(E, prec_vp, x_trunc);
    S.p = p;
    S.t_prime = t_prime;
    S.level = level;
    S.w = w;
    const LambdaRing* R = S.ring.get();
    auto lam = lambda_table(p, t_prime, n_max);
    std::mt19937_64 rng(seed);
    const int e = E->ram_index();
    const long cap = static_cast<long>(e) * prec_vp;
    auto pi = PadicElement::uniformizer(E);
    auto rand_unit = [&]() {
        std::int64_t u;
        do u = static_cast<std::int64_t>(rng() % 1000) + 1;
        while (u % p == 0);
        return PadicElement::from_int(E, u);
    };
    auto put = [&](LambdaElem& x, int m, const PadicElement& v) {
        auto c = R->lift(v);
        std::copy(c.begin(), c.end(), x.data().begin() + static_cast<std::ptrdiff_t>(m * e));
    };
    for (long n = 0; n <= n_max; ++n) {
        const long L = lam[static_cast<std::size_t>(n)];
        if (L >= x_trunc) throw std::invalid_argument("X-truncation below lambda(" + std::to_string(n) + ")");
        LambdaElem x(R);
        if (n == 0) {
            x = LambdaElem::from_int(R, 1);
        } else {
            put(x, static_cast<int>(L), unit(n) ? rand_unit() : pi * rand_unit());
            for (long m = 0; m < L; ++m)
                if (rng() % 2 && L - m + 1 < cap) put(x, static_cast<int>(m), pi.pow(L - m + 1) * rand_unit());
            for (long m = L + 1; m < x_trunc; ++m)
                if (rng() % 2) put(x, static_cast<int>(m), PadicElement::from_int(E, static_cast<std::int64_t>(rng() % 10000)));
        }
        S.c.push_back(std::move(x));
    }
    return S;
}

}  // namespace halo::fredholm
