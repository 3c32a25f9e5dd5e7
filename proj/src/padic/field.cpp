#include "halo/padic/field.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace halo::padic {

namespace mod {

u64 pow(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mul(r, a, m);
        a = mul(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 inv(u64 a, u64 m) {
    __int128 t = 0, nt = 1, r = m, nr = a % m;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw std::domain_error("mod::inv: not invertible");
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

u64 from_signed(std::int64_t a, u64 m) {
    if (a >= 0) return static_cast<u64>(a) % m;
    u64 r = static_cast<u64>(-(a + 1)) % m;  // avoids overflow at INT64_MIN
    return m - 1 - r;
}

int vp(u64 a, int p) {
    int v = 0;
    while (a % static_cast<u64>(p) == 0) {
        a /= static_cast<u64>(p);
        ++v;
    }
    return v;
}

int vp_factorial(std::int64_t n, int p) {
    int v = 0;
    while (n > 0) {
        n /= p;
        v += static_cast<int>(n);
    }
    return v;
}

}  // namespace mod

int ExtensionField::max_cap(int p) {
    int n = 0;
    u128 x = 1;
    const u128 lim = static_cast<u128>(1) << 62;
    while (x * static_cast<u128>(p) < lim) {
        x *= static_cast<u128>(p);
        ++n;
    }
    return n;
}

ExtensionField::ExtensionField(int p, int e, FieldKind kind, int level, std::vector<u64> red)
    : p_(p), e_(e), cap_(max_cap(p)), kind_(kind), level_(level), red_(std::move(red)) {
    pw_.resize(static_cast<std::size_t>(cap_) + 1);
    pw_[0] = 1;
    for (int i = 1; i <= cap_; ++i) pw_[static_cast<std::size_t>(i)] = pw_[static_cast<std::size_t>(i) - 1] * static_cast<u64>(p);
}

namespace {

void check_prime(int p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("prime must be odd and >= 3");
    for (int d = 3; d * d <= p; d += 2)
        if (p % d == 0) throw std::invalid_argument("p is not prime: " + std::to_string(p));
}

std::mutex cache_mutex;
std::map<std::tuple<int, int, int>, FieldPtr> cache;

}  // namespace

FieldPtr ExtensionField::qp(int p) { return cyclotomic(p, 0); }

FieldPtr ExtensionField::cyclotomic(int p, int level) {
    check_prime(p);
    if (level < 0) throw std::invalid_argument("cyclotomic level must be >= 0");
    std::lock_guard lock(cache_mutex);
    auto key = std::make_tuple(0, p, level);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const int cap = max_cap(p);
    u64 m = 1;
    for (int i = 0; i < cap; ++i) m *= static_cast<u64>(p);
    FieldPtr f;
    if (level == 0) {
        f.reset(new ExtensionField(p, 1, FieldKind::Rational, 0, {static_cast<u64>(p)}));
    } else {
        const int e = static_cast<int>(euler_phi_ppow(p, level));
        const int step = e / (p - 1);  // p^{level-1}
        // Pascal rows mod p^cap up to e
        std::vector<std::vector<u64>> C(static_cast<std::size_t>(e) + 1);
        for (int n = 0; n <= e; ++n) {
            auto& row = C[static_cast<std::size_t>(n)];
            row.assign(static_cast<std::size_t>(n) + 1, 1);
            for (int i = 1; i < n; ++i)
                row[static_cast<std::size_t>(i)] =
                    mod::add(C[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(i) - 1],
                             C[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(i)], m);
        }
        // Phi_{p^level}(1 + pi) = sum_{j<p} (1+pi)^{j p^{level-1}}
        std::vector<u64> poly(static_cast<std::size_t>(e) + 1, 0);
        for (int j = 0; j < p; ++j) {
            const int n = j * step;
            for (int i = 0; i <= n; ++i)
                poly[static_cast<std::size_t>(i)] =
                    mod::add(poly[static_cast<std::size_t>(i)], C[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)], m);
        }
        std::vector<u64> red(static_cast<std::size_t>(e));
        for (int i = 0; i < e; ++i) red[static_cast<std::size_t>(i)] = mod::sub(0, poly[static_cast<std::size_t>(i)], m);
        f.reset(new ExtensionField(p, e, FieldKind::Cyclotomic, level, std::move(red)));
    }
    cache.emplace(key, f);
    return f;
}

FieldPtr ExtensionField::pure(int p, int e) {
    check_prime(p);
    if (e < 1) throw std::invalid_argument("ramification index must be >= 1");
    if (e == 1) return qp(p);
    std::lock_guard lock(cache_mutex);
    auto key = std::make_tuple(1, p, e);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<u64> red(static_cast<std::size_t>(e), 0);
    red[0] = static_cast<u64>(p);
    FieldPtr f(new ExtensionField(p, e, FieldKind::Pure, 0, std::move(red)));
    cache.emplace(key, f);
    return f;
}

std::string ExtensionField::describe() const {
    switch (kind_) {
        case FieldKind::Rational: return "Q" + std::to_string(p_);
        case FieldKind::Cyclotomic: return "Q" + std::to_string(p_) + "(zeta_" + std::to_string(p_) + "^" + std::to_string(level_) + ")";
        case FieldKind::Pure: return "Q" + std::to_string(p_) + "(" + std::to_string(p_) + "^(1/" + std::to_string(e_) + "))";
    }
    return "?";
}

void ExtensionField::mul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const {
    const u64 m = modulus();
    if (e_ == 1) {
        out[0] = mod::mul(a[0], b[0], m);
        return;
    }
    const auto e = static_cast<std::size_t>(e_);
    std::vector<u64> c(2 * e - 1, 0);
    for (std::size_t i = 0; i < e; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < e; ++j)
            if (b[j] != 0) c[i + j] = mod::add(c[i + j], mod::mul(a[i], b[j], m), m);
    }
    for (std::size_t k = 2 * e - 2; k >= e; --k) {
        const u64 ck = c[k];
        if (ck == 0) continue;
        for (std::size_t i = 0; i < e; ++i)
            if (red_[i] != 0) c[k - e + i] = mod::add(c[k - e + i], mod::mul(ck, red_[i], m), m);
    }
    for (std::size_t i = 0; i < e; ++i) out[i] = c[i];
}

int ExtensionField::val_pi(std::span<const u64> a) const {
    int best = e_ * cap_;
    for (int i = 0; i < e_; ++i) {
        const u64 x = a[static_cast<std::size_t>(i)];
        if (x == 0) continue;
        best = std::min(best, e_ * mod::vp(x, p_) + i);
    }
    return best;
}

bool ExtensionField::embeds_into(const ExtensionField& t) const {
    if (p_ != t.p_) return false;
    if (kind_ == FieldKind::Rational) return true;
    if (kind_ == FieldKind::Cyclotomic) return t.kind_ == FieldKind::Cyclotomic && level_ <= t.level_;
    return t.kind_ == FieldKind::Pure && t.e_ % e_ == 0;
}

std::vector<u64> ExtensionField::image_of_pi(const ExtensionField& t) const {
    if (!embeds_into(t)) throw std::invalid_argument("no embedding " + describe() + " -> " + t.describe());
    const auto te = static_cast<std::size_t>(t.e_);
    std::vector<u64> r(te, 0);
    if (kind_ == FieldKind::Rational) {
        r[0] = static_cast<u64>(p_);
        return r;
    }
    std::vector<u64> base(te, 0), acc(te, 0);
    if (kind_ == FieldKind::Cyclotomic) {
        // (1 + pi_t)^{p^{j-c}} - 1
        base[0] = 1;
        if (te > 1) base[1] = 1;
        else base[0] = mod::add(1, static_cast<u64>(p_), t.modulus());
        acc = base;
        for (int s = 0; s < t.level_ - level_; ++s) {
            std::vector<u64> x = acc;
            for (int j = 1; j < p_; ++j) t.mul(x, acc, x);
            acc = x;
        }
        acc[0] = mod::sub(acc[0], 1, t.modulus());
        return acc;
    }
    // pure: pi_e = pi_t^{t.e / e}
    const int k = t.e_ / e_;
    acc.assign(te, 0);
    if (k < t.e_) {
        acc[static_cast<std::size_t>(k)] = 1;
        return acc;
    }
    acc[0] = static_cast<u64>(p_);  // k == t.e only when e == 1
    return acc;
}

}  // namespace halo::padic
