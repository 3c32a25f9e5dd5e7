#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "halo/padic/valq.hpp"

namespace halo::padic {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace mod {
inline u64 mul(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
inline u64 add(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    return s >= m ? s - m : s;
}
inline u64 sub(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }
u64 pow(u64 a, u64 e, u64 m);
// inverse of a unit a modulo m (gcd(a, m) = 1)
u64 inv(u64 a, u64 m);
// reduce a signed integer into [0, m)
u64 from_signed(std::int64_t a, u64 m);
// exponent of p in a nonzero integer
int vp(u64 a, int p);
int vp_factorial(std::int64_t n, int p);
}  // namespace mod

enum class FieldKind { Rational, Cyclotomic, Pure };

// A totally ramified extension of Q_p given by an Eisenstein polynomial.
// Elements of the ring of integers are stored as e coefficients mod p^cap
// in the basis 1, pi, ..., pi^{e-1}.
class ExtensionField {
public:
    static std::shared_ptr<const ExtensionField> qp(int p);
    // Q_p(zeta_{p^level}) with pi = zeta - 1; level 0 gives Q_p.
    static std::shared_ptr<const ExtensionField> cyclotomic(int p, int level);
    // Q_p(p^{1/e}), pi^e = p.
    static std::shared_ptr<const ExtensionField> pure(int p, int e);

    // largest n with p^n < 2^62
    static int max_cap(int p);

    int prime() const { return p_; }
    int ram_index() const { return e_; }
    int cap() const { return cap_; }
    u64 modulus() const { return pw_.back(); }
    u64 pow_p(int k) const { return pw_.at(static_cast<std::size_t>(k)); }
    FieldKind kind() const { return kind_; }
    int level() const { return level_; }
    // pi^e = sum_i r_i pi^i (mod p^cap)
    const std::vector<u64>& pi_power_e() const { return red_; }
    ValQ uniformizer_valuation() const { return ValQ(1, e_); }
    std::string describe() const;

    // out = a * b (all of length e)
    void mul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const;
    // pi-adic valuation of a coefficient vector, cap*e if zero mod p^cap
    int val_pi(std::span<const u64> a) const;

    // true when this field embeds canonically into target
    bool embeds_into(const ExtensionField& target) const;
    // image of pi under the canonical embedding, as coefficients in target
    std::vector<u64> image_of_pi(const ExtensionField& target) const;

private:
    ExtensionField(int p, int e, FieldKind kind, int level, std::vector<u64> red);

    int p_;
    int e_;
    int cap_;
    FieldKind kind_;
    int level_;
    std::vector<u64> pw_;
    std::vector<u64> red_;
};

using FieldPtr = std::shared_ptr<const ExtensionField>;

inline std::int64_t euler_phi_ppow(int p, int c) {
    if (c <= 0) return 1;
    std::int64_t r = p - 1;
    for (int i = 1; i < c; ++i) r *= p;
    return r;
}

}  // namespace halo::padic
