#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <tuple>

#include <gmpxx.h>

#include "errors.hpp"

namespace sqif {

// Distances and regulators are natural-log reals. long double on x86-64
// carries a 64-bit significand, which keeps every single delta evaluation
// below the 2^-60 relative-error budget.
using real_t = long double;

inline std::int64_t isqrt(std::int64_t n) {
    assert(n >= 0);
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline mpz_class isqrt(const mpz_class& n) {
    assert(n >= 0);
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square(std::int64_t n) {
    if (n < 0) return false;
    std::int64_t r = isqrt(n);
    return r * r == n;
}

inline bool is_square(const mpz_class& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

inline mpz_class gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

// g = a*x + b*y with g = gcd(a, b) >= 0.
inline std::tuple<mpz_class, mpz_class, mpz_class> ext_gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return {g, x, y};
}

inline std::int64_t fdiv(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Jacobi symbol (a/n) for odd n >= 3.
inline int jacobi(const mpz_class& a, const mpz_class& n) {
    if (n < 3 || mpz_even_p(n.get_mpz_t()))
        throw input_error("jacobi: modulus must be odd and >= 3");
    return mpz_jacobi(a.get_mpz_t(), n.get_mpz_t());
}

inline mpz_class pow_mod(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

// Baillie-PSW followed by Miller-Rabin rounds; no composite below 2^64
// passes, and false positives above that are vanishingly unlikely.
inline bool is_probable_prime(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

inline real_t to_real(std::int64_t x) { return static_cast<real_t>(x); }

inline real_t log_abs(std::int64_t x) {
    assert(x != 0);
    return std::log(std::fabs(static_cast<real_t>(x)));
}

// Nearest long double, good to ~2^-63 relative error at any magnitude.
inline real_t to_real(const mpz_class& z) {
    std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
    if (bits <= 62) return static_cast<real_t>(mpz_get_si(z.get_mpz_t()));
    mpz_class a = abs(z);
    long shift = static_cast<long>(bits) - 126;
    if (shift < 0) shift = 0;
    mpz_class top = a >> static_cast<unsigned long>(shift);
    mpz_class hi = top >> 63;
    mpz_class lo = top - (hi << 63);
    real_t v = std::ldexp(static_cast<real_t>(mpz_get_ui(hi.get_mpz_t())), 63) +
               static_cast<real_t>(mpz_get_ui(lo.get_mpz_t()));
    v = std::ldexp(v, static_cast<int>(shift));
    return z < 0 ? -v : v;
}

// ln|z| without overflow for arbitrarily large z.
inline real_t log_abs(const mpz_class& z) {
    assert(z != 0);
    std::size_t bits = mpz_sizeinbase(z.get_mpz_t(), 2);
    if (bits <= 62) return std::log(std::fabs(static_cast<real_t>(mpz_get_si(z.get_mpz_t()))));
    mpz_class a = abs(z);
    long shift = static_cast<long>(bits) - 126;
    if (shift < 0) shift = 0;
    mpz_class top = a >> static_cast<unsigned long>(shift);
    return std::log(to_real(top)) + static_cast<real_t>(shift) * std::numbers::ln2_v<real_t>;
}

// ln(p + q*sqrt(n)) for p, q > 0, stable for huge convergents.
inline real_t log_quad(const mpz_class& p, const mpz_class& q, const mpz_class& n) {
    assert(p > 0 && q > 0);
    real_t lp = log_abs(p);
    real_t lq = log_abs(q) + real_t(0.5) * log_abs(n);
    real_t hi = std::max(lp, lq), lo = std::min(lp, lq);
    return hi + std::log1p(std::exp(lo - hi));
}

// Neumaier compensated accumulator for long chains of delta terms.
struct comp_sum {
    real_t sum = 0, comp = 0;

    void add(real_t x) {
        real_t t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    real_t value() const { return sum + comp; }
};

}  // namespace sqif
