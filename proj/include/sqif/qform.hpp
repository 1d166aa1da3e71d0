#pragma once

#include <cstdint>
#include <utility>

#include "intops.hpp"

namespace sqif {

// Binary quadratic form a*X^2 + b*X*Y + c*Y^2 over arbitrary-precision
// integers. Pipeline forms all share the discriminant 4N.
struct qform {
    mpz_class a, b, c;

    friend bool operator==(const qform&, const qform&) = default;
};

inline mpz_class discriminant(const qform& f) { return f.b * f.b - 4 * f.a * f.c; }

// Per-discriminant constants shared across many operator applications.
struct disc_ctx {
    mpz_class delta;
    mpz_class root;     // isqrt(delta)
    real_t sqrt_delta;  // sqrt(delta) to long double precision
    real_t log_delta;

    explicit disc_ctx(mpz_class d) : delta(std::move(d)) {
        if (delta <= 0) throw input_error("discriminant must be positive");
        root = isqrt(delta);
        if (root * root == delta) throw square_input_error("discriminant must be nonsquare");
        sqrt_delta = std::sqrt(to_real(delta));
        log_delta = log_abs(delta);
    }
};

inline disc_ctx context_of(const qform& f) { return disc_ctx(discriminant(f)); }

// Reducedness test |sqrt(D) - 2|a|| < b < sqrt(D), decided by integer
// comparisons only (both sides squared, with sign case analysis).
inline bool is_reduced(const qform& f, const disc_ctx& ctx) {
    if (f.b <= 0) return false;
    if (f.b * f.b >= ctx.delta) return false;
    mpz_class t = 2 * abs(f.a) - f.b;
    if (t >= 0 && t * t >= ctx.delta) return false;  // sqrt(D) - 2|a| < b
    t = 2 * abs(f.a) + f.b;
    return t * t > ctx.delta;  // -b < sqrt(D) - 2|a|
}

inline bool is_reduced(const qform& f) { return is_reduced(f, context_of(f)); }

namespace detail {

// The unique r with r = -b (mod 2m) lying in the window of the reduction
// operator: (-|m|, |m|] when sqrt(D) < |m|, else (sqrt(D) - 2|m|, sqrt(D)).
inline mpz_class reduction_r(const mpz_class& b, const mpz_class& m, const disc_ctx& ctx) {
    mpz_class two_m = 2 * abs(m);
    mpz_class r = fdiv(-b, two_m);  // quotient
    r = -b - r * two_m;             // (-b) mod 2|m|, in [0, 2|m|)
    if (ctx.delta < m * m) {
        if (r > abs(m)) r -= two_m;
    } else {
        r += fdiv(ctx.root - r, two_m) * two_m;
    }
    return r;
}

}  // namespace detail

// Standard reduction operator rho(a,b,c) = (c, r(-b,c), (r^2 - D)/(4c)).
inline qform rho(const qform& f, const disc_ctx& ctx) {
    if (f.a == 0 || f.c == 0) throw input_error("rho: form must have nonzero outer coefficients");
    mpz_class r = detail::reduction_r(f.b, f.c, ctx);
    mpz_class c_next = (r * r - ctx.delta) / (4 * f.c);
    return {f.c, std::move(r), std::move(c_next)};
}

inline qform rho(const qform& f) { return rho(f, context_of(f)); }

// Inverse reduction operator rho^{-1}(a,b,c) = ((r(-b,a)^2 - D)/(4a), r(-b,a), a),
// the inverse of rho on reduced forms.
inline qform rho_inv(const qform& f, const disc_ctx& ctx) {
    if (f.a == 0) throw input_error("rho_inv: form must have nonzero first coefficient");
    mpz_class r = detail::reduction_r(f.b, f.a, ctx);
    mpz_class a_next = (r * r - ctx.delta) / (4 * f.a);
    return {std::move(a_next), std::move(r), f.a};
}

inline qform rho_inv(const qform& f) { return rho_inv(f, context_of(f)); }

struct reduce_result {
    qform form;
    std::uint64_t steps = 0;
};

// Iterate rho until reduced; at most 2 + ceil(log2(|c|/sqrt(D))) steps.
inline reduce_result reduce(qform f, const disc_ctx& ctx) {
    std::uint64_t steps = 0;
    while (!is_reduced(f, ctx)) {
        f = rho(f, ctx);
        ++steps;
    }
    return {std::move(f), steps};
}

inline reduce_result reduce(qform f) {
    disc_ctx ctx = context_of(f);
    return reduce(std::move(f), ctx);
}

// Gauss composition. beta = (b1+b2)/2, n = gcd(a1,a2,beta) with Bezout
// witnesses a1*s + a2*u + beta*v = n, d0 = gcd(n,c1,c2,(b1-b2)/2):
//   (d0*a1*a2/n^2, b1 + (2*a1/n)*(s*(b2-b1)/2 - c1*v), (b3^2 - D)/(4*a3)).
// The witness policy (extended gcd applied twice) keeps |c3| = O(N^4).
inline qform compose(const qform& f, const qform& g, const disc_ctx& ctx) {
    if (discriminant(f) != ctx.delta || discriminant(g) != ctx.delta)
        throw input_error("compose: discriminants must match");
    mpz_class beta = (f.b + g.b) / 2;
    auto [g1, x1, y1] = ext_gcd(f.a, g.a);   // a1*x1 + a2*y1 = g1
    auto [n, x2, v] = ext_gcd(g1, beta);     // g1*x2 + beta*v = n
    mpz_class s = x1 * x2;
    mpz_class d0 = gcd(gcd(n, f.c), gcd(g.c, (f.b - g.b) / 2));
    mpz_class a3 = d0 * f.a * g.a / (n * n);
    mpz_class b3 = f.b + (2 * f.a / n) * (s * ((g.b - f.b) / 2) - f.c * v);
    mpz_class c3 = (b3 * b3 - ctx.delta) / (4 * a3);
    return {std::move(a3), std::move(b3), std::move(c3)};
}

inline qform compose(const qform& f, const qform& g) { return compose(f, g, context_of(f)); }

// Infrastructure step distance delta(F, rho(F)) = 1/2 ln|(b+sqrt(D))/(b-sqrt(D))|,
// evaluated cancellation-free as sign(b) * (ln(|b|+sqrt(D)) - 1/2 ln|D - b^2|).
inline real_t delta_step(const qform& f, const disc_ctx& ctx) {
    if (f.b == 0) return 0;
    mpz_class rem = ctx.delta - f.b * f.b;
    if (rem == 0) throw input_error("delta_step: b^2 equals the discriminant");
    real_t mag = std::log(to_real(abs(f.b)) + ctx.sqrt_delta) - real_t(0.5) * log_abs(rem);
    return f.b > 0 ? mag : -mag;
}

inline real_t delta_step(const qform& f) { return delta_step(f, context_of(f)); }

// A form together with its accumulated distance from the principal form.
struct dist_form {
    qform form;
    real_t dist = 0;
};

// The principal form of discriminant 4N: (1, 2*a0, a0^2 - N), a0 = isqrt(N).
inline dist_form principal_form(const mpz_class& n) {
    mpz_class a0 = isqrt(n);
    if (a0 * a0 == n) throw square_input_error();
    return {{1, 2 * a0, a0 * a0 - n}, 0};
}

struct giant_step_result {
    dist_form value;
    real_t correction = 0;  // delta(G, F_r), |correction| < 2 ln D
    std::uint64_t reductions = 0;
};

// Compose-then-reduce with distance accounting: the output distance is
// f.dist + g.dist plus the signed sum of per-rho corrections.
inline giant_step_result giant_step(const dist_form& f, const dist_form& g, const disc_ctx& ctx) {
    qform h = compose(f.form, g.form, ctx);
    real_t corr = 0;
    std::uint64_t steps = 0;
    while (!is_reduced(h, ctx)) {
        corr += delta_step(h, ctx);
        h = rho(h, ctx);
        ++steps;
    }
    return {{std::move(h), f.dist + g.dist + corr}, corr, steps};
}

inline giant_step_result giant_step(const dist_form& f, const dist_form& g) {
    return giant_step(f, g, context_of(f.form));
}

}  // namespace sqif
