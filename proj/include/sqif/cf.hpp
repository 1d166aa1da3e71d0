#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "intops.hpp"

namespace sqif {

// State of the expansion of (P + sqrt(N))/Q. With the sqrt(N) start
// (P0 = 0, Q0 = 1) it satisfies Q | N - P^2 throughout, and for
// index >= 1 also 0 <= P < sqrt(N), 0 < Q < 2*sqrt(N).
template <class I>
struct quad_irr_state {
    I n;
    I p_coef;
    I q_coef;
    std::uint64_t index = 0;
    I root;  // isqrt(n), cached

    static quad_irr_state start(I n) {
        if (n <= 1) throw input_error("radicand must exceed 1");
        I r = isqrt(n);
        if (r * r == n) throw square_input_error();
        return {std::move(n), I(0), I(1), 0, std::move(r)};
    }
};

template <class I>
struct cf_step_result {
    I quotient;  // a_m
    quad_irr_state<I> next;
};

// One Lagrange step: a = floor((P + sqrt(N))/Q), then
// P' = a*Q - P, Q' = (N - P'^2)/Q. Entirely in integers; the floor is
// sign-correct for negative Q even though the sqrt(N) pipeline never
// produces one.
template <class I>
cf_step_result<I> cf_step(const quad_irr_state<I>& s) {
    if (s.q_coef == 0) throw input_error("cf_step: Q must be nonzero");
    I t = s.p_coef + s.root;
    I a = fdiv(t, s.q_coef);
    if (s.q_coef < 0 && t % s.q_coef == 0) a -= 1;
    I p_next = a * s.q_coef - s.p_coef;
    I q_next = (s.n - p_next * p_next) / s.q_coef;
    return {std::move(a), {s.n, std::move(p_next), std::move(q_next), s.index + 1, s.root}};
}

// Kraitchik's bound on the period: tau <= 0.72 * sqrt(N) * ln N for N > 7.
template <class I>
std::uint64_t default_step_cap(const I& n) {
    real_t x = to_real(mpz_class(n));
    real_t cap = real_t(0.72L) * std::sqrt(x) * std::log(x) + 2;
    if (cap < 64) cap = 64;
    return static_cast<std::uint64_t>(cap);
}

inline std::uint64_t default_step_cap(const mpz_class& n) {
    real_t x = to_real(n);
    real_t cap = real_t(0.72L) * std::sqrt(x) * std::log(x) + 2;
    if (cap < 64) cap = 64;
    return static_cast<std::uint64_t>(cap);
}

// sqrt(N) = [a0; a1, ..., a_tau] with a_tau = 2*a0 and the interior
// palindromic. period_quotients holds a1 .. a_tau.
template <class I>
struct expansion {
    I a0;
    std::vector<I> period_quotients;
    std::uint64_t tau = 0;
};

template <class I>
expansion<I> expand_sqrt(const I& n, std::uint64_t step_cap = 0) {
    auto st = quad_irr_state<I>::start(n);
    if (step_cap == 0) step_cap = default_step_cap(n);
    expansion<I> out;
    out.a0 = st.root;
    auto cur = cf_step(st).next;  // a0 consumed, state now at index 1
    while (cur.q_coef != 1) {     // Q_m = 1 first recurs at m = tau
        auto [a, next] = cf_step(cur);
        out.period_quotients.push_back(std::move(a));
        cur = std::move(next);
        if (cur.index > step_cap)
            throw step_cap_exceeded("expand_sqrt: period not found within step cap");
    }
    out.tau = cur.index;
    out.period_quotients.push_back(cf_step(cur).quotient);  // a_tau = 2*a0
    return out;
}

// Numerator/denominator pair of the m-th convergent, m >= -1.
struct convergent {
    mpz_class p, q;
    std::int64_t index = -1;
};

// Resumable convergent source: yields m = -1, 0, 1, ... in order.
class convergent_stream {
public:
    explicit convergent_stream(mpz_class n)
        : state_(quad_irr_state<mpz_class>::start(std::move(n))) {}

    convergent next() {
        if (pending_index_ == -1) {
            ++pending_index_;
            return {1, 0, -1};
        }
        auto [a, nx] = cf_step(state_);
        state_ = std::move(nx);
        mpz_class p = a * prev1_.p + prev2_.p;
        mpz_class q = a * prev1_.q + prev2_.q;
        prev2_ = prev1_;
        prev1_ = {p, q, pending_index_};
        return {std::move(p), std::move(q), pending_index_++};
    }

private:
    quad_irr_state<mpz_class> state_;
    convergent prev2_{0, 1, -3};  // p_{-2} = 0, q_{-2} = 1
    convergent prev1_{1, 0, -2};  // seeds so that m = -1 emits (1, 0)
    std::int64_t pending_index_ = -1;
};

// Convergents (p_{-1}, q_{-1}) .. (p_{count-2}, q_{count-2}).
inline std::vector<convergent> convergents(const mpz_class& n, std::uint64_t count) {
    convergent_stream cs(n);
    std::vector<convergent> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(cs.next());
    return out;
}

// Two-pass summary of the first period, O(1) memory: the period tau plus
// the central coefficients. For even tau that is Q_{tau/2}; for odd tau,
// (Q_{(tau+1)/2}, P_{(tau+1)/2}), the sum-of-two-squares pair.
template <class I>
struct period_summary {
    std::uint64_t tau = 0;
    I central_q;
    I central_p;
};

template <class I>
period_summary<I> period_scan(const I& n, std::uint64_t step_cap = 0) {
    if (step_cap == 0) step_cap = default_step_cap(n);
    auto st = quad_irr_state<I>::start(n);
    auto cur = cf_step(st).next;
    while (cur.q_coef != 1) {
        cur = cf_step(cur).next;
        if (cur.index > step_cap)
            throw step_cap_exceeded("period_scan: period not found within step cap");
    }
    std::uint64_t tau = cur.index;
    std::uint64_t mid = (tau % 2 == 0) ? tau / 2 : (tau + 1) / 2;
    auto walk = cf_step(st).next;
    while (walk.index < mid) walk = cf_step(walk).next;
    return {tau, walk.q_coef, walk.p_coef};
}

// N = a^2 + b^2 from the central coefficients, available exactly when the
// period is odd; std::nullopt reports an even period.
template <class I>
std::optional<std::pair<I, I>> sum_two_squares(const I& n, std::uint64_t step_cap = 0) {
    auto s = period_scan(n, step_cap);
    if (s.tau % 2 == 0) return std::nullopt;
    return std::make_pair(s.central_q, s.central_p);
}

// Fundamental solution of X^2 - N*Y^2 = 1: the convergent at tau-1 (even
// period) or 2*tau-1 (odd period).
inline std::pair<mpz_class, mpz_class> pell_fundamental(const mpz_class& n,
                                                        std::uint64_t step_cap = 0) {
    auto ex = expand_sqrt(n, step_cap);
    std::uint64_t last = (ex.tau % 2 == 0) ? ex.tau - 1 : 2 * ex.tau - 1;
    convergent_stream cs(n);
    convergent c = cs.next();
    for (std::uint64_t i = 0; i <= last; ++i) c = cs.next();
    return {c.p, c.q};
}

}  // namespace sqif
