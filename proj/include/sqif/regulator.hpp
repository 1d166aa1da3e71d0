#pragma once

#include <cstdint>
#include <optional>

#include "cf.hpp"
#include "intops.hpp"

namespace sqif {

enum class regulator_kind { exact_traversal, external_multiple };

// R+(N) = ln(p + q*sqrt(N)) for the fundamental Pell solution, or an
// externally supplied positive multiple k*R+(N) with k unknown.
struct regulator_value {
    real_t value = 0;
    regulator_kind kind = regulator_kind::exact_traversal;
    std::uint64_t tau = 0;  // period, traversal only
    std::optional<unsigned> multiplier_hint;
};

namespace detail {

template <class I>
regulator_value traverse_impl(const I& n, std::uint64_t step_cap) {
    auto cur = quad_irr_state<I>::start(n);
    if (step_cap == 0) step_cap = 2 * default_step_cap(n) + 4;
    real_t sqrt_n = std::sqrt(to_real(n));

    comp_sum dist;
    // ln c_m carried along c_m = a_m c_{m-1} + c_{m-2} in log space.
    real_t log_prev2 = 0;  // ln c_{-1}
    real_t log_prev1 = 0;  // ln c_0 after the first step
    std::uint64_t tau = 0;

    while (true) {
        auto [a, next] = cf_step(cur);
        real_t a_ld = to_real(a);
        if (cur.index == 0) {
            log_prev1 = std::log(a_ld + sqrt_n);  // c_0 = a_0 + sqrt(N)
        } else {
            real_t log_cur = log_prev1 + std::log(a_ld + std::exp(log_prev2 - log_prev1));
            log_prev2 = log_prev1;
            log_prev1 = log_cur;
        }
        // delta(Y_m, Y_{m+1}) = ln(sqrt(N) + P_{m+1}) - 1/2 ln(N - P_{m+1}^2)
        dist.add(std::log(sqrt_n + to_real(next.p_coef)) -
                 real_t(0.5) * log_abs(next.n - next.p_coef * next.p_coef));
        if (next.q_coef == 1) {
            if (tau == 0) {
                tau = next.index;
                if (tau % 2 == 0) break;  // even period: one traversal suffices
            } else {
                break;  // odd period: second traversal closed at 2*tau
            }
        }
        cur = std::move(next);
        if (tau == 0 && cur.index > step_cap)
            throw step_cap_exceeded("regulator_traverse: period not found within step cap");
    }

    real_t sum = dist.value();
    real_t log_pell = log_prev1;  // ln c_{tau-1} (even) or ln c_{2tau-1} (odd)
    real_t rel = std::fabs(sum - log_pell) / std::fabs(log_pell);
    if (rel > 1e-9L)
        throw precision_error("regulator_traverse: distance sum disagrees with convergent logarithm");
    return {sum, regulator_kind::exact_traversal, tau, std::nullopt};
}

}  // namespace detail

// Exact R+(N) by summing step distances over one full period (even tau)
// or two (odd tau), cross-checked against ln(p + q*sqrt(N)) carried along
// the convergent recurrence.
inline regulator_value regulator_traverse(const mpz_class& n, std::uint64_t step_cap = 0) {
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 60 && mpz_fits_slong_p(n.get_mpz_t()))
        return detail::traverse_impl<std::int64_t>(mpz_get_si(n.get_mpz_t()), step_cap);
    return detail::traverse_impl<mpz_class>(n, step_cap);
}

inline regulator_value accept_external(const mpz_class&, real_t r_prime) {
    if (!(r_prime > 0)) throw input_error("external regulator must be positive");
    return {r_prime, regulator_kind::external_multiple, 0, std::nullopt};
}

}  // namespace sqif
