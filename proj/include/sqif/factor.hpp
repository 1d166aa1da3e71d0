#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cf.hpp"
#include "intops.hpp"
#include "qform.hpp"
#include "regulator.hpp"

namespace sqif {

enum class outcome_kind { factor_found, inapplicable };

// One targeted pass: a parity branch of Algorithm 2 or one halving round.
struct round_record {
    int branch = 0;  // parity guess j (1 = even, 2 = odd) or halving round
    real_t target = 0;
    std::uint64_t squarings = 0;  // t, giant-step squarings performed
    std::uint64_t t_bound = 0;    // ceil(log2 target)
    std::uint64_t walk_steps = 0;
    std::uint64_t psi_budget = 0;
    std::vector<real_t> giant_distances;  // d_0 .. d_t
    real_t dbar = 0;        // greedy tracker, corrections excluded
    real_t approx_dist = 0;  // delta(Y_0, Fbar), corrections included
    bool endpoint_seen = false;
    bool degenerate = false;  // target within reach of a direct scan
};

struct factor_trace {
    std::string algorithm;
    std::vector<round_record> rounds;
    std::uint64_t iterations = 0;  // CF steps (Algorithm 1) or total walk steps
    unsigned halving_rounds = 0;
    real_t regulator = 0;
    regulator_kind regulator_source = regulator_kind::exact_traversal;
};

struct factor_outcome {
    outcome_kind kind = outcome_kind::inapplicable;
    mpz_class divisor;
    factor_trace trace;
};

struct factor_config {
    std::optional<real_t> external_regulator;  // trusted exact R+(N)
    std::optional<real_t> external_multiple;   // k * R+(N), k unknown
    std::optional<std::uint64_t> imax_override;
    std::uint64_t step_cap = 0;        // traversal cap, 0 = Kraitchik default
    unsigned desk_envelope_bits = 48;  // largest N factored without an external regulator
};

namespace detail {

inline constexpr real_t ln2 = std::numbers::ln2_v<real_t>;

// Psi(R, N): cap on second-phase bidirectional reduction steps.
inline real_t psi_bound(real_t reg, real_t ln4n) {
    real_t lg = std::log2(std::max(reg / 2, real_t(4)));
    return (2 / ln2) * (4 * ln4n * lg + (real_t(33) / 4) * ln4n) + 1;
}

template <class I>
std::optional<mpz_class> alg1_scan(const I& n, std::uint64_t imax, std::uint64_t& used) {
    auto cur = quad_irr_state<I>::start(n);
    for (std::uint64_t i = 1; i <= imax; ++i) {
        cur = cf_step(cur).next;
        I g = gcd(cur.q_coef, cur.n);
        used = i;
        if (g > 1) return mpz_class(g);
    }
    return std::nullopt;
}

struct targeted_outcome {
    std::optional<mpz_class> divisor;
    round_record rec;
};

// Shared second-phase helper: gcd-check a third coefficient, flagging the
// |c| = 1 cycle-endpoint signature.
inline std::optional<mpz_class> check_coeff(const mpz_class& c, const mpz_class& n,
                                            bool& endpoint) {
    mpz_class a = abs(c);
    if (a == 1) {
        endpoint = true;
        return std::nullopt;
    }
    mpz_class g = gcd(a, n);
    if (g > 1 && g < n) return g;
    return std::nullopt;
}

// Targets too close to (or below) the base distance cannot be reached by
// giant steps; walk straight from the principal form instead, bounded by
// the target plus the second-phase slack.
inline targeted_outcome degenerate_scan(const mpz_class& n, const disc_ctx& ctx, real_t target,
                                        std::optional<std::uint64_t> imax_override) {
    targeted_outcome out;
    out.rec.degenerate = true;
    out.rec.target = target;
    real_t limit_dist = target + 2 * ctx.log_delta + 1;
    std::uint64_t cap = static_cast<std::uint64_t>(2 * limit_dist / ln2) + 4;
    if (imax_override) cap = *imax_override;
    out.rec.psi_budget = cap;
    dist_form f = principal_form(n);
    for (std::uint64_t i = 0; i <= cap; ++i) {
        out.rec.walk_steps = i;
        if (auto g = check_coeff(f.form.c, n, out.rec.endpoint_seen)) {
            out.divisor = std::move(g);
            return out;
        }
        if (f.dist > limit_dist) break;
        f.dist += delta_step(f.form, ctx);
        f.form = rho(f.form, ctx);
    }
    return out;
}

// One targeted run of the giant-step method: build the squaring chain
// G_0, G_0^2, ..., greedily assemble Fbar with d(Fbar) <= target, then
// search bidirectionally around it.
inline targeted_outcome run_targeted(const mpz_class& n, const disc_ctx& ctx,
                                     const std::optional<dist_form>& base, real_t target,
                                     real_t psi_regulator,
                                     std::optional<std::uint64_t> imax_override) {
    if (!base || target <= base->dist + real_t(0.5) * ctx.log_delta)
        return degenerate_scan(n, ctx, target, imax_override);

    targeted_outcome out;
    out.rec.target = target;
    out.rec.t_bound = static_cast<std::uint64_t>(std::ceil(std::log2(target)));

    std::vector<dist_form> chain{*base};
    out.rec.giant_distances.push_back(base->dist);
    while (chain.back().dist <= target) {
        auto gs = giant_step(chain.back(), chain.back(), ctx);
        chain.push_back(std::move(gs.value));
        out.rec.giant_distances.push_back(chain.back().dist);
    }
    std::size_t t = chain.size() - 1;
    out.rec.squarings = t;

    // Greedy binary decomposition: dbar follows the idealized sums, the
    // form itself carries the exact distance including corrections.
    dist_form fbar = chain[t - 1];
    real_t dbar = chain[t - 1].dist;
    for (std::size_t i = t - 1; i-- > 0;) {
        if (dbar + chain[i].dist <= target) {
            fbar = giant_step(fbar, chain[i], ctx).value;
            dbar += chain[i].dist;
        }
    }
    out.rec.dbar = dbar;
    out.rec.approx_dist = fbar.dist;

    real_t psi = psi_bound(psi_regulator, ctx.log_delta);
    std::uint64_t imax = imax_override ? *imax_override : static_cast<std::uint64_t>(psi);
    out.rec.psi_budget = imax;

    // Fbar's own third coefficient is the one position the two walkers
    // never visit (adjacency covers every other first coefficient).
    if (auto g = check_coeff(fbar.form.c, n, out.rec.endpoint_seen)) {
        out.divisor = std::move(g);
        return out;
    }
    qform h = rho(fbar.form, ctx);
    qform k = rho_inv(fbar.form, ctx);
    for (std::uint64_t i = 0; i <= imax; ++i) {
        out.rec.walk_steps = i;
        if (auto g = check_coeff(h.c, n, out.rec.endpoint_seen)) {
            out.divisor = std::move(g);
            return out;
        }
        if (auto g = check_coeff(k.c, n, out.rec.endpoint_seen)) {
            out.divisor = std::move(g);
            return out;
        }
        h = rho(h, ctx);
        k = rho_inv(k, ctx);
    }
    return out;
}

inline void stamp(factor_outcome& out, const regulator_value& r) {
    out.trace.regulator = r.value;
    out.trace.regulator_source = r.kind;
}

}  // namespace detail

// First phase of the giant-step method: walk rho from the principal form
// until the accumulated distance reaches 2 ln(4N) + 1. Returns nullopt if
// the cycle closes first (tiny regulator: use Algorithm 1).
inline std::optional<dist_form> build_base_form(const mpz_class& n, const disc_ctx& ctx) {
    dist_form f = principal_form(n);
    real_t thresh = 2 * ctx.log_delta + 1;
    while (f.dist < thresh) {
        f.dist += delta_step(f.form, ctx);
        f.form = rho(f.form, ctx);
        if (abs(f.form.a) == 1) return std::nullopt;  // back at the cycle start
    }
    return f;
}

inline std::optional<dist_form> build_base_form(const mpz_class& n) {
    disc_ctx ctx(4 * n);
    return build_base_form(n, ctx);
}

// Algorithm 1: stream the Q sequence, returning gcd(Q_i, N) at the first
// index sharing a factor; sized for R+(N) <= (ln N)^2.
inline factor_outcome algorithm1(const mpz_class& n, const regulator_value& r,
                                 const factor_config& cfg = {}) {
    real_t ln4n = log_abs(4 * n);
    real_t bound = r.value / detail::ln2 + ln4n / (2 * detail::ln2) + 1;
    std::uint64_t imax = cfg.imax_override ? *cfg.imax_override
                                           : static_cast<std::uint64_t>(bound);
    factor_outcome out;
    out.trace.algorithm = "algorithm1";
    std::optional<mpz_class> g;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 60 && mpz_fits_slong_p(n.get_mpz_t()))
        g = detail::alg1_scan<std::int64_t>(mpz_get_si(n.get_mpz_t()), imax, out.trace.iterations);
    else
        g = detail::alg1_scan<mpz_class>(n, imax, out.trace.iterations);
    if (g) {
        out.kind = outcome_kind::factor_found;
        out.divisor = std::move(*g);
    }
    detail::stamp(out, r);
    return out;
}

// Algorithm 2: try the even-period target R+/2, then the odd-period
// target R+/4, each with a full Psi-budget bidirectional search.
inline factor_outcome algorithm2(const mpz_class& n, const regulator_value& r,
                                 const factor_config& cfg = {}) {
    disc_ctx ctx(4 * n);
    auto base = build_base_form(n, ctx);
    factor_outcome out;
    out.trace.algorithm = "algorithm2";
    for (int j = 1; j <= 2; ++j) {
        auto res = detail::run_targeted(n, ctx, base, r.value / (j == 1 ? 2 : 4), r.value,
                                        cfg.imax_override);
        res.rec.branch = j;
        out.trace.iterations += res.rec.walk_steps;
        out.trace.rounds.push_back(std::move(res.rec));
        if (res.divisor) {
            out.kind = outcome_kind::factor_found;
            out.divisor = std::move(*res.divisor);
            break;
        }
    }
    detail::stamp(out, r);
    return out;
}

// Halving loop for an external multiple k*R+(N): target R'/2; a sighting
// of the cycle-endpoint form (|c| = 1) instead of a factor reveals an even
// multiple, so halve and repeat until an odd multiple is exhausted.
inline factor_outcome resolve_multiple(const mpz_class& n, const regulator_value& r,
                                       const factor_config& cfg = {}) {
    disc_ctx ctx(4 * n);
    auto base = build_base_form(n, ctx);
    factor_outcome out;
    out.trace.algorithm = "resolve-multiple";
    real_t target = r.value / 2;
    constexpr unsigned max_halvings = 80;
    for (unsigned round = 0;; ++round) {
        auto res = detail::run_targeted(n, ctx, base, target, r.value, cfg.imax_override);
        res.rec.branch = static_cast<int>(round);
        out.trace.iterations += res.rec.walk_steps;
        bool endpoint = res.rec.endpoint_seen;
        out.trace.rounds.push_back(std::move(res.rec));
        out.trace.halving_rounds = round;
        if (res.divisor) {
            out.kind = outcome_kind::factor_found;
            out.divisor = std::move(*res.divisor);
            break;
        }
        if (!endpoint || round >= max_halvings || target < detail::ln2) break;
        target /= 2;
    }
    detail::stamp(out, r);
    return out;
}

// Entry point: validates the input, obtains a regulator (traversal at desk
// scale unless supplied), and dispatches on the R+ <= (ln N)^2 threshold.
inline factor_outcome factor(const mpz_class& n, const factor_config& cfg = {}) {
    if (n <= 1) throw input_error("factor: n must exceed 1");
    if (mpz_even_p(n.get_mpz_t())) throw even_input_error();
    if (is_square(n)) throw square_input_error();
    if (is_probable_prime(n)) throw prime_input_error();

    regulator_value r;
    bool multiple = false;
    if (cfg.external_multiple) {
        r = accept_external(n, *cfg.external_multiple);
        multiple = true;
    } else if (cfg.external_regulator) {
        r = accept_external(n, *cfg.external_regulator);
        r.multiplier_hint = 1;
    } else {
        if (mpz_sizeinbase(n.get_mpz_t(), 2) > cfg.desk_envelope_bits)
            throw input_error(
                "factor: n exceeds the desk-scale envelope; supply an external regulator");
        r = regulator_traverse(n, cfg.step_cap);
    }

    real_t ln_n = log_abs(n);
    factor_outcome out;
    if (r.value <= ln_n * ln_n)
        out = algorithm1(n, r, cfg);
    else if (multiple)
        out = resolve_multiple(n, r, cfg);
    else
        out = algorithm2(n, r, cfg);

    if (out.kind == outcome_kind::factor_found &&
        (out.divisor <= 1 || out.divisor >= n || n % out.divisor != 0))
        throw precision_error("factor: unsound divisor produced");
    return out;
}

}  // namespace sqif
