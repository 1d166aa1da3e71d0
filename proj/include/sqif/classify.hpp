#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "intops.hpp"

namespace sqif {

enum class parity_verdict { even, odd, unknown };
enum class central_verdict { nontrivial_guaranteed, central_is_two, unknown };

struct parity_prediction {
    parity_verdict verdict = parity_verdict::unknown;
    std::string_view rule = "none";
};

struct central_prediction {
    central_verdict verdict = central_verdict::unknown;
    std::string_view rule = "none";
};

struct factor_pair {
    mpz_class p, q;
};

struct classify_config {
    std::uint64_t trial_division_bound = 1'000'000;
};

// Density constant of the negative-Pell class among squarefree integers
// free of primes = 3 (mod 4): alpha = prod_{j odd} (1 - 2^-j). The odd-
// period fraction tends to 1 - alpha.
inline constexpr real_t odd_period_density_alpha = 0.41942244117951L;

// Fourth-power residue symbol (p/q)_4 = p^((q-1)/4) mod q in {+1, -1},
// defined for distinct primes p, q = 1 (mod 4) with (p/q) = 1.
inline int quartic_symbol(const mpz_class& p, const mpz_class& q) {
    if (p == q) throw input_error("quartic_symbol: arguments must be distinct");
    if (p % 4 != 1 || q % 4 != 1)
        throw input_error("quartic_symbol: both primes must be 1 (mod 4)");
    if (!is_probable_prime(p) || !is_probable_prime(q))
        throw input_error("quartic_symbol: arguments must be prime");
    if (jacobi(p, q) != 1)
        throw input_error("quartic_symbol: (p/q) must equal 1");
    mpz_class e = pow_mod(p, (q - 1) / 4, q);
    if (e == 1) return 1;
    if (e == q - 1) return -1;
    throw input_error("quartic_symbol: precondition violated");
}

namespace detail {

struct partial_factorization {
    std::vector<std::pair<mpz_class, unsigned>> primes;  // found prime powers
    mpz_class cofactor = 1;                              // > 1 only when unresolved or prime
    bool complete = false;                               // every prime factor identified
};

inline partial_factorization trial_factor(mpz_class n, std::uint64_t bound) {
    partial_factorization out;
    auto strip = [&](const mpz_class& d) {
        unsigned e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e) out.primes.emplace_back(d, e);
    };
    strip(2);
    for (std::uint64_t d = 3; d <= bound && mpz_class(d) * d <= n; d += 2) strip(d);
    if (n == 1) {
        out.complete = true;
    } else if (mpz_class(bound) * bound > n || is_probable_prime(n)) {
        out.primes.emplace_back(n, 1);
        out.complete = true;
    } else {
        out.cofactor = n;
    }
    return out;
}

}  // namespace detail

// Period-parity prediction from congruence and residue-symbol conditions
// alone; never expands the continued fraction. Rules, in order:
//   - a prime divisor p = 3 (mod 4) forces an even period;
//   - for N = pq with p = q = 1 (mod 4): (p/q) = -1 forces odd,
//     (p/q) = 1 with (p/q)_4 (q/p)_4 = -1 forces even.
inline parity_prediction predict_parity(const mpz_class& n,
                                        const std::optional<factor_pair>& known = std::nullopt,
                                        const classify_config& cfg = {}) {
    if (n < 3 || mpz_even_p(n.get_mpz_t())) throw even_input_error("predict_parity: n must be odd and > 1");
    if (is_square(n)) throw square_input_error();

    std::vector<mpz_class> primes;
    bool complete = false;
    if (known) {
        if (known->p * known->q != n) throw input_error("known factors do not multiply to n");
        primes = {known->p, known->q};
        complete = is_probable_prime(known->p) && is_probable_prime(known->q);
    } else {
        auto pf = detail::trial_factor(n, cfg.trial_division_bound);
        for (auto& [p, e] : pf.primes) primes.push_back(p);
        complete = pf.complete;
    }

    for (const auto& p : primes)
        if (p % 4 == 3) return {parity_verdict::even, "divisor-3-mod-4"};

    if (complete && primes.size() == 2 && primes[0] != primes[1] && n == primes[0] * primes[1] &&
        primes[0] % 4 == 1 && primes[1] % 4 == 1) {
        const mpz_class &p = primes[0], &q = primes[1];
        if (jacobi(p, q) == -1) return {parity_verdict::odd, "legendre-nonresidue"};
        if (quartic_symbol(p, q) * quartic_symbol(q, p) == -1)
            return {parity_verdict::even, "dirichlet-quartic"};
    }
    return {};
}

// Nontriviality of the central coefficient Q_{tau/2}:
//   - N in F = {N = 1 (mod 4) with a prime divisor = 3 (mod 4)} guarantees
//     an even period with Q_{tau/2} != 2;
//   - so do prime divisors p = 5 (mod 8) and q = 3 (mod 4);
//   - for N = pq with p = 1 (mod 8), q = 3 (mod 4) and (p/q) = -1 the
//     central coefficient is exactly 2.
inline central_prediction predict_central(const mpz_class& n,
                                          const std::optional<factor_pair>& known = std::nullopt,
                                          const classify_config& cfg = {}) {
    if (n < 3 || mpz_even_p(n.get_mpz_t())) throw even_input_error("predict_central: n must be odd and > 1");
    if (is_square(n)) throw square_input_error();

    std::vector<mpz_class> primes;
    bool complete = false;
    bool semiprime = false;
    if (known) {
        if (known->p * known->q != n) throw input_error("known factors do not multiply to n");
        primes = {known->p, known->q};
        complete = is_probable_prime(known->p) && is_probable_prime(known->q);
        semiprime = complete && known->p != known->q;
    } else {
        auto pf = detail::trial_factor(n, cfg.trial_division_bound);
        for (auto& [p, e] : pf.primes) primes.push_back(p);
        complete = pf.complete;
        semiprime = complete && pf.primes.size() == 2 && pf.primes[0].second == 1 &&
                    pf.primes[1].second == 1;
    }

    bool has_3mod4 = false, has_5mod8 = false;
    for (const auto& p : primes) {
        if (p % 4 == 3) has_3mod4 = true;
        if (p % 8 == 5) has_5mod8 = true;
    }
    if (n % 4 == 1 && has_3mod4) return {central_verdict::nontrivial_guaranteed, "f-set"};
    if (has_5mod8 && has_3mod4)
        return {central_verdict::nontrivial_guaranteed, "five-mod-eight"};
    if (semiprime) {
        mpz_class p = primes[0], q = primes[1];
        if (p % 4 == 3) std::swap(p, q);
        if (p % 8 == 1 && q % 4 == 3 && jacobi(p, q) == -1)
            return {central_verdict::central_is_two, "ji-central-two"};
    }
    return {};
}

}  // namespace sqif
