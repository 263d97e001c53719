#include "govliq/liquidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "govliq/rng.hpp"

namespace govliq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// log of the Poisson probability mass at k for the given rate.
double log_poisson_pmf(int k, double rate) {
    return k * std::log(rate) - rate - std::lgamma(k + 1.0);
}

// Upper Poisson tail P[N > m] summed directly; full relative precision
// even when the tail is far below machine epsilon.
double poisson_tail_above(int m, double rate) {
    if (rate <= 0.0) return 0.0;
    long double acc = 0.0L;
    long double term = std::exp(log_poisson_pmf(m + 1, rate));
    for (int k = m + 1; term > 0.0L; ++k) {
        acc += term;
        if (k > rate && term < acc * 1e-18L) break;
        term *= rate / (k + 1);
    }
    return static_cast<double>(acc);
}

double validated_rho(const GovernanceSpec& gov, const FirmParams& firm) {
    const double rho = agency_cost_share(gov, firm);
    if (rho > gov.c_m) throw std::logic_error("extraction share exceeds the governance bound");
    return rho;
}

}  // namespace

double g_s0(double s0, const GovernanceSpec& gov, double rho) {
    require(s0 >= 0.0 && s0 < 1.0, "g_s0: s0 must lie in [0, 1)");
    require(rho >= 0.0 && rho <= gov.c_m && gov.c_m < 1.0, "g_s0: requires 0 <= rho <= c_m < 1");
    if (gov.c_m == 0.0) return 0.0;
    if (s0 >= s_bar(gov, rho)) return 0.0;
    const double g = 1.0 - (rho + s0 - s0 * rho) / gov.c_m;
    // rounding right at the s_bar boundary may overshoot by an ulp;
    // anything larger means the preconditions were violated
    if (g < -1e-12 || g > 1.0 + 1e-12)
        throw std::logic_error("g_s0: computed probability escaped [0, 1]");
    return std::clamp(g, 0.0, 1.0);
}

double k_series(double g, double l, int m, const SeriesControl& ctl) {
    require(g >= 0.0 && g <= 1.0, "k_series: g must lie in [0, 1]");
    require(l >= 0.0, "k_series: l must be non-negative");
    require(m >= 0, "k_series: m must be non-negative");
    require(ctl.tail_tol > 0.0, "k_series: tail tolerance must be positive");
    require(ctl.max_terms >= static_cast<std::uint64_t>(m) + 1,
            "k_series: max_terms must be at least m + 1");

    if (l == 0.0) return 1.0;

    const double log_l = std::log(l);
    const double log_g = g > 0.0 ? std::log(g) : 0.0;
    const double log_1mg = g < 1.0 ? std::log(1.0 - g) : 0.0;
    std::vector<double> lgamma_table{0.0};  // lgamma(1), grown on demand
    auto lg = [&](int k) {
        while (static_cast<int>(lgamma_table.size()) <= k)
            lgamma_table.push_back(std::lgamma(static_cast<double>(lgamma_table.size()) + 1.0));
        return lgamma_table[static_cast<std::size_t>(k)];
    };

    long double total = 0.0L;
    long double poisson_mass = 0.0L;  // cumulative Poisson mass over the outer index
    std::uint64_t terms = 0;
    for (int i = 0;; ++i) {
        if (terms++ >= ctl.max_terms)
            throw std::runtime_error(
                "k_series: outer-term cap reached before the Poisson tail bound was met");
        const double log_pmf = i * log_l - l - lg(i);
        const long double pmf = std::exp(log_pmf);
        poisson_mass += pmf;
        if (i <= m) {
            total += pmf;
        } else if (g == 0.0) {
            // every estimate clears the threshold: no inner mass
        } else if (g == 1.0) {
            total += pmf;  // the j = 0 row carries the whole binomial mass
        } else {
            long double inner = 0.0L;
            for (int j = 0; j <= m; ++j)
                inner += std::exp(i * log_l - l - lg(j) - lg(i - j) + j * log_1mg +
                                  (i - j) * log_g);
            total += inner;
        }
        // The inner binomial factor never exceeds one, so the dropped
        // outer terms are bounded by the remaining Poisson mass.
        if (i >= m && 1.0L - poisson_mass < ctl.tail_tol) break;
    }
    return std::min(static_cast<double>(total), 1.0);
}

double k_closed_form(double g, double l, int m) {
    require(g >= 0.0 && g <= 1.0, "k_closed_form: g must lie in [0, 1]");
    require(l >= 0.0, "k_closed_form: l must be non-negative");
    require(m >= 0, "k_closed_form: m must be non-negative");
    const double rate = l * (1.0 - g);  // thinned arrival rate of below-threshold estimates
    if (rate <= 0.0) return 1.0;
    long double cdf = 0.0L;
    for (int k = 0; k <= m; ++k) cdf += std::exp(log_poisson_pmf(k, rate));
    return std::min(static_cast<double>(cdf), 1.0);
}

double dk_dl(double g, double l, int m) {
    require(g >= 0.0 && g <= 1.0, "dk_dl: g must lie in [0, 1]");
    require(l >= 0.0, "dk_dl: l must be non-negative");
    require(m >= 0, "dk_dl: m must be non-negative");
    if (g == 1.0) return 0.0;
    if (l == 0.0) return m == 0 ? -(1.0 - g) : 0.0;
    return -std::exp(m * std::log(l) + (m + 1) * std::log(1.0 - g) - l * (1.0 - g) -
                     std::lgamma(m + 1.0));
}

double dk_dg(double g, double l, int m) {
    require(g >= 0.0 && g <= 1.0, "dk_dg: g must lie in [0, 1]");
    require(l >= 0.0, "dk_dg: l must be non-negative");
    require(m >= 0, "dk_dg: m must be non-negative");
    if (l == 0.0) return 0.0;
    if (g == 1.0) return m == 0 ? l * 1.0 : 0.0;
    return std::exp((m + 1) * std::log(l) + m * std::log(1.0 - g) - l * (1.0 - g) -
                    std::lgamma(m + 1.0));
}

double ill_index(double g, double l, int m) {
    const double f = k_closed_form(g, l, m);
    if (f <= 0.0) return kInf;
    if (f <= 0.5) return -std::log(f);
    // Near one, -log(f) loses all relative precision; sum the complement
    // directly instead.
    return -std::log1p(-poisson_tail_above(m, l * (1.0 - g)));
}

LiquidityPoint f_s0(const LiquidityQuery& query, const GovernanceSpec& gov,
                    const FirmParams& firm, const MarketParams& market,
                    const SeriesControl& ctl) {
    (void)ctl;  // analytic path is the closed form; ctl governs the series route in checks
    require(query.s0 >= 0.0 && query.s0 < 1.0, "f_s0: s0 must lie in [0, 1)");
    market.validate();
    const double rho = validated_rho(gov, firm);

    LiquidityPoint point;
    point.s0 = query.s0;
    if (gov.c_m == 0.0 || query.s0 >= s_bar(gov, rho)) {
        point.f_value = 0.0;
        point.ill_value = kInf;
        return point;
    }
    const double g = g_s0(query.s0, gov, rho);
    const int m = market.surplus_deals();
    point.f_value = k_closed_form(g, market.arrival_mean(), m);
    point.ill_value = ill_index(g, market.arrival_mean(), m);
    return point;
}

McEstimate mc_estimate_f(const LiquidityQuery& query, const GovernanceSpec& gov,
                         const FirmParams& firm, const MarketParams& market, std::uint64_t trials,
                         std::uint64_t seed, int workers) {
    require(trials >= 1, "mc_estimate_f: at least one trial required");
    require(query.s0 >= 0.0 && query.s0 < 1.0, "mc_estimate_f: s0 must lie in [0, 1)");
    market.validate();
    const double rho = validated_rho(gov, firm);
    const XDynamics dyn = derive_x_dynamics(firm);
    const double ceiling = share_value(firm, dyn, 0.0);
    const double floor = (1.0 - gov.c_m) * ceiling;
    const double fair = (1.0 - rho) * ceiling;
    const double threshold = (1.0 - query.s0) * fair;

    const int used = std::clamp(workers, 1, 64);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(used), 0);
    auto run_chunk = [&](std::uint64_t begin, std::uint64_t end, std::uint64_t& count) {
        std::vector<double> scratch;
        scratch.reserve(64);
        std::uint64_t hits = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
            const double price = run_auction_trial_final_price(
                fair, floor, ceiling, market, derive_seed(seed, t), scratch);
            if (price < threshold) ++hits;
        }
        count = hits;
    };

    if (used == 1) {
        run_chunk(0, trials, counts[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(used));
        const std::uint64_t chunk = (trials + used - 1) / used;
        for (int w = 0; w < used; ++w) {
            const std::uint64_t begin = std::min<std::uint64_t>(w * chunk, trials);
            const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, trials);
            pool.emplace_back(run_chunk, begin, end, std::ref(counts[static_cast<std::size_t>(w)]));
        }
        for (auto& th : pool) th.join();
    }

    std::uint64_t hits = 0;
    for (std::uint64_t c : counts) hits += c;
    McEstimate est;
    est.trials = trials;
    est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    est.std_error =
        std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
    return est;
}

double delta_lambda_ill(const LiquidityQuery& query, const GovernanceSpec& gov,
                        const FirmParams& firm, const MarketParams& market, double lambda1,
                        double lambda2) {
    require(lambda1 >= 0.0 && lambda1 < lambda2,
            "delta_lambda_ill: requires 0 <= lambda1 < lambda2");
    const double rho = validated_rho(gov, firm);
    if (gov.c_m == 0.0 || query.s0 >= s_bar(gov, rho))
        throw std::domain_error("delta_lambda_ill: s0 must lie below s_bar");
    const double g = g_s0(query.s0, gov, rho);
    const int m = market.surplus_deals();
    return ill_index(g, lambda2 * market.delta_t, m) - ill_index(g, lambda1 * market.delta_t, m);
}

double delta_cm_ill(const LiquidityQuery& query, const GovernanceSpec& improved,
                    const GovernanceSpec& baseline, const FirmParams& firm,
                    const MarketParams& market, double lambda) {
    require(improved.c_m < baseline.c_m,
            "delta_cm_ill: the improved spec must have the smaller c_m");
    require(improved.kind == baseline.kind, "delta_cm_ill: firm kinds must match");
    require(lambda > 0.0, "delta_cm_ill: lambda must be positive");
    const double rho_base = validated_rho(baseline, firm);
    if (baseline.c_m == 0.0 || query.s0 >= s_bar(baseline, rho_base))
        throw std::domain_error("delta_cm_ill: s0 must lie below the baseline s_bar");
    const int m = market.surplus_deals();
    const double big_l = lambda * market.delta_t;
    const double ill_base =
        ill_index(g_s0(query.s0, baseline, rho_base), big_l, m);
    const double rho_improved = validated_rho(improved, firm);
    // Improving governance can push the maximum discount below s0, in
    // which case the shortfall event becomes impossible.
    if (improved.c_m == 0.0 || query.s0 >= s_bar(improved, rho_improved)) return kInf;
    const double ill_improved =
        ill_index(g_s0(query.s0, improved, rho_improved), big_l, m);
    return ill_improved - ill_base;
}

namespace {

// ILL as a function of (c_m, lambda) with the firm's extraction policy
// applied: general firms re-derive rho, controlled firms keep rho0.
double ill_at(const LiquidityQuery& query, const GovernanceSpec& gov, const FirmParams& firm,
              const MarketParams& market, double c_m, double lambda) {
    GovernanceSpec moved = gov;
    moved.c_m = c_m;
    const double rho = agency_cost_share(moved, firm);
    if (moved.c_m == 0.0 || query.s0 >= s_bar(moved, rho))
        throw std::domain_error("cross_partial_signs: point left the finite region");
    return ill_index(g_s0(query.s0, moved, rho), lambda * market.delta_t,
                     market.surplus_deals());
}

int sign_with_floor(double value, double noise_floor) {
    if (std::abs(value) <= noise_floor) return 0;
    return value > 0.0 ? 1 : -1;
}

}  // namespace

CrossPartialReport cross_partial_signs(const LiquidityQuery& query, const GovernanceSpec& gov,
                                       const FirmParams& firm, const MarketParams& market,
                                       const FdSteps& steps) {
    require(gov.c_m > 0.0 && gov.c_m < 1.0,
            "cross_partial_signs: interior governance bound required");
    require(steps.rel_first > 0.0 && steps.rel_mixed > 0.0,
            "cross_partial_signs: steps must be positive");
    const double lambda = market.lambda;
    auto ill = [&](double c, double lam) { return ill_at(query, gov, firm, market, c, lam); };

    CrossPartialReport report;

    // d ILL / d lambda: central when the interval allows, one-sided at
    // lambda = 0.
    {
        const double h = steps.rel_first * std::max(lambda, 1.0);
        double d1, dhalf, scale;
        if (lambda >= h) {
            auto central = [&](double hh) {
                return (ill(gov.c_m, lambda + hh) - ill(gov.c_m, lambda - hh)) / (2.0 * hh);
            };
            d1 = central(h);
            dhalf = central(0.5 * h);
            scale = std::max(std::abs(ill(gov.c_m, lambda + h)), std::abs(ill(gov.c_m, lambda)));
        } else {
            auto forward = [&](double hh) {
                return (-3.0 * ill(gov.c_m, lambda) + 4.0 * ill(gov.c_m, lambda + hh) -
                        ill(gov.c_m, lambda + 2.0 * hh)) /
                       (2.0 * hh);
            };
            d1 = forward(h);
            dhalf = forward(0.5 * h);
            scale = std::abs(ill(gov.c_m, lambda + 2.0 * h));
        }
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale / h;
        double value = dhalf;
        if (std::abs(dhalf) <= 4.0 * noise) value = (4.0 * dhalf - d1) / 3.0;
        report.d_ill_d_lambda = value;
        report.sign_d_lambda = sign_with_floor(value, noise);
    }

    // d ILL / d c_m: central in c_m.
    {
        const double h = steps.rel_first * gov.c_m;
        if (gov.c_m + h >= 1.0)
            throw std::domain_error("cross_partial_signs: c_m step leaves (0, 1)");
        auto central = [&](double hh) {
            return (ill(gov.c_m + hh, lambda) - ill(gov.c_m - hh, lambda)) / (2.0 * hh);
        };
        const double d1 = central(h);
        const double dhalf = central(0.5 * h);
        const double scale =
            std::max(std::abs(ill(gov.c_m + h, lambda)), std::abs(ill(gov.c_m - h, lambda)));
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale / h;
        double value = dhalf;
        if (std::abs(dhalf) <= 4.0 * noise) value = (4.0 * dhalf - d1) / 3.0;
        report.d_ill_d_cm = value;
        report.sign_d_cm = sign_with_floor(value, noise);
    }

    // Mixed derivative: four-corner stencil, one-sided in lambda at 0.
    {
        const double hc = steps.rel_mixed * gov.c_m;
        const double hl = steps.rel_mixed * std::max(lambda, 1.0);
        if (gov.c_m + hc >= 1.0)
            throw std::domain_error("cross_partial_signs: c_m step leaves (0, 1)");
        double value, scale;
        if (lambda >= hl) {
            value = (ill(gov.c_m + hc, lambda + hl) - ill(gov.c_m + hc, lambda - hl) -
                     ill(gov.c_m - hc, lambda + hl) + ill(gov.c_m - hc, lambda - hl)) /
                    (4.0 * hc * hl);
            scale = std::abs(ill(gov.c_m + hc, lambda + hl));
        } else {
            value = (ill(gov.c_m + hc, lambda + hl) - ill(gov.c_m + hc, lambda) -
                     ill(gov.c_m - hc, lambda + hl) + ill(gov.c_m - hc, lambda)) /
                    (2.0 * hc * hl);
            scale = std::abs(ill(gov.c_m + hc, lambda + hl));
        }
        const double noise =
            16.0 * std::numeric_limits<double>::epsilon() * scale / (hc * hl);
        report.d2_ill_dcm_dlambda = value;
        report.sign_d2 = sign_with_floor(value, noise);
    }

    return report;
}

}  // namespace govliq
