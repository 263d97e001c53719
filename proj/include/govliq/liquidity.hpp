#pragma once

#include <cstdint>

#include "govliq/auction.hpp"
#include "govliq/firm.hpp"

namespace govliq {

/// Discount-rate threshold being queried, in [0, 1).
struct LiquidityQuery {
    double s0 = 0.0;
};

/// Truncation control for the literal double-series evaluation. The
/// outer sum stops once the remaining Poisson tail mass falls below
/// tail_tol; max_terms caps the number of outer-index terms.
struct SeriesControl {
    double tail_tol = 1e-12;
    std::uint64_t max_terms = 1'000'000;
};

/// One evaluated point: threshold, exceedance probability and the
/// illiquidity index -ln(F) (+infinity when F = 0).
struct LiquidityPoint {
    double s0 = 0.0;
    double f_value = 0.0;
    double ill_value = 0.0;
};

/// Monte Carlo estimate with its binomial standard error.
struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

/// Finite-difference step control for cross_partial_signs. Relative
/// steps; first derivatives use rel_first, the mixed derivative
/// rel_mixed.
struct FdSteps {
    double rel_first = 1e-4;
    double rel_mixed = 1e-3;
};

/// Numeric derivative estimates of the illiquidity index and their
/// signs (-1, 0, +1; 0 means below the finite-difference noise floor).
struct CrossPartialReport {
    double d_ill_d_lambda = 0.0;
    double d_ill_d_cm = 0.0;
    double d2_ill_dcm_dlambda = 0.0;
    int sign_d_lambda = 0;
    int sign_d_cm = 0;
    int sign_d2 = 0;
};

/// Probability that a noise trader's estimate discounts the fair value
/// by more than s0: 1 - (rho + s0 - s0*rho)/c_m on [0, s_bar), zero at
/// and beyond s_bar or when c_m = 0. Throws std::logic_error if the
/// computed value escapes [0,1] (violated preconditions).
double g_s0(double s0, const GovernanceSpec& gov, double rho);

/// Literal transcription of the shortfall-probability double series:
/// Poisson(l) mass at counts <= m plus, for larger counts, the binomial
/// mass of at most m estimates above the threshold. Truncated by ctl;
/// throws std::runtime_error if max_terms is hit before the tail bound.
double k_series(double g, double l, int m, const SeriesControl& ctl = {});

/// Closed form of the same probability: by Poisson thinning, the
/// Poisson CDF at m with rate l*(1-g). Finite sum, evaluated in log
/// space.
double k_closed_form(double g, double l, int m);

/// Partial derivative of k_closed_form in l:
/// -l^m (1-g)^(m+1) e^{-l(1-g)} / m!; always <= 0.
double dk_dl(double g, double l, int m);

/// Partial derivative of k_closed_form in g:
/// l^(m+1) (1-g)^m e^{-l(1-g)} / m!; always >= 0, zero when l = 0.
double dk_dg(double g, double l, int m);

/// Illiquidity index -ln(k_closed_form(g, l, m)) evaluated to full
/// relative precision even when the probability is within rounding of 1
/// (the complement is summed directly in that regime).
double ill_index(double g, double l, int m);

/// Exceedance probability and illiquidity index at one parameter point.
/// F = K(g_s0, lambda*delta_t) with m = m_deals - n_informed for s0 <
/// s_bar; otherwise F = 0 and the index is +infinity. Only delta_t
/// enters, never absolute times. Requires m_deals >= n_informed.
LiquidityPoint f_s0(const LiquidityQuery& query, const GovernanceSpec& gov,
                    const FirmParams& firm, const MarketParams& market,
                    const SeriesControl& ctl = {});

/// Monte Carlo oracle for f_s0: fraction of auction trials whose final
/// price falls below (1 - s0) times the fair value, with binomial
/// standard error. Trials use per-trial derived seeds, so the result is
/// bit-identical for any worker count.
McEstimate mc_estimate_f(const LiquidityQuery& query, const GovernanceSpec& gov,
                         const FirmParams& firm, const MarketParams& market, std::uint64_t trials,
                         std::uint64_t seed, int workers = 1);

/// Liquidity gain from raising participation lambda1 -> lambda2 at fixed
/// governance; strictly positive. Rejects lambda1 >= lambda2 and s0 >=
/// s_bar.
double delta_lambda_ill(const LiquidityQuery& query, const GovernanceSpec& gov,
                        const FirmParams& firm, const MarketParams& market, double lambda1,
                        double lambda2);

/// Liquidity gain from improving governance (baseline c_m down to the
/// improved spec's c_m) at fixed participation. Returns +infinity when
/// the improvement pushes s_bar below s0; rejects improved.c_m >=
/// baseline.c_m and s0 >= s_bar(baseline).
double delta_cm_ill(const LiquidityQuery& query, const GovernanceSpec& improved,
                    const GovernanceSpec& baseline, const FirmParams& firm,
                    const MarketParams& market, double lambda);

/// Central-difference estimates of d ILL/d lambda, d ILL/d c_m and the
/// mixed second derivative, with signs. Expects an interior point (s0 <
/// s_bar, 0 < c_m < 1); lambda = 0 falls back to one-sided differences
/// in lambda. Controlled firms hold rho0 fixed while c_m varies; general
/// firms re-derive their extraction share. Throws std::domain_error when
/// an evaluation leaves the finite region or steps degenerate.
CrossPartialReport cross_partial_signs(const LiquidityQuery& query, const GovernanceSpec& gov,
                                       const FirmParams& firm, const MarketParams& market,
                                       const FdSteps& steps = {});

}  // namespace govliq
