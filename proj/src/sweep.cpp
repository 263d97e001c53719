#include "govliq/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "govliq/liquidity.hpp"
#include "govliq/rng.hpp"

namespace govliq {

namespace {

int effective_workers(const RunConfig& config) {
    if (config.workers > 0) return config.workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

const char* kind_name(FirmKind kind) {
    return kind == FirmKind::General ? "general" : "controlled";
}

// Null-hypothesis standard error of the Monte Carlo estimator; the exact
// boundary probabilities admit no deviation at all.
double null_std_error(double f_analytic, std::uint64_t trials) {
    return std::sqrt(f_analytic * (1.0 - f_analytic) / static_cast<double>(trials));
}

struct PointSpec {
    double c_m;
    double lambda;
    double s0;
    GovernanceSpec gov;
};

std::vector<PointSpec> grid_points(const RunConfig& config) {
    std::vector<PointSpec> points;
    for (double c : config.cm_grid) {
        const GovernanceSpec gov = config.governance_at(c);
        const std::vector<double> s0s = config.resolved_s0(c);
        for (double lambda : config.lambda_grid)
            for (double s0 : s0s) points.push_back({c, lambda, s0, gov});
    }
    return points;
}

SweepRow analytic_row(const RunConfig& config, const PointSpec& point) {
    SweepRow row;
    row.c_m = point.c_m;
    row.lambda = point.lambda;
    row.s0 = point.s0;
    row.firm_kind = kind_name(point.gov.kind);
    row.rho = agency_cost_share(point.gov, config.firm);
    row.s_bar = s_bar(point.gov, row.rho);
    row.g = g_s0(point.s0, point.gov, row.rho);
    MarketParams market = config.market;
    market.lambda = point.lambda;
    const LiquidityPoint value = f_s0({point.s0}, point.gov, config.firm, market,
                                      config.series_ctl);
    row.f_analytic = value.f_value;
    row.ill_analytic = value.ill_value;
    return row;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool with_mc) {
    out << "c_m,lambda,s0,rho,s_bar,g,f_analytic,ill_analytic";
    if (with_mc) out << ",f_mc,f_mc_se";
    out << ",firm_kind\n";
    for (const SweepRow& row : rows) {
        out << format_value(row.c_m) << ',' << format_value(row.lambda) << ','
            << format_value(row.s0) << ',' << format_value(row.rho) << ','
            << format_value(row.s_bar) << ',' << format_value(row.g) << ','
            << format_value(row.f_analytic) << ',' << format_value(row.ill_analytic);
        if (with_mc) out << ',' << format_value(row.f_mc) << ',' << format_value(row.f_mc_se);
        out << ',' << row.firm_kind << '\n';
    }
}

}  // namespace

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", v);
    return buffer;
}

std::vector<SweepRow> analytic_rows(const RunConfig& config) {
    std::vector<SweepRow> rows;
    for (const PointSpec& point : grid_points(config)) rows.push_back(analytic_row(config, point));
    return rows;
}

std::vector<SweepRow> simulate_rows(const RunConfig& config, std::vector<std::size_t>& flagged) {
    const std::vector<PointSpec> points = grid_points(config);
    std::vector<SweepRow> rows(points.size());
    const int workers = effective_workers(config);

    // Points are distributed over the pool; every trial seed derives from
    // (master seed, point index, trial index), so the assembled output is
    // identical for any worker count.
    std::atomic<std::size_t> next{0};
    auto consume = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            SweepRow row = analytic_row(config, points[i]);
            MarketParams market = config.market;
            market.lambda = points[i].lambda;
            const McEstimate mc =
                mc_estimate_f({points[i].s0}, points[i].gov, config.firm, market, config.trials,
                              derive_seed(config.seed, 0x5157u, i), 1);
            row.f_mc = mc.estimate;
            row.f_mc_se = mc.std_error;
            rows[i] = std::move(row);
        }
    };
    if (workers == 1) {
        consume();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(consume);
        for (auto& th : pool) th.join();
    }

    flagged.clear();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double se = null_std_error(rows[i].f_analytic, config.trials);
        if (std::abs(rows[i].f_mc - rows[i].f_analytic) > 4.0 * se) flagged.push_back(i);
    }
    return rows;
}

int cmd_analytic(const RunConfig& config, std::ostream& out, std::ostream& log) {
    write_csv(out, analytic_rows(config), /*with_mc=*/false);
    if (!out) {
        log << "error: failed to write output\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& log) {
    std::vector<std::size_t> flagged;
    const std::vector<SweepRow> rows = simulate_rows(config, flagged);
    write_csv(out, rows, /*with_mc=*/true);
    if (!out) {
        log << "error: failed to write output\n";
        return kExitIo;
    }
    log << "simulate: " << flagged.size() << " of " << rows.size()
        << " rows outside four standard errors\n";
    for (std::size_t i : flagged) {
        const SweepRow& row = rows[i];
        log << "  flagged row " << i << ": c_m=" << format_value(row.c_m)
            << " lambda=" << format_value(row.lambda) << " s0=" << format_value(row.s0)
            << " f_analytic=" << format_value(row.f_analytic) << " f_mc=" << format_value(row.f_mc)
            << "\n";
    }
    return flagged.empty() ? kExitOk : kExitProperty;
}

int cmd_synergy(const RunConfig& config, std::ostream& out, std::ostream& log) {
    if (config.cm_grid.size() < 2 || config.lambda_grid.size() < 2) {
        log << "error: synergy needs at least two c_m values and two lambda values\n";
        return kExitConfig;
    }
    for (double lambda : config.lambda_grid)
        if (lambda <= 0.0) {
            log << "error: synergy requires strictly positive lambda values\n";
            return kExitConfig;
        }

    // Comparisons need one common threshold per query: fractions resolve
    // against the smallest s_bar in the sweep so every compared firm stays
    // inside its finite region. Controlled firms share the improved
    // firm's exogenous extraction share.
    RunConfig common = config;
    if (common.governance.kind == FirmKind::Controlled && common.rho0_factor > 0.0) {
        common.governance.rho0 = common.rho0_factor * common.cm_grid.front();
        common.rho0_factor = 0.0;
    }
    std::vector<double> s0s = common.s0_values;
    if (common.s0_mode == S0Mode::SbarFraction) {
        double cap = std::numeric_limits<double>::infinity();
        for (double c : common.cm_grid) {
            const GovernanceSpec gov = common.governance_at(c);
            cap = std::min(cap, s_bar(gov, agency_cost_share(gov, common.firm)));
        }
        for (double& s : s0s) s *= cap;
    }
    // The zero threshold sits on the boundary of the finite region, where
    // the strict orderings can degenerate to exact ties; compare interior
    // thresholds only.
    std::erase_if(s0s, [](double s) { return s <= 0.0; });
    if (s0s.empty()) {
        log << "error: synergy needs at least one positive s0 threshold\n";
        return kExitConfig;
    }

    const double lambda_lo = common.lambda_grid.front();
    const double lambda_hi = common.lambda_grid.back();
    const double cm_hi = common.cm_grid.back();
    const double cm_lo = common.cm_grid.front();
    bool ordering_violated = false;

    out << "synergy report\n";
    out << "participation pair: lambda " << format_value(lambda_lo) << " -> "
        << format_value(lambda_hi) << "\n";
    out << "governance pair: c_m " << format_value(cm_hi) << " -> " << format_value(cm_lo)
        << "\n\n";

    for (double s0 : s0s) {
        out << "s0 = " << format_value(s0) << "\n";
        out << "  liquidity gain from participation, by governance bound:\n";
        double previous = std::numeric_limits<double>::infinity();
        for (double c : common.cm_grid) {
            MarketParams market = common.market;
            const double gain = delta_lambda_ill({s0}, common.governance_at(c), common.firm,
                                                 market, lambda_lo, lambda_hi);
            out << "    c_m=" << format_value(c) << " delta_ill=" << format_value(gain) << "\n";
            if (std::isfinite(previous) || std::isfinite(gain)) {
                if (!(gain < previous)) ordering_violated = true;
            }
            previous = gain;
        }

        out << "  liquidity gain from governance, by participation:\n";
        double prev_gain = -std::numeric_limits<double>::infinity();
        for (double lambda : common.lambda_grid) {
            const double gain = delta_cm_ill({s0}, common.governance_at(cm_lo),
                                             common.governance_at(cm_hi), common.firm,
                                             common.market, lambda);
            out << "    lambda=" << format_value(lambda) << " delta_ill=" << format_value(gain)
                << "\n";
            if (std::isfinite(gain) && !(gain > prev_gain)) ordering_violated = true;
            prev_gain = gain;
        }

        out << "  derivative signs (d/dlambda, d/dc_m, mixed):\n";
        for (double c : common.cm_grid) {
            for (double lambda : common.lambda_grid) {
                MarketParams market = common.market;
                market.lambda = lambda;
                const CrossPartialReport report =
                    cross_partial_signs({s0}, common.governance_at(c), common.firm, market);
                const bool ok = report.sign_d_lambda == 1 && report.sign_d_cm == -1 &&
                                report.sign_d2 == -1;
                out << "    c_m=" << format_value(c) << " lambda=" << format_value(lambda) << " ("
                    << (report.sign_d_lambda > 0 ? '+' : report.sign_d_lambda < 0 ? '-' : '0')
                    << ", " << (report.sign_d_cm > 0 ? '+' : report.sign_d_cm < 0 ? '-' : '0')
                    << ", " << (report.sign_d2 > 0 ? '+' : report.sign_d2 < 0 ? '-' : '0') << ")"
                    << (ok ? "" : "  <-- unexpected") << "\n";
                if (!ok) ordering_violated = true;
            }
        }
        out << "\n";
    }

    if (!out) {
        log << "error: failed to write report\n";
        return kExitIo;
    }
    if (ordering_violated) {
        log << "synergy: orderings or derivative signs violated\n";
        return kExitProperty;
    }
    log << "synergy: all orderings and signs as predicted\n";
    return kExitOk;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& log,
                 const FaultInjection& fault) {
    int failures = 0;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        out << "check=" << name << " status=" << (pass ? "pass" : "fail") << " " << detail
            << "\n";
        if (!pass) ++failures;
    };

    // Series transcription against the closed form.
    {
        SplitMix64 rng(derive_seed(config.seed, 0xBEEF));
        double worst = 0.0;
        const double bound = 10.0 * config.series_ctl.tail_tol;
        for (int i = 0; i < 200; ++i) {
            const double g = rng.uniform();
            const double l = rng.uniform(0.0, 50.0);
            const int m = static_cast<int>(rng() % 20);
            worst = std::max(worst,
                             std::abs(k_series(g, l, m, config.series_ctl) - k_closed_form(g, l, m)));
        }
        std::ostringstream detail;
        detail << "max_abs_diff=" << worst << " bound=" << bound;
        report("series_vs_closed_form", worst < bound, detail.str());
    }

    // Analytic derivatives against central differences of the closed form.
    {
        double worst = 0.0;
        std::size_t checked = 0;
        std::size_t degenerate = 0;
        for (const PointSpec& point : grid_points(config)) {
            const double rho = agency_cost_share(point.gov, config.firm);
            if (point.gov.c_m == 0.0 || point.s0 >= s_bar(point.gov, rho)) continue;
            const double g = g_s0(point.s0, point.gov, rho);
            if (g <= 0.0 || g >= 1.0) continue;
            const double l = point.lambda * config.market.delta_t;
            if (l <= 0.0) continue;
            const int m = config.market.surplus_deals();
            // Derivatives smaller than the difference quotient can resolve
            // in double precision are recorded as degenerate steps.
            const double resolvable = 1e-5;
            const double hl = 3e-5 * std::max(1.0, l);
            double dl = dk_dl(g, l, m);
            if (fault.flip_dk_dl_sign) dl = -dl;
            if (std::abs(dl) >= resolvable) {
                const double fd_l = (k_closed_form(g, l + hl, m) - k_closed_form(g, l - hl, m)) /
                                    (2.0 * hl);
                worst = std::max(worst, std::abs(fd_l - dl) / std::abs(dl));
                ++checked;
            } else {
                ++degenerate;
            }
            const double hg = std::min({3e-5, 0.5 * g, 0.5 * (1.0 - g)});
            const double dg = dk_dg(g, l, m);
            if (std::abs(dg) >= resolvable) {
                const double fd_g = (k_closed_form(g + hg, l, m) - k_closed_form(g - hg, l, m)) /
                                    (2.0 * hg);
                worst = std::max(worst, std::abs(fd_g - dg) / std::abs(dg));
                ++checked;
            } else {
                ++degenerate;
            }
        }
        std::ostringstream detail;
        detail << "max_rel_err=" << worst << " checked=" << checked
               << " degenerate=" << degenerate;
        report("derivatives_vs_finite_difference", checked > 0 && worst < 1e-6, detail.str());
    }

    // Order-statistic pricing against the brute-force mechanism scan.
    {
        SplitMix64 rng(derive_seed(config.seed, 0xA0C7));
        bool all_ok = true;
        for (int i = 0; i < 50 && all_ok; ++i) {
            MarketParams market = config.market;
            market.n_informed = static_cast<int>(rng() % 3);
            market.m_deals = 1 + static_cast<int>(rng() % 4);
            BeliefProfile beliefs;
            beliefs.ceiling = 1.0 + rng.uniform();
            beliefs.floor = rng.uniform() * 0.5;
            beliefs.informed_value = rng.uniform(beliefs.floor, beliefs.ceiling);
            const int noise = static_cast<int>(rng() % 5);
            for (int j = 0; j < noise; ++j)
                beliefs.noise_estimates.push_back(rng.uniform(beliefs.floor, beliefs.ceiling));
            const double step = (beliefs.ceiling - beliefs.floor) / 50.0;
            const EquilibriumCheck verdict =
                brute_force_equilibrium_check(beliefs, market, step);
            const AuctionOutcome sorted = equilibrium_price(beliefs, market);
            std::vector<double> bids(static_cast<std::size_t>(market.n_informed),
                                     beliefs.informed_value);
            bids.insert(bids.end(), beliefs.noise_estimates.begin(),
                        beliefs.noise_estimates.end());
            const AuctionOutcome mechanism = simulate_deal_mechanism(beliefs, market, bids);
            all_ok = verdict.confirmed && sorted.deal_prices == mechanism.deal_prices &&
                     sorted.final_price == mechanism.final_price;
        }
        report("auction_vs_brute_force", all_ok, "instances=50");
    }

    // Analytic exceedance probability against the Monte Carlo oracle.
    {
        std::size_t checked = 0;
        std::size_t outside = 0;
        const int workers = effective_workers(config);
        std::size_t index = 0;
        for (const PointSpec& point : grid_points(config)) {
            MarketParams market = config.market;
            market.lambda = point.lambda;
            const SweepRow row = analytic_row(config, point);
            const McEstimate mc =
                mc_estimate_f({point.s0}, point.gov, config.firm, market, config.trials,
                              derive_seed(config.seed, 0x5157u, index++), workers);
            const double se = null_std_error(row.f_analytic, config.trials);
            ++checked;
            if (std::abs(mc.estimate - row.f_analytic) > 4.0 * se) ++outside;
        }
        std::ostringstream detail;
        detail << "points=" << checked << " outside_4se=" << outside;
        report("monte_carlo_vs_analytic", outside == 0, detail.str());
    }

    out << "checks_failed=" << failures << "\n";
    if (!out) {
        log << "error: failed to write report\n";
        return kExitIo;
    }
    log << "validate: " << (failures == 0 ? "all checks passed" : "checks failed") << "\n";
    return failures == 0 ? kExitOk : kExitProperty;
}

}  // namespace govliq
