#include "govliq/auction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "govliq/rng.hpp"

namespace govliq {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

std::vector<double> assemble_estimates(const BeliefProfile& beliefs, const MarketParams& market) {
    std::vector<double> estimates;
    estimates.reserve(static_cast<std::size_t>(market.n_informed) + beliefs.noise_estimates.size());
    estimates.insert(estimates.end(), static_cast<std::size_t>(market.n_informed),
                     beliefs.informed_value);
    estimates.insert(estimates.end(), beliefs.noise_estimates.begin(),
                     beliefs.noise_estimates.end());
    return estimates;
}

// Resolves one deal among the active traders: the highest bid wins (ties
// to the lowest index) at the larger of the runner-up bid and the floor.
// A sole or tied-at-floor bidder never buys through his own bid; the
// seller's fallback ask at the floor absorbs those deals.
struct DealResolution {
    int winner = -1;  // -1: fallback ask absorbed the deal
    double price = 0.0;
};

DealResolution resolve_deal(std::span<const double> bids, const std::vector<bool>& active,
                            double floor) {
    int best = -1;
    int second = -1;
    for (int i = 0; i < static_cast<int>(bids.size()); ++i) {
        if (!active[i]) continue;
        if (best < 0 || bids[i] > bids[best]) {
            second = best;
            best = i;
        } else if (second < 0 || bids[i] > bids[second]) {
            second = i;
        }
    }
    DealResolution deal;
    if (best < 0 || bids[best] <= floor) {
        deal.price = floor;
        return deal;
    }
    deal.winner = best;
    deal.price = std::max(second >= 0 ? bids[second] : floor, floor);
    return deal;
}

}  // namespace

void MarketParams::validate() const {
    require(lambda >= 0.0, "market.lambda must be non-negative");
    require(delta_t > 0.0, "market.delta_t must be positive");
    require(n_informed >= 0, "market.n_informed must be non-negative");
    require(m_deals >= 1, "market.m_deals must be at least 1");
    require(n_shares_per_deal >= 1, "market.n_shares_per_deal must be at least 1");
    require(m_deals >= n_informed,
            "market.m_deals must be at least market.n_informed (heavy selling pressure)");
}

void BeliefProfile::validate() const {
    require(floor <= ceiling, "belief floor must not exceed the ceiling");
    require(informed_value >= floor && informed_value <= ceiling,
            "informed value must lie within [floor, ceiling]");
    for (double v : noise_estimates)
        require(v >= floor && v <= ceiling, "noise estimates must lie within [floor, ceiling]");
}

std::uint32_t sample_arrivals(const MarketParams& market, std::uint64_t seed) {
    SplitMix64 rng(seed);
    return poisson_draw(rng, market.arrival_mean());
}

std::vector<double> sample_noise_beliefs(std::uint32_t count, double floor, double ceiling,
                                         std::uint64_t seed) {
    require(floor <= ceiling, "sample_noise_beliefs: floor must not exceed ceiling");
    SplitMix64 rng(seed);
    std::vector<double> estimates(count);
    for (double& v : estimates) v = rng.uniform(floor, ceiling);
    return estimates;
}

AuctionOutcome equilibrium_price(const BeliefProfile& beliefs, const MarketParams& market) {
    std::vector<double> sorted = assemble_estimates(beliefs, market);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const int n = static_cast<int>(sorted.size());
    const int m = market.m_deals;

    AuctionOutcome outcome;
    outcome.deal_prices.reserve(static_cast<std::size_t>(m));
    const int priced_by_bids = std::min(n - 1, m);  // deals closed by competing traders
    for (int k = 1; k <= m; ++k) {
        if (k <= priced_by_bids) {
            outcome.deal_prices.push_back(sorted[static_cast<std::size_t>(k)]);
        } else {
            outcome.deal_prices.push_back(beliefs.floor);
            outcome.floor_triggered = true;
        }
    }
    outcome.final_price = outcome.deal_prices.back();
    return outcome;
}

AuctionOutcome simulate_deal_mechanism(const BeliefProfile& beliefs, const MarketParams& market,
                                       std::span<const double> bids) {
    const std::vector<double> estimates = assemble_estimates(beliefs, market);
    require(bids.size() == estimates.size(),
            "simulate_deal_mechanism: one bid per trader required");

    std::vector<bool> active(estimates.size(), true);
    int remaining = static_cast<int>(estimates.size());
    AuctionOutcome outcome;
    outcome.deal_prices.reserve(static_cast<std::size_t>(market.m_deals));
    for (int k = 0; k < market.m_deals; ++k) {
        const DealResolution deal = resolve_deal(bids, active, beliefs.floor);
        outcome.deal_prices.push_back(deal.price);
        // with one or zero bidders left only the seller's fallback ask
        // pins the price
        if (remaining <= 1) outcome.floor_triggered = true;
        if (deal.winner >= 0) {
            active[static_cast<std::size_t>(deal.winner)] = false;
            --remaining;
        } else if (remaining > 1) {
            outcome.floor_triggered = true;
        }
    }
    outcome.final_price = outcome.deal_prices.back();
    return outcome;
}

EquilibriumCheck brute_force_equilibrium_check(const BeliefProfile& beliefs,
                                               const MarketParams& market, double bid_grid_step,
                                               std::span<const double> bids) {
    const std::vector<double> estimates = assemble_estimates(beliefs, market);
    const int n = static_cast<int>(estimates.size());
    require(n <= 8 && market.m_deals <= 6,
            "brute_force_equilibrium_check: at most 8 traders and 6 deals");
    require(bid_grid_step > 0.0, "brute_force_equilibrium_check: grid step must be positive");

    std::vector<double> profile(bids.begin(), bids.end());
    if (profile.empty()) profile = estimates;  // the candidate equilibrium plays estimates
    require(static_cast<int>(profile.size()) == n,
            "brute_force_equilibrium_check: one bid per trader required");

    // Deviation bids: a regular grid over [floor, ceiling] plus every
    // estimate and its one-step neighbours.
    std::vector<double> grid;
    for (double b = beliefs.floor; b <= beliefs.ceiling + 0.5 * bid_grid_step; b += bid_grid_step)
        grid.push_back(std::min(b, beliefs.ceiling));
    for (double e : estimates)
        for (double b : {e - bid_grid_step, e, e + bid_grid_step})
            grid.push_back(std::clamp(b, beliefs.floor, beliefs.ceiling));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const double shares = market.n_shares_per_deal;
    const double tol = 1e-9 * std::max(1.0, beliefs.ceiling - beliefs.floor) * shares;

    // Replay the deals; at each one, scan every active trader's
    // single-deal deviations. Traders cannot condition on deals they do
    // not know will happen, so profits compare within the deal only.
    std::vector<bool> active(static_cast<std::size_t>(n), true);
    std::vector<double> caps = profile;
    EquilibriumCheck verdict;
    for (int k = 0; k < market.m_deals; ++k) {
        const DealResolution base = resolve_deal(caps, active, beliefs.floor);
        for (int t = 0; t < n; ++t) {
            if (!active[static_cast<std::size_t>(t)]) continue;
            const double est = estimates[static_cast<std::size_t>(t)];
            double base_profit = 0.0;
            if (base.winner == t && est != base.price) base_profit = shares * (est - base.price);
            for (double b : grid) {
                const double saved = caps[static_cast<std::size_t>(t)];
                caps[static_cast<std::size_t>(t)] = b;
                const DealResolution dev = resolve_deal(caps, active, beliefs.floor);
                caps[static_cast<std::size_t>(t)] = saved;
                double dev_profit = 0.0;
                if (dev.winner == t && est != dev.price) dev_profit = shares * (est - dev.price);
                if (dev_profit > base_profit + tol) {
                    verdict.confirmed = false;
                    verdict.trader = t;
                    verdict.deal = k;
                    verdict.bid = b;
                    verdict.gain = (dev_profit - base_profit) / shares;
                    return verdict;
                }
            }
        }
        if (base.winner >= 0) active[static_cast<std::size_t>(base.winner)] = false;
    }
    return verdict;
}

AuctionOutcome run_auction_trial(double informed_value, double floor, double ceiling,
                                 const MarketParams& market, std::uint64_t seed) {
    BeliefProfile beliefs;
    beliefs.informed_value = informed_value;
    beliefs.floor = floor;
    beliefs.ceiling = ceiling;
    const std::uint32_t arrivals = sample_arrivals(market, derive_seed(seed, 1));
    beliefs.noise_estimates = sample_noise_beliefs(arrivals, floor, ceiling, derive_seed(seed, 2));
    return equilibrium_price(beliefs, market);
}

double run_auction_trial_final_price(double informed_value, double floor, double ceiling,
                                     const MarketParams& market, std::uint64_t seed,
                                     std::vector<double>& scratch) {
    SplitMix64 arrival_rng(derive_seed(seed, 1));
    const std::uint32_t arrivals = poisson_draw(arrival_rng, market.arrival_mean());
    const int n = market.n_informed + static_cast<int>(arrivals);
    if (n <= market.m_deals) return floor;

    scratch.clear();
    scratch.insert(scratch.end(), static_cast<std::size_t>(market.n_informed), informed_value);
    SplitMix64 belief_rng(derive_seed(seed, 2));
    for (std::uint32_t i = 0; i < arrivals; ++i)
        scratch.push_back(belief_rng.uniform(floor, ceiling));
    // (m_deals + 1)-th largest estimate.
    std::nth_element(scratch.begin(), scratch.begin() + market.m_deals, scratch.end(),
                     std::greater<>());
    return scratch[static_cast<std::size_t>(market.m_deals)];
}

}  // namespace govliq
