#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace govliq {

/// Auction-side parameters. m_deals >= n_informed is the standing
/// heavy-selling-pressure assumption; it is enforced by validate() and by
/// the liquidity operations, not by equilibrium_price itself.
struct MarketParams {
    double lambda = 2.0;          // noise-trader arrival rate, >= 0
    double delta_t = 1.0;         // inter-transaction interval, > 0
    int n_informed = 2;           // informed trader count, >= 0
    int m_deals = 4;              // number of deals, >= 1
    int n_shares_per_deal = 100;  // shares per deal, >= 1

    double arrival_mean() const { return lambda * delta_t; }
    int surplus_deals() const { return m_deals - n_informed; }
    void validate() const;  // throws std::invalid_argument
};

/// Value estimates brought to the auction: one shared estimate for all
/// informed traders plus one estimate per arrived noise trader, bracketed
/// by the zero-extraction ceiling and the maximal-extraction floor.
struct BeliefProfile {
    double informed_value = 0.0;
    std::vector<double> noise_estimates{};
    double floor = 0.0;
    double ceiling = 0.0;

    void validate() const;  // throws std::invalid_argument
};

/// Per-deal prices and the final market price. floor_triggered records
/// that the seller's fallback ask at the floor was needed (fewer traders
/// than deals, including the exactly-equal case).
struct AuctionOutcome {
    std::vector<double> deal_prices{};
    double final_price = 0.0;
    bool floor_triggered = false;
};

/// Verdict of the brute-force equilibrium scan. When not confirmed,
/// identifies the deviating trader (index into the assembled estimate
/// list: informed first, then noise), the deal, the deviating bid and
/// the believed gain.
struct EquilibriumCheck {
    bool confirmed = true;
    int trader = -1;
    int deal = -1;
    double bid = 0.0;
    double gain = 0.0;
};

/// Number of noise traders arriving in one inter-transaction interval:
/// Poisson with mean lambda * delta_t, deterministic given the seed.
std::uint32_t sample_arrivals(const MarketParams& market, std::uint64_t seed);

/// Independent uniform estimates on [floor, ceiling], deterministic given
/// the seed. Rejects floor > ceiling.
std::vector<double> sample_noise_beliefs(std::uint32_t count, double floor, double ceiling,
                                         std::uint64_t seed);

/// Equilibrium deal prices by order statistics: the k-th deal closes at
/// the (k+1)-th largest estimate (ties counted with multiplicity); once
/// fewer traders than remaining deals are left, every remaining deal
/// prices at the floor. The final price is the last deal's price.
AuctionOutcome equilibrium_price(const BeliefProfile& beliefs, const MarketParams& market);

/// Simulates the sequential open-auction mechanism for an explicit bid
/// profile (bids parallel to the assembled estimates: informed first,
/// then noise). Used by the brute-force check and as a second route to
/// the equilibrium outcome when bids equal estimates.
AuctionOutcome simulate_deal_mechanism(const BeliefProfile& beliefs, const MarketParams& market,
                                       std::span<const double> bids);

/// Brute-force equilibrium oracle: simulates the mechanism under the
/// given bid profile (estimates themselves when bids is empty), then
/// scans unilateral single-deal deviations for every trader over a bid
/// grid of the given resolution plus every estimate +/- one step.
/// Deviations are evaluated deal-locally: traders do not know how many
/// deals remain, so a deviation counts only if it raises the deviator's
/// believed profit in the deal where it applies. Confirmation is up to
/// grid resolution. Rejects instances with more than 8 traders or 6
/// deals.
EquilibriumCheck brute_force_equilibrium_check(const BeliefProfile& beliefs,
                                               const MarketParams& market, double bid_grid_step,
                                               std::span<const double> bids = {});

/// One Monte Carlo auction round: sample arrivals, sample noise beliefs,
/// run the equilibrium pricing. Deterministic given the seed.
AuctionOutcome run_auction_trial(double informed_value, double floor, double ceiling,
                                 const MarketParams& market, std::uint64_t seed);

/// Final price of run_auction_trial without materializing the outcome;
/// scratch is reused between calls. Draws the identical random sequence.
double run_auction_trial_final_price(double informed_value, double floor, double ceiling,
                                     const MarketParams& market, std::uint64_t seed,
                                     std::vector<double>& scratch);

}  // namespace govliq
