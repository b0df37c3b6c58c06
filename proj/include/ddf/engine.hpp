// engine.hpp - Monte Carlo engine for the DDF protocol: per-trial timeline,
// outage probability, HARQ spectral efficiency, link adaptation and SNR
// threshold search.
//
// Determinism contract: every estimate is a pure function of (seed, config).
// Trials draw from counter-based substreams keyed by (seed, trial index) and
// reductions run in trial order, so the thread count never changes a result.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ddf/channel.hpp"
#include "ddf/frame.hpp"
#include "ddf/mi.hpp"
#include "ddf/schemes.hpp"

namespace ddf {

// Where per-symbol MI comes from: precomputed finite-alphabet tables, or the
// Gaussian-input log2(1 + snr) reference for baseline curves.
class MiView {
public:
    explicit MiView(const MiTableSet& tables) : tables_(&tables) {}
    static MiView gaussian() { return MiView(); }

    double operator()(int order_bits, double snr_linear) const {
        if (!tables_) return gaussian_mi(snr_linear);
        return tables_->mi(order_bits, snr_linear);
    }
    bool is_gaussian() const { return tables_ == nullptr; }

    static MiView for_scheme(const SchemeId& scheme, const MiTableSet& tables) {
        return scheme.gaussian_alphabet ? gaussian() : MiView(tables);
    }

private:
    MiView() : tables_(nullptr) {}
    const MiTableSet* tables_;
};

struct TrialOutcome {
    std::optional<int> first_relay_subframe;  // M, nullopt when never decoded
    std::optional<int> dest_first_decode;     // n*, nullopt = outage at N_max
    double rate_credited = 0.0;               // R_{n*}, or 0
};

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    long long n_trials = 0;
    std::uint64_t seed = 0;
};

// How the relay activation is determined per trial.
struct ActivationPolicy {
    // When forced is set, the S->R link is ignored and the relay transmits
    // from *forced.value() (nullopt inside = relay stays silent).
    std::optional<std::optional<int>> forced;

    static ActivationPolicy from_sr_link() { return {}; }
    static ActivationPolicy fixed(std::optional<int> first_tx) { return {first_tx}; }
};

// First sub-frame the relay transmits in: M = 1 + min{m : I_SR >= R_m} when
// some m <= N_max - 1 qualifies, otherwise nullopt.
std::optional<int> relay_activation(const FrameConfig& frame, double i_sr);

// Sum over blocks of (symbols * per-symbol MI) normalized by the channel uses
// through sub-frame n; bits per channel use.
double accumulated_mi(const BlockProfile& profile, const FrameConfig& frame, int n,
                      const MiView& mi);

TrialOutcome simulate_trial(const SchemeId& scheme, const FrameConfig& frame,
                            const LinkBudget& budget, std::uint64_t trial_index,
                            std::uint64_t seed, const MiView& mi,
                            const ActivationPolicy& policy = {});

// All trial outcomes, deterministically indexed by trial. threads = 0 picks
// the hardware concurrency.
std::vector<TrialOutcome> run_trials(const SchemeId& scheme, const FrameConfig& frame,
                                     const LinkBudget& budget, long long n_trials,
                                     std::uint64_t seed, const MiView& mi,
                                     const ActivationPolicy& policy = {}, int threads = 0);

// P_out at horizon N_max: fraction of trials the destination never decodes.
Estimate estimate_outage(const SchemeId& scheme, const FrameConfig& frame,
                         const LinkBudget& budget, long long n_trials, std::uint64_t seed,
                         const MiView& mi, int threads = 0);

// Same, with the relay activation forced to first_tx (S->R fading ignored).
Estimate conditioned_outage(const SchemeId& scheme, const FrameConfig& frame,
                            const LinkBudget& budget, std::optional<int> first_tx,
                            long long n_trials, std::uint64_t seed, const MiView& mi,
                            int threads = 0);

// HARQ spectral efficiency: mean credited rate R_{n*} over trials.
Estimate estimate_spectral_efficiency(const SchemeId& scheme, const FrameConfig& frame,
                                      const LinkBudget& budget, long long n_trials,
                                      std::uint64_t seed, const MiView& mi, int threads = 0);

// Helpers for rebuilding the estimates from a collected outcome vector (the
// probability-decomposition bookkeeping checks regroup these).
Estimate outage_from_outcomes(const std::vector<TrialOutcome>& outcomes, std::uint64_t seed);
Estimate se_from_outcomes(const std::vector<TrialOutcome>& outcomes, std::uint64_t seed);

struct RateChoice {
    double rate = 0.0;           // coding rate at the end of the first sub-frame
    Estimate spectral_efficiency;
};

// Maximizes S_HARQ over first-sub-frame coding rates; frames are built with
// frame_for_rate. Ties break toward the lower rate.
RateChoice slow_link_adaptation(const SchemeId& scheme,
                                const std::function<FrameConfig(double)>& frame_for_rate,
                                const std::vector<double>& rates, const LinkBudget& budget,
                                long long n_trials, std::uint64_t seed, const MiTableSet& tables,
                                int threads = 0);

enum class SearchAxis { relay_snr, source_snr, common_snr };

struct TargetMetric {
    enum class Kind { outage_at_most, se_at_least } kind;
    double value;

    static TargetMetric outage(double p) { return {Kind::outage_at_most, p}; }
    static TargetMetric se(double bpcu) { return {Kind::se_at_least, bpcu}; }
};

struct SnrSearchResult {
    bool feasible = false;
    double snr_db = 0.0;            // smallest searched SNR meeting the target
    Estimate at_solution;           // metric estimate at snr_db
    double se_db = 0.0;             // statistical dB uncertainty from the final bracket
};

struct SnrSearchSpec {
    SearchAxis axis = SearchAxis::relay_snr;
    double fixed_snr_db = 0.0;      // the non-searched data axis (ignored for common_snr)
    double snr_sr_db = kLinkOffDb;  // ignored when the activation policy forces M
    int n_rx = 2;
    TargetMetric target = TargetMetric::outage(1e-2);
    double lo_db = -20.0;
    double hi_db = 40.0;
    double tol_db = 0.1;
    long long trials = 100000;
    std::uint64_t seed = 1;
    ActivationPolicy policy = {};
    int threads = 0;
};

// Bisection on the searched SNR with common random numbers across
// evaluations. Throws std::runtime_error when the metric orders the wrong way
// round (better at lo than hi while hi fails).
SnrSearchResult find_snr_for_target(const SchemeId& scheme, const FrameConfig& frame,
                                    const SnrSearchSpec& spec, const MiView& mi);

// Same search against an arbitrary evaluator (used for link-adapted SE
// contours); evaluator returns the metric estimate at a searched-axis SNR.
SnrSearchResult find_snr_for_target_metric(
    const std::function<Estimate(double snr_db)>& evaluate, const TargetMetric& target,
    double lo_db, double hi_db, double tol_db);

}  // namespace ddf
