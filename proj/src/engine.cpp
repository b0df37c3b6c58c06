#include "ddf/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ddf {

std::optional<int> relay_activation(const FrameConfig& frame, double i_sr) {
    if (!(i_sr >= 0.0)) throw std::domain_error("relay_activation: MI must be >= 0");
    // Decoding after sub-frame m requires I_SR >= R_m; transmitting during
    // the last sub-frame is the latest useful activation.
    for (int m = 1; m <= frame.n_max() - 1; ++m) {
        if (i_sr >= rate_after_n(frame, m)) return m + 1;
    }
    return std::nullopt;
}

double accumulated_mi(const BlockProfile& profile, const FrameConfig& frame, int n,
                      const MiView& mi) {
    double bits = 0.0;
    for (const Block& b : profile.blocks) {
        const long long symbols = b.bits / b.order_bits;
        bits += static_cast<double>(symbols) * mi(b.order_bits, b.eff_snr);
    }
    return bits / static_cast<double>(frame.symbols_through(n));
}

TrialOutcome simulate_trial(const SchemeId& scheme, const FrameConfig& frame,
                            const LinkBudget& budget, std::uint64_t trial_index,
                            std::uint64_t seed, const MiView& mi,
                            const ActivationPolicy& policy) {
    TrialRng rng(seed, trial_index);
    const FadingDraw draw = draw_fading(budget.n_rx, rng);

    TrialOutcome outcome;
    if (policy.forced) {
        outcome.first_relay_subframe = *policy.forced;
    } else {
        const double snr_sr = budget.snr_sr();
        if (snr_sr > 0.0) {
            const double i_sr = mi(frame.source_order_bits, snr_sr * std::norm(draw.h_sr));
            outcome.first_relay_subframe = relay_activation(frame, i_sr);
        }
    }

    // One fading draw serves every horizon: quasi-static within the frame.
    for (int n = 1; n <= frame.n_max(); ++n) {
        std::optional<int> m_for_horizon;
        if (outcome.first_relay_subframe && *outcome.first_relay_subframe <= n) {
            m_for_horizon = outcome.first_relay_subframe;
        }
        const BlockProfile profile =
            block_profile(scheme, frame, m_for_horizon, n, draw, budget);
        const double rate = rate_after_n(frame, n);
        if (accumulated_mi(profile, frame, n, mi) >= rate) {
            outcome.dest_first_decode = n;
            outcome.rate_credited = rate;
            break;
        }
    }
    return outcome;
}

std::vector<TrialOutcome> run_trials(const SchemeId& scheme, const FrameConfig& frame,
                                     const LinkBudget& budget, long long n_trials,
                                     std::uint64_t seed, const MiView& mi,
                                     const ActivationPolicy& policy, int threads) {
    if (n_trials < 1) throw std::invalid_argument("run_trials: need at least one trial");
    frame.validate();

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(n_trials));
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<long long>(workers, n_trials));

    if (workers == 1) {
        for (long long t = 0; t < n_trials; ++t) {
            outcomes[t] = simulate_trial(scheme, frame, budget, t, seed, mi, policy);
        }
        return outcomes;
    }

    // Each trial writes only its own slot, so scheduling cannot affect the
    // result; chunks just keep the atomic counter cold.
    std::atomic<long long> next_chunk{0};
    constexpr long long kChunk = 1024;
    const long long chunk_count = (n_trials + kChunk - 1) / kChunk;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const long long chunk = next_chunk.fetch_add(1);
                if (chunk >= chunk_count) return;
                const long long begin = chunk * kChunk;
                const long long end = std::min(begin + kChunk, n_trials);
                for (long long t = begin; t < end; ++t) {
                    outcomes[t] = simulate_trial(scheme, frame, budget, t, seed, mi, policy);
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    return outcomes;
}

Estimate outage_from_outcomes(const std::vector<TrialOutcome>& outcomes, std::uint64_t seed) {
    long long failures = 0;
    for (const TrialOutcome& o : outcomes) {
        if (!o.dest_first_decode) ++failures;
    }
    const double n = static_cast<double>(outcomes.size());
    const double p = static_cast<double>(failures) / n;
    return {p, std::sqrt(p * (1.0 - p) / n), static_cast<long long>(outcomes.size()), seed};
}

Estimate se_from_outcomes(const std::vector<TrialOutcome>& outcomes, std::uint64_t seed) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const TrialOutcome& o : outcomes) {
        sum += o.rate_credited;
        sum_sq += o.rate_credited * o.rate_credited;
    }
    const double n = static_cast<double>(outcomes.size());
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    return {mean, std::sqrt(var / n), static_cast<long long>(outcomes.size()), seed};
}

Estimate estimate_outage(const SchemeId& scheme, const FrameConfig& frame,
                         const LinkBudget& budget, long long n_trials, std::uint64_t seed,
                         const MiView& mi, int threads) {
    return outage_from_outcomes(
        run_trials(scheme, frame, budget, n_trials, seed, mi, {}, threads), seed);
}

Estimate conditioned_outage(const SchemeId& scheme, const FrameConfig& frame,
                            const LinkBudget& budget, std::optional<int> first_tx,
                            long long n_trials, std::uint64_t seed, const MiView& mi,
                            int threads) {
    if (first_tx && (*first_tx < 2 || *first_tx > frame.n_max())) {
        throw std::invalid_argument("conditioned_outage: M must be in [2, N_max]");
    }
    return outage_from_outcomes(
        run_trials(scheme, frame, budget, n_trials, seed, mi, ActivationPolicy::fixed(first_tx),
                   threads),
        seed);
}

Estimate estimate_spectral_efficiency(const SchemeId& scheme, const FrameConfig& frame,
                                      const LinkBudget& budget, long long n_trials,
                                      std::uint64_t seed, const MiView& mi, int threads) {
    return se_from_outcomes(
        run_trials(scheme, frame, budget, n_trials, seed, mi, {}, threads), seed);
}

RateChoice slow_link_adaptation(const SchemeId& scheme,
                                const std::function<FrameConfig(double)>& frame_for_rate,
                                const std::vector<double>& rates, const LinkBudget& budget,
                                long long n_trials, std::uint64_t seed, const MiTableSet& tables,
                                int threads) {
    if (rates.empty()) throw std::invalid_argument("slow_link_adaptation: empty rate set");
    std::vector<double> sorted = rates;
    std::sort(sorted.begin(), sorted.end());
    RateChoice best;
    bool first = true;
    for (double rate : sorted) {
        const FrameConfig frame = frame_for_rate(rate);
        const MiView mi = MiView::for_scheme(scheme, tables);
        const Estimate se =
            estimate_spectral_efficiency(scheme, frame, budget, n_trials, seed, mi, threads);
        // Strict improvement required: ties go to the lower rate.
        if (first || se.value > best.spectral_efficiency.value) {
            best = {rate, se};
            first = false;
        }
    }
    return best;
}

SnrSearchResult find_snr_for_target_metric(
    const std::function<Estimate(double snr_db)>& evaluate, const TargetMetric& target,
    double lo_db, double hi_db, double tol_db) {
    if (!(lo_db < hi_db) || !(tol_db > 0.0)) {
        throw std::invalid_argument("find_snr_for_target: bad search interval");
    }
    const bool minimize = target.kind == TargetMetric::Kind::outage_at_most;
    auto meets = [&](const Estimate& e) {
        return minimize ? e.value <= target.value : e.value >= target.value;
    };

    const Estimate at_lo = evaluate(lo_db);
    if (meets(at_lo)) return {true, lo_db, at_lo, 0.0};
    const Estimate at_hi = evaluate(hi_db);
    if (!meets(at_hi)) {
        // The metric must improve toward hi; a feasible lo with infeasible hi
        // would have been an ordering error, an infeasible pair is honest.
        const bool lo_better = minimize ? at_lo.value < at_hi.value : at_lo.value > at_hi.value;
        if (lo_better) {
            throw std::runtime_error("find_snr_for_target: metric not monotone over the interval");
        }
        return {false, hi_db, at_hi, 0.0};
    }

    double lo = lo_db;
    double hi = hi_db;
    Estimate lo_est = at_lo;
    Estimate hi_est = at_hi;
    while (hi - lo > tol_db) {
        const double mid = 0.5 * (lo + hi);
        const Estimate at_mid = evaluate(mid);
        if (meets(at_mid)) {
            hi = mid;
            hi_est = at_mid;
        } else {
            lo = mid;
            lo_est = at_mid;
        }
    }

    // Convert the estimator noise into a dB uncertainty through the local
    // slope of the metric across the final bracket.
    double se_db = 0.0;
    const double dv = std::abs(hi_est.value - lo_est.value);
    if (dv > 0.0) se_db = hi_est.stderr_ * (hi - lo) / dv;
    return {true, hi, hi_est, se_db};
}

SnrSearchResult find_snr_for_target(const SchemeId& scheme, const FrameConfig& frame,
                                    const SnrSearchSpec& spec, const MiView& mi) {
    auto budget_at = [&](double snr_db) {
        LinkBudget budget;
        budget.n_rx = spec.n_rx;
        budget.snr_sr_db = spec.snr_sr_db;
        switch (spec.axis) {
            case SearchAxis::relay_snr:
                budget.snr_sd_db = spec.fixed_snr_db;
                budget.snr_rd_db = snr_db;
                break;
            case SearchAxis::source_snr:
                budget.snr_sd_db = snr_db;
                budget.snr_rd_db = spec.fixed_snr_db;
                break;
            case SearchAxis::common_snr:
                budget.snr_sd_db = snr_db;
                budget.snr_rd_db = snr_db;
                break;
        }
        return budget;
    };
    // Common random numbers: the same seed (hence the same fading draws) at
    // every evaluated SNR keeps the empirical metric monotone enough for the
    // bracket to be trustworthy at tol_db resolution.
    auto evaluate = [&](double snr_db) {
        const std::vector<TrialOutcome> outcomes = run_trials(
            scheme, frame, budget_at(snr_db), spec.trials, spec.seed, mi, spec.policy,
            spec.threads);
        return spec.target.kind == TargetMetric::Kind::outage_at_most
                   ? outage_from_outcomes(outcomes, spec.seed)
                   : se_from_outcomes(outcomes, spec.seed);
    };
    return find_snr_for_target_metric(evaluate, spec.target, spec.lo_db, spec.hi_db, spec.tol_db);
}

}  // namespace ddf
