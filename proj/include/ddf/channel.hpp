// channel.hpp - Quasi-static Rayleigh fading draws and link budgets.

#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ddf/rng.hpp"

namespace ddf {

// Sentinel for a link that contributes exactly zero received power.
constexpr double kLinkOffDb = -std::numeric_limits<double>::infinity();

inline double db_to_linear(double db) {
    if (db == kLinkOffDb) return 0.0;
    return std::pow(10.0, db / 10.0);
}

inline double linear_to_db(double linear) {
    if (linear <= 0.0) return kLinkOffDb;
    return 10.0 * std::log10(linear);
}

// Long-term SNRs of the three links, in dB, and the destination antenna count.
struct LinkBudget {
    double snr_sd_db = 0.0;
    double snr_rd_db = kLinkOffDb;
    double snr_sr_db = kLinkOffDb;
    int n_rx = 1;

    double snr_sd() const { return db_to_linear(snr_sd_db); }
    double snr_rd() const { return db_to_linear(snr_rd_db); }
    double snr_sr() const { return db_to_linear(snr_sr_db); }
    bool relay_data_link_off() const { return snr_rd() == 0.0; }
};

// One quasi-static realization: every entry i.i.d. CN(0, 1), constant for the
// whole frame.
struct FadingDraw {
    std::vector<std::complex<double>> h_sd;  // length n_rx
    std::vector<std::complex<double>> h_rd;  // length n_rx
    std::complex<double> h_sr;
};

FadingDraw draw_fading(int n_rx, TrialRng& stream);

// ||h||^2 * snr: post-MRC per-symbol SNR of a SIMO link.
double post_mrc_snr(std::span<const std::complex<double>> h, double snr_linear);

double norm_sq(std::span<const std::complex<double>> h);

}  // namespace ddf
