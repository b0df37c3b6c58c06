// experiments.hpp - Reproducible experiment presets: SNR contours, diversity
// reports and MI table dumps, with provenance-stamped CSV/JSON emission.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ddf/config.hpp"
#include "ddf/engine.hpp"

namespace ddf {

inline constexpr const char* kToolVersion = "ddfsim 1.0.0";

struct ExperimentSpec {
    std::string preset;  // outage_contour | se_contour | diversity_report | mi_table

    SchemeId scheme;
    std::string frame_preset = "open_loop_7sf";
    long long info_bits = 120;
    long long t1 = 40;  // closed-loop first sub-frame length

    double snr_sr_db = 20.0;
    int n_rx = 2;

    // Relay conditioning for outage contours: decode-subframe labels, plus
    // marginal (activation from the S->R link) when `marginal` is set.
    std::vector<int> decode_subframes;
    bool marginal = false;

    std::vector<double> snr_sd_grid_db = {-10, -5, 0, 5, 10};
    double target = 1e-2;                   // outage cap or SE floor
    std::vector<double> rates = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

    double search_lo_db = -20.0;
    double search_hi_db = 40.0;
    double tol_db = 0.1;

    long long trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out_path;

    int mi_table_order = 2;  // for the mi_table preset
    MiGridSpec mi_grid;

    static ExperimentSpec from_config(const ConfigFile& cfg);

    FrameConfig frame() const;
    FrameConfig frame_for_rate(double rate) const;
    // Key-value echo of everything that determines the output data.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

using ProgressFn = std::function<void(const std::string&)>;

// Each runner returns the full output file contents (CSV or JSON).
std::string run_outage_contour(const ExperimentSpec& spec, const MiTableSet& tables,
                               const ProgressFn& progress = {});
std::string run_se_contour(const ExperimentSpec& spec, const MiTableSet& tables,
                           const ProgressFn& progress = {});
std::string run_diversity_report(const ExperimentSpec& spec);
std::string run_mi_table_dump(const ExperimentSpec& spec);

// Builds the table set covering every order the spec's scheme can request.
MiTableSet tables_for_spec(const ExperimentSpec& spec);

}  // namespace ddf
