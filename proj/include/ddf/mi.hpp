// mi.hpp - Mutual information of discrete QAM inputs on a scalar complex
// Gaussian channel, plus tabulation and interpolation.
//
// Model: Y = sqrt(snr) * X + N with X uniform on the alphabet and N circular
// complex Gaussian with unit total variance. All values are in bits per
// channel use.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "ddf/constellation.hpp"

namespace ddf {

enum class MiMethod { quadrature, monte_carlo };

struct MiPrecision {
    int quad_order = 16;            // Gauss-Hermite nodes per real dimension
    long long mc_samples = 40000;   // noise draws for the MC estimator
    std::uint64_t mc_seed = 0x5eedf00dULL;
};

// Gauss-Hermite rule for integral of f(t) * exp(-t^2) dt.
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;
    static const GaussHermite& of_order(int n);
};

// I(X;Y) for the channel above. Quadrature is deterministic; Monte Carlo
// averages over mc_samples noise draws. Result is clamped to the open
// interval [0, m): the alphabet entropy is not attainable at finite SNR.
double mi_estimate(const Constellation& c, double snr_linear, MiMethod method,
                   const MiPrecision& precision = {});

// log2(1 + snr), the Gaussian-input reference.
double gaussian_mi(double snr_linear);

struct MiGridSpec {
    double lo_db = -20.0;
    double hi_db = 40.0;
    double step_db = 0.25;
};

// Precomputed MI-vs-SNR curve on a uniform dB grid. Lookups interpolate
// linearly in dB inside the grid, scale linearly in SNR below it (exact 0 at
// snr = 0), and clamp to the top entry above it.
class MiTable {
public:
    MiTable(int order_bits, MiGridSpec grid, std::vector<double> mi_bits);

    double lookup(double snr_linear) const;

    int order_bits() const { return order_bits_; }
    std::size_t size() const { return mi_bits_.size(); }
    const std::vector<double>& mi_bits() const { return mi_bits_; }
    double grid_db(std::size_t j) const { return grid_.lo_db + grid_.step_db * j; }
    const MiGridSpec& grid() const { return grid_; }

    void write_csv(std::ostream& out) const;
    // Parses the two-column (snr_db, mi_bits) format written by write_csv.
    static MiTable read_csv(std::istream& in, int order_bits);

private:
    int order_bits_;
    MiGridSpec grid_;
    double lo_linear_;
    std::vector<double> mi_bits_;
};

MiTable build_mi_table(const Constellation& c, MiGridSpec grid = {},
                       const MiPrecision& precision = {});

// Read-only bundle of tables keyed by constellation order. Build everything
// up front; concurrent lookups afterwards are safe.
class MiTableSet {
public:
    static MiTableSet with_orders(const std::vector<int>& orders, MiGridSpec grid = {});

    bool has(int order_bits) const { return tables_.count(order_bits) > 0; }
    const MiTable& table(int order_bits) const;
    double mi(int order_bits, double snr_linear) const { return table(order_bits).lookup(snr_linear); }

private:
    std::map<int, MiTable> tables_;
};

}  // namespace ddf
