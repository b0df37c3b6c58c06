#include "ddf/mi.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ddf/rng.hpp"

namespace ddf {

namespace {

// Nodes of the physicists' Hermite polynomial H_n via Newton iteration with
// the three-term recurrence; weights from the standard derivative formula.
GaussHermite compute_gauss_hermite(int n) {
    GaussHermite rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    const int mid = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < mid; ++i) {
        // Initial guesses (Numerical Recipes).
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[i - 2];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.nodes[i] = z;
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    // Largest node first is irrelevant; keep ascending order.
    std::reverse(rule.nodes.begin(), rule.nodes.end());
    return rule;
}

// log2 of sum over the alphabet of exp(-(|d|^2 + 2 Re(conj(d) n))), the
// likelihood-ratio sum that appears inside the MI expectation. Differences
// d = sqrt(snr) (x - x') are precomputed by the caller.
struct PairTerm {
    double re;   // Re(d)
    double im;   // Im(d)
    double e;    // |d|^2
};

double log2_lr_sum(const std::vector<PairTerm>& terms, double n_re, double n_im) {
    // Shift by the largest exponent for stability at high SNR.
    double max_exp = -std::numeric_limits<double>::infinity();
    for (const PairTerm& t : terms) {
        const double ex = -(t.e + 2.0 * (t.re * n_re + t.im * n_im));
        if (ex > max_exp) max_exp = ex;
    }
    double sum = 0.0;
    for (const PairTerm& t : terms) {
        const double ex = -(t.e + 2.0 * (t.re * n_re + t.im * n_im));
        sum += std::exp(ex - max_exp);
    }
    return (max_exp + std::log(sum)) * std::numbers::log2e;
}

std::vector<std::vector<PairTerm>> pair_terms(const Constellation& c, double amp) {
    const std::size_t m = c.size();
    std::vector<std::vector<PairTerm>> all(m, std::vector<PairTerm>(m));
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t xp = 0; xp < m; ++xp) {
            const cplx d = amp * (c.point(x) - c.point(xp));
            all[x][xp] = {d.real(), d.imag(), std::norm(d)};
        }
    }
    return all;
}

// Strict upper cap: I(X;Y) < m for any finite SNR, but the quadrature
// saturates to exactly m in double precision once the true gap underflows.
double clamp_mi(double value, int order_bits) {
    const double m = static_cast<double>(order_bits);
    const double cap = m * (1.0 - 1e-12);
    return std::min(cap, std::max(0.0, value));
}

}  // namespace

const GaussHermite& GaussHermite::of_order(int n) {
    static std::mutex mu;
    static std::map<int, GaussHermite> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_hermite(n)).first;
    return it->second;
}

double gaussian_mi(double snr_linear) {
    if (!(snr_linear >= 0.0)) throw std::domain_error("gaussian_mi: snr must be >= 0");
    return std::log2(1.0 + snr_linear);
}

double mi_estimate(const Constellation& c, double snr_linear, MiMethod method,
                   const MiPrecision& precision) {
    if (!std::isfinite(snr_linear) || snr_linear < 0.0) {
        throw std::domain_error("mi_estimate: snr must be finite and >= 0");
    }
    const int m = c.order_bits();
    if (snr_linear == 0.0) return 0.0;

    const auto terms = pair_terms(c, std::sqrt(snr_linear));
    const std::size_t alphabet = c.size();
    double acc = 0.0;

    if (method == MiMethod::quadrature) {
        if (precision.quad_order < 8) {
            throw std::invalid_argument("mi_estimate: quadrature order must be >= 8");
        }
        // Noise has variance 0.5 per real dimension, so with the e^{-t^2}
        // weight the substitution n = t gives weight w_i w_j / pi.
        const GaussHermite& gh = GaussHermite::of_order(precision.quad_order);
        const double inv_pi = 1.0 / std::numbers::pi;
        for (std::size_t x = 0; x < alphabet; ++x) {
            double ex = 0.0;
            for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < gh.nodes.size(); ++j) {
                    row += gh.weights[j] * log2_lr_sum(terms[x], gh.nodes[i], gh.nodes[j]);
                }
                ex += gh.weights[i] * row;
            }
            acc += ex * inv_pi;
        }
    } else {
        if (precision.mc_samples < 10000) {
            throw std::invalid_argument("mi_estimate: mc_samples must be >= 1e4");
        }
        TrialRng rng(precision.mc_seed, 0);
        for (long long s = 0; s < precision.mc_samples; ++s) {
            double n_re, n_im;
            rng.next_normal_pair(n_re, n_im);
            // Unit total variance: 0.5 per real dimension.
            n_re *= 0.7071067811865475244;
            n_im *= 0.7071067811865475244;
            for (std::size_t x = 0; x < alphabet; ++x) {
                acc += log2_lr_sum(terms[x], n_re, n_im);
            }
        }
        acc /= static_cast<double>(precision.mc_samples);
    }

    const double value = m - acc / static_cast<double>(alphabet);
    return clamp_mi(value, m);
}

MiTable::MiTable(int order_bits, MiGridSpec grid, std::vector<double> mi_bits)
    : order_bits_(order_bits), grid_(grid), mi_bits_(std::move(mi_bits)) {
    if (mi_bits_.empty()) throw std::invalid_argument("MiTable: empty table");
    lo_linear_ = std::pow(10.0, grid_.lo_db / 10.0);
}

double MiTable::lookup(double snr_linear) const {
    if (!(snr_linear >= 0.0)) throw std::domain_error("mi_lookup: snr must be >= 0");
    if (snr_linear == 0.0) return 0.0;
    if (snr_linear <= lo_linear_) {
        // Linear in SNR between (0, 0) and the lowest grid entry.
        return mi_bits_.front() * (snr_linear / lo_linear_);
    }
    const double db = 10.0 * std::log10(snr_linear);
    const double pos = (db - grid_.lo_db) / grid_.step_db;
    if (pos >= static_cast<double>(mi_bits_.size() - 1)) return mi_bits_.back();
    const std::size_t j = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(j);
    return mi_bits_[j] + frac * (mi_bits_[j + 1] - mi_bits_[j]);
}

void MiTable::write_csv(std::ostream& out) const {
    out << "snr_db,mi_bits\n";
    char buf[64];
    for (std::size_t j = 0; j < mi_bits_.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.4f,%.12g\n", grid_db(j), mi_bits_[j]);
        out << buf;
    }
}

MiTable MiTable::read_csv(std::istream& in, int order_bits) {
    std::string line;
    std::vector<double> db;
    std::vector<double> mi;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("snr_db", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("mi csv: bad row: " + line);
        db.push_back(std::stod(line.substr(0, comma)));
        mi.push_back(std::stod(line.substr(comma + 1)));
    }
    if (db.size() < 2) throw std::invalid_argument("mi csv: need at least two rows");
    MiGridSpec grid;
    grid.lo_db = db.front();
    grid.hi_db = db.back();
    grid.step_db = (db.back() - db.front()) / static_cast<double>(db.size() - 1);
    return MiTable(order_bits, grid, std::move(mi));
}

MiTable build_mi_table(const Constellation& c, MiGridSpec grid, const MiPrecision& precision) {
    if (grid.step_db <= 0.0 || grid.step_db > 0.25 + 1e-12) {
        throw std::invalid_argument("build_mi_table: step must be in (0, 0.25] dB");
    }
    if (grid.lo_db > -20.0 || grid.hi_db < 40.0) {
        throw std::invalid_argument("build_mi_table: grid must cover [-20, 40] dB");
    }
    const std::size_t n = static_cast<std::size_t>(
                              std::llround((grid.hi_db - grid.lo_db) / grid.step_db)) + 1;
    std::vector<double> mi(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double db = grid.lo_db + grid.step_db * static_cast<double>(j);
        mi[j] = mi_estimate(c, std::pow(10.0, db / 10.0), MiMethod::quadrature, precision);
    }
    // Quadrature noise at the saturation plateau can be a few ulp; make the
    // tabulated curve exactly non-decreasing.
    for (std::size_t j = 1; j < n; ++j) mi[j] = std::max(mi[j], mi[j - 1]);
    return MiTable(c.order_bits(), grid, std::move(mi));
}

MiTableSet MiTableSet::with_orders(const std::vector<int>& orders, MiGridSpec grid) {
    MiTableSet set;
    for (int order : orders) {
        if (set.tables_.count(order)) continue;
        set.tables_.emplace(order, build_mi_table(qam_for_order(order), grid));
    }
    return set;
}

const MiTable& MiTableSet::table(int order_bits) const {
    auto it = tables_.find(order_bits);
    if (it == tables_.end()) {
        throw std::invalid_argument("MiTableSet: no table for order " + std::to_string(order_bits));
    }
    return it->second;
}

}  // namespace ddf
