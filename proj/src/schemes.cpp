#include "ddf/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ddf/diversity.hpp"

namespace ddf {

namespace {

using cvec = std::vector<std::complex<double>>;

constexpr int kMaxOrderBits = 6;  // 64-QAM is the largest constellation used

}  // namespace

const char* scheme_kind_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::direct: return "direct";
        case SchemeKind::monostream: return "monostream";
        case SchemeKind::monostream_adapted_mod: return "monostream_adapted";
        case SchemeKind::patched_monostream: return "patched_monostream";
        case SchemeKind::patched_monostream_mu: return "patched_monostream_mu";
        case SchemeKind::dist_alamouti: return "dist_alamouti";
        case SchemeKind::alamouti_adapted_mod: return "alamouti_adapted";
        case SchemeKind::patched_alamouti: return "patched_alamouti";
        case SchemeKind::patched_golden: return "patched_golden";
        case SchemeKind::patched_silver: return "patched_silver";
    }
    return "?";
}

std::optional<SchemeKind> parse_scheme_kind(const std::string& name) {
    static const std::pair<const char*, SchemeKind> table[] = {
        {"direct", SchemeKind::direct},
        {"monostream", SchemeKind::monostream},
        {"monostream_adapted", SchemeKind::monostream_adapted_mod},
        {"patched_monostream", SchemeKind::patched_monostream},
        {"patched_monostream_mu", SchemeKind::patched_monostream_mu},
        {"dist_alamouti", SchemeKind::dist_alamouti},
        {"alamouti_adapted", SchemeKind::alamouti_adapted_mod},
        {"patched_alamouti", SchemeKind::patched_alamouti},
        {"patched_golden", SchemeKind::patched_golden},
        {"patched_silver", SchemeKind::patched_silver},
    };
    for (const auto& [n, k] : table) {
        if (name == n) return k;
    }
    return std::nullopt;
}

std::string SchemeId::name() const {
    std::string n = scheme_kind_name(kind);
    if (kind == SchemeKind::patched_monostream || kind == SchemeKind::patched_alamouti ||
        kind == SchemeKind::patched_golden || kind == SchemeKind::patched_silver) {
        n += "_" + std::to_string(1 << relay_order_bits) + "qam";
    }
    if (gaussian_alphabet) n += "_gaussian";
    return n;
}

std::vector<int> SchemeId::required_orders(const FrameConfig& frame) const {
    if (gaussian_alphabet) return {};
    std::set<int> orders = {frame.source_order_bits};
    switch (kind) {
        case SchemeKind::monostream_adapted_mod:
        case SchemeKind::alamouti_adapted_mod:
            for (int m = 2; m <= frame.n_max(); ++m) {
                orders.insert(adapted_phase2_order(frame, m));
            }
            break;
        case SchemeKind::patched_monostream:
        case SchemeKind::patched_alamouti:
            orders.insert(relay_order_bits);
            break;
        case SchemeKind::patched_monostream_mu:
            for (int m = frame.source_order_bits + 2; m <= kMaxOrderBits; m += 2) {
                orders.insert(m);
            }
            break;
        default:
            break;
    }
    return {orders.begin(), orders.end()};
}

long long BlockProfile::total_bits() const {
    long long sum = 0;
    for (const Block& b : blocks) sum += b.bits;
    return sum;
}

// ---- Effective channel composition ----------------------------------------

std::vector<std::complex<double>> compose_monostream(const FadingDraw& draw,
                                                     const LinkBudget& budget,
                                                     ActiveLinks active) {
    cvec eff(budget.n_rx, {0.0, 0.0});
    if (active.source) {
        const double amp = std::sqrt(budget.snr_sd());
        for (int i = 0; i < budget.n_rx; ++i) eff[i] += amp * draw.h_sd[i];
    }
    if (active.relay) {
        const double amp = std::sqrt(budget.snr_rd());
        for (int i = 0; i < budget.n_rx; ++i) eff[i] += amp * draw.h_rd[i];
    }
    return eff;
}

std::vector<std::complex<double>> coherent_sum(
    std::span<const std::pair<double, std::span<const std::complex<double>>>> links, int n_rx) {
    cvec eff(n_rx, {0.0, 0.0});
    for (const auto& [snr, h] : links) {
        const double amp = std::sqrt(snr);
        for (int i = 0; i < n_rx; ++i) eff[i] += amp * h[i];
    }
    return eff;
}

double compose_alamouti_snr(const FadingDraw& draw, const LinkBudget& budget) {
    return budget.snr_sd() * norm_sq(draw.h_sd) + budget.snr_rd() * norm_sq(draw.h_rd);
}

// ---- Patching algebra ------------------------------------------------------

PatchCoefficients patch_coefficients(int source_order_bits, int relay_order_bits) {
    if (source_order_bits != 2) {
        throw std::invalid_argument("patch_coefficients: patching requires a QPSK source");
    }
    if (relay_order_bits % source_order_bits != 0 || relay_order_bits < source_order_bits) {
        throw std::invalid_argument("patch_coefficients: m_R must be an integer multiple of m_S");
    }
    const int count = relay_order_bits / source_order_bits;
    const double base = std::sqrt(3.0 / (std::pow(2.0, relay_order_bits) - 1.0));
    PatchCoefficients coeffs;
    coeffs.a.resize(count);
    for (int i = 0; i < count; ++i) coeffs.a[i] = base * std::pow(2.0, i);
    return coeffs;
}

std::complex<double> patch_symbol(std::span<const std::complex<double>> x,
                                  const PatchCoefficients& a, int source_order_bits) {
    if (x.size() != a.count()) {
        throw std::invalid_argument("patch_symbol: need m_R/m_S source symbols");
    }
    const Constellation& source = qam_for_order(source_order_bits);
    std::complex<double> z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!source.contains(x[i], 1e-9)) {
            throw std::domain_error("patch_symbol: input not in the source alphabet");
        }
        z += a.a[i] * x[i];
    }
    return z;
}

std::vector<std::complex<double>> patch_combine_rx(
    std::span<const std::vector<std::complex<double>>> y_phase1,
    std::span<const std::complex<double>> y_phase2, const PatchCoefficients& a) {
    if (y_phase1.size() + 1 != a.count()) {
        throw std::invalid_argument("patch_combine_rx: need m_R/m_S - 1 phase-1 vectors");
    }
    cvec out(y_phase2.size(), {0.0, 0.0});
    for (std::size_t i = 0; i < y_phase1.size(); ++i) {
        if (y_phase1[i].size() != y_phase2.size()) {
            throw std::invalid_argument("patch_combine_rx: antenna count mismatch");
        }
        for (std::size_t r = 0; r < out.size(); ++r) out[r] += a.a[i] * y_phase1[i][r];
    }
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += a.last() * y_phase2[r];
    return out;
}

// ---- Distributed space-time constructions ----------------------------------

std::complex<double> alamouti_relay_symbols(std::span<const std::complex<double>> x_phase2,
                                            int k) {
    if (k < 1) throw std::out_of_range("alamouti_relay_symbols: slot index starts at 1");
    // Odd slot k pairs with slot k+1, even slot k with slot k-1 (1-based).
    const int partner = (k % 2 == 1) ? k + 1 : k - 1;
    if (partner > static_cast<int>(x_phase2.size())) {
        throw std::out_of_range("alamouti_relay_symbols: slot beyond the frame");
    }
    const std::complex<double> x = std::conj(x_phase2[partner - 1]);
    return (k % 2 == 1) ? -x : x;
}

std::pair<std::complex<double>, std::complex<double>> patched_alamouti_encode(
    std::span<const std::complex<double>> x_phase1,
    std::span<const std::complex<double>, 2> x_phase2, const PatchCoefficients& a) {
    const std::size_t t = a.count();
    if (x_phase1.size() != 2 * (t - 1)) {
        throw std::invalid_argument("patched_alamouti_encode: need 2(m_R/m_S - 1) phase-1 symbols");
    }
    std::complex<double> z1 = a.last() * std::conj(x_phase2[1]);
    std::complex<double> z2 = -a.last() * std::conj(x_phase2[0]);
    for (std::size_t k = 0; k + 1 < t; ++k) {
        z1 += a.a[k] * std::conj(x_phase1[k]);
        z2 -= a.a[k] * std::conj(x_phase1[k + t - 1]);
    }
    return {z1, z2};
}

std::pair<std::vector<std::complex<double>>, std::vector<std::complex<double>>>
patched_alamouti_combine(std::span<const std::vector<std::complex<double>>> y_phase1,
                         std::span<const std::vector<std::complex<double>>, 2> y_phase2,
                         const PatchCoefficients& a) {
    const std::size_t t = a.count();
    if (y_phase1.size() != 2 * (t - 1)) {
        throw std::invalid_argument("patched_alamouti_combine: need 2(m_R/m_S - 1) phase-1 vectors");
    }
    const std::size_t n_rx = y_phase2[0].size();
    cvec y1(n_rx, {0.0, 0.0});
    cvec y2(n_rx, {0.0, 0.0});
    for (std::size_t k = 0; k + 1 < t; ++k) {
        if (y_phase1[k].size() != n_rx || y_phase1[k + t - 1].size() != n_rx) {
            throw std::invalid_argument("patched_alamouti_combine: antenna count mismatch");
        }
        for (std::size_t r = 0; r < n_rx; ++r) {
            y1[r] += a.a[k] * y_phase1[k + t - 1][r];
            y2[r] += a.a[k] * y_phase1[k][r];
        }
    }
    for (std::size_t r = 0; r < n_rx; ++r) {
        y1[r] += a.last() * y_phase2[0][r];
        y2[r] += a.last() * y_phase2[1][r];
    }
    return {y1, y2};
}

std::pair<std::complex<double>, std::complex<double>> patched_dstbc_encode(
    DstbcCode code, std::complex<double> z1, std::complex<double> z2,
    std::complex<double> x21, std::complex<double> x22) {
    using namespace std::complex_literals;
    if (code == DstbcCode::golden) {
        const double alpha = (1.0 + std::sqrt(5.0)) / 2.0;
        const double alpha_bar = (1.0 - std::sqrt(5.0)) / 2.0;
        const std::complex<double> phi = 1.0 + 1.0i - 1.0i * alpha;
        const std::complex<double> phi_bar = 1.0 + 1.0i - 1.0i * alpha_bar;
        const std::complex<double> ratio = phi_bar / phi;
        return {1.0i * ratio * (x22 + alpha_bar * z2), ratio * (x21 + alpha_bar * z1)};
    }
    if (code == DstbcCode::silver) {
        const double s7 = std::sqrt(7.0);
        const std::complex<double> zr1 =
            -std::conj(x22) - ((1.0 - 2.0i) * std::conj(z1) + (1.0 + 1.0i) * std::conj(z2)) / s7;
        const std::complex<double> zr2 =
            std::conj(x21) + ((-1.0 + 1.0i) * std::conj(z1) + (1.0 + 2.0i) * std::conj(z2)) / s7;
        return {zr1, zr2};
    }
    throw std::invalid_argument("patched_dstbc_encode: unknown code");
}

DstbcCombineResult patched_dstbc_combine(DstbcCode code, const RxMatrix& y1_tilde,
                                         const RxMatrix& y2) {
    using namespace std::complex_literals;
    const std::size_t n_rx = y1_tilde.col1.size();
    if (y1_tilde.col2.size() != n_rx || y2.col1.size() != n_rx || y2.col2.size() != n_rx) {
        throw std::invalid_argument("patched_dstbc_combine: column size mismatch");
    }
    DstbcCombineResult res;
    res.c = 1.0 / std::sqrt(2.0);
    res.y.col1.resize(n_rx);
    res.y.col2.resize(n_rx);
    if (code == DstbcCode::golden) {
        const double alpha = (1.0 + std::sqrt(5.0)) / 2.0;
        const std::complex<double> phi = 1.0 + 1.0i - 1.0i * alpha;
        // |phi|^2 (1 + alpha^2) = 5, so the scaling keeps unit noise variance.
        const std::complex<double> gain = phi / std::sqrt(std::abs(std::norm(phi) * (1.0 + alpha * alpha)));
        for (std::size_t r = 0; r < n_rx; ++r) {
            res.y.col1[r] = gain * (alpha * y1_tilde.col1[r] + y2.col1[r]);
            res.y.col2[r] = gain * (alpha * y1_tilde.col2[r] + y2.col2[r]);
        }
    } else if (code == DstbcCode::silver) {
        const double s7 = std::sqrt(7.0);
        // Y = Y1_tilde / sqrt(7) * [[1+i, -1+2i], [-(1+2i), -1+i]] + Y2.
        const std::complex<double> g11 = (1.0 + 1.0i) / s7;
        const std::complex<double> g12 = (-1.0 + 2.0i) / s7;
        const std::complex<double> g21 = -(1.0 + 2.0i) / s7;
        const std::complex<double> g22 = (-1.0 + 1.0i) / s7;
        for (std::size_t r = 0; r < n_rx; ++r) {
            res.y.col1[r] = y1_tilde.col1[r] * g11 + y1_tilde.col2[r] * g21 + y2.col1[r];
            res.y.col2[r] = y1_tilde.col1[r] * g12 + y1_tilde.col2[r] * g22 + y2.col2[r];
        }
    } else {
        throw std::invalid_argument("patched_dstbc_combine: unknown code");
    }
    return res;
}

// ---- Per-realization block decomposition -----------------------------------

int adapted_phase2_order(const FrameConfig& frame, int first_relay_subframe) {
    const long long phase2_symbols =
        frame.total_symbols() - frame.symbols_through(first_relay_subframe - 1);
    int order = frame.source_order_bits;
    while (order < kMaxOrderBits &&
           order * phase2_symbols < frame.info_bits) {
        order += 2;
    }
    return order;
}

namespace {

BlockProfile direct_profile(const FrameConfig& frame, int horizon, const FadingDraw& draw,
                            const LinkBudget& budget) {
    BlockProfile profile;
    profile.blocks.push_back({frame.bits_through(horizon), frame.source_order_bits,
                              post_mrc_snr(draw.h_sd, budget.snr_sd())});
    return profile;
}

double coherent_sum_snr(const FadingDraw& draw, const LinkBudget& budget, double relay_amp_scale) {
    const double amp_s = std::sqrt(budget.snr_sd());
    const double amp_r = relay_amp_scale * std::sqrt(budget.snr_rd());
    double sum = 0.0;
    for (int i = 0; i < budget.n_rx; ++i) {
        sum += std::norm(amp_s * draw.h_sd[i] + amp_r * draw.h_rd[i]);
    }
    return sum;
}

}  // namespace

BlockProfile block_profile(const SchemeId& scheme, const FrameConfig& frame,
                           std::optional<int> first_relay_subframe, int horizon,
                           const FadingDraw& draw, const LinkBudget& budget) {
    if (horizon < 1 || horizon > frame.n_max()) {
        throw std::invalid_argument("block_profile: horizon out of range");
    }
    if (!scheme.outage_supported()) {
        throw std::invalid_argument(
            "block_profile: " + std::string(scheme_kind_name(scheme.kind)) +
            " is verified algebraically only and has no outage profile");
    }
    if (first_relay_subframe &&
        (*first_relay_subframe < 2 || *first_relay_subframe > horizon)) {
        throw std::invalid_argument("block_profile: relay activation outside [2, horizon]");
    }

    const int m_s = frame.source_order_bits;
    const double direct_snr = post_mrc_snr(draw.h_sd, budget.snr_sd());

    // A relay that is silent, or whose data link carries zero power, is
    // unobservable at the destination: every scheme reduces to Direct.
    if (!first_relay_subframe || scheme.kind == SchemeKind::direct ||
        budget.relay_data_link_off()) {
        return direct_profile(frame, horizon, draw, budget);
    }

    const int m_tx = *first_relay_subframe;
    const long long phase1_bits = frame.bits_through(m_tx - 1);
    const long long phase2_symbols =
        frame.symbols_through(horizon) - frame.symbols_through(m_tx - 1);
    const long long phase2_bits = phase2_symbols * m_s;
    const long long phase2_symbols_full =
        frame.total_symbols() - frame.symbols_through(m_tx - 1);

    BlockProfile profile;
    switch (scheme.kind) {
        case SchemeKind::monostream: {
            profile.blocks.push_back({phase1_bits, m_s, direct_snr});
            profile.blocks.push_back({phase2_bits, m_s, coherent_sum_snr(draw, budget, 1.0)});
            break;
        }
        case SchemeKind::monostream_adapted_mod:
        case SchemeKind::alamouti_adapted_mod: {
            // Both nodes switch to the adapted order for the whole second
            // phase, chosen once at activation from the full frame remainder.
            const int order = adapted_phase2_order(frame, m_tx);
            const double snr = scheme.kind == SchemeKind::monostream_adapted_mod
                                   ? coherent_sum_snr(draw, budget, 1.0)
                                   : compose_alamouti_snr(draw, budget);
            profile.blocks.push_back({phase1_bits, m_s, direct_snr});
            profile.blocks.push_back({phase2_symbols * order, order, snr});
            break;
        }
        case SchemeKind::patched_monostream:
        case SchemeKind::patched_monostream_mu: {
            int m_r = scheme.relay_order_bits;
            long long slots = phase2_symbols_full;  // full patching by default
            if (scheme.kind == SchemeKind::patched_monostream_mu) {
                const auto mu = minimal_use_params(frame.info_bits, phase1_bits,
                                                   phase2_symbols_full * m_s, m_s);
                if (mu) {
                    m_r = mu->first;
                    slots = mu->second;
                } else {
                    m_r = kMaxOrderBits;  // best effort: full 64-QAM patching
                }
            } else if (scheme.patched_slots) {
                if (*scheme.patched_slots > phase2_symbols_full || *scheme.patched_slots < 0) {
                    throw std::invalid_argument(
                        "block_profile: patched slot count exceeds the second phase");
                }
                slots = *scheme.patched_slots;
            }
            if (m_r == m_s || slots == 0) {
                // Degenerate patching is plain Monostream.
                profile.blocks.push_back({phase1_bits, m_s, direct_snr});
                profile.blocks.push_back({phase2_bits, m_s, coherent_sum_snr(draw, budget, 1.0)});
                break;
            }
            const PatchCoefficients a = patch_coefficients(m_s, m_r);
            const long long per_slot = static_cast<long long>(a.count()) - 1;
            long long slots_now = std::min(slots, phase2_symbols);
            // Cannot patch more phase-1 symbols than were transmitted.
            slots_now = std::min(slots_now, (phase1_bits / m_s) / per_slot);
            const long long b1 = phase1_bits - slots_now * per_slot * m_s;
            const long long b2 = slots_now * m_r;
            const long long b3 = phase2_bits - slots_now * m_s;
            profile.blocks.push_back({b1, m_s, direct_snr});
            profile.blocks.push_back({b2, m_r, coherent_sum_snr(draw, budget, a.last())});
            profile.blocks.push_back({b3, m_s, coherent_sum_snr(draw, budget, 1.0)});
            break;
        }
        case SchemeKind::dist_alamouti: {
            profile.blocks.push_back({phase1_bits, m_s, direct_snr});
            profile.blocks.push_back({phase2_bits, m_s, compose_alamouti_snr(draw, budget)});
            break;
        }
        case SchemeKind::patched_alamouti: {
            const int m_r = scheme.relay_order_bits;
            const PatchCoefficients a = patch_coefficients(m_s, m_r);
            const long long per_slot = static_cast<long long>(a.count()) - 1;
            // Every phase-2 slot is patched while phase-1 symbols last.
            long long patched = phase2_symbols;
            if (per_slot > 0) patched = std::min(patched, (phase1_bits / m_s) / per_slot);
            const long long plain = phase2_symbols - patched;
            const double a_t = a.last();
            const double patched_snr = budget.snr_sd() * norm_sq(draw.h_sd) +
                                       a_t * a_t * budget.snr_rd() * norm_sq(draw.h_rd);
            profile.blocks.push_back(
                {phase1_bits - patched * per_slot * m_s, m_s, direct_snr});
            profile.blocks.push_back({patched * m_r, m_r, patched_snr});
            if (plain > 0) {
                profile.blocks.push_back({plain * m_s, m_s, compose_alamouti_snr(draw, budget)});
            }
            break;
        }
        default:
            throw std::invalid_argument("block_profile: unsupported scheme");
    }

    // Zero-length segments carry nothing; drop them.
    std::erase_if(profile.blocks, [](const Block& b) { return b.bits == 0; });
    return profile;
}

}  // namespace ddf
