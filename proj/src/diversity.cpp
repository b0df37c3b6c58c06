#include "ddf/diversity.hpp"

#include <algorithm>
#include <stdexcept>

namespace ddf {

namespace {

constexpr int kMaxOrderBits = 6;

long long ceil_div(long long num, long long den) { return (num + den - 1) / den; }

}  // namespace

long long MatryoshkaChannel::total_bits() const {
    long long sum = 0;
    for (long long l : block_bits) sum += l;
    return sum;
}

void MatryoshkaChannel::normalize() {
    if (diversity_orders.size() != block_bits.size()) {
        throw std::invalid_argument("matryoshka: D and L must have the same length");
    }
    std::vector<int> d;
    std::vector<long long> l;
    for (std::size_t i = 0; i < block_bits.size(); ++i) {
        if (block_bits[i] < 0) throw std::invalid_argument("matryoshka: negative block size");
        if (block_bits[i] == 0) continue;
        d.push_back(diversity_orders[i]);
        l.push_back(block_bits[i]);
    }
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] >= d[i - 1]) {
            throw std::invalid_argument("matryoshka: diversity orders must be strictly decreasing");
        }
    }
    diversity_orders = std::move(d);
    block_bits = std::move(l);
}

int matryoshka_bound(MatryoshkaChannel ch, double coding_rate) {
    if (!(coding_rate > 0.0) || coding_rate > 1.0) {
        throw std::invalid_argument("matryoshka_bound: coding rate must be in (0, 1]");
    }
    ch.normalize();
    if (ch.block_bits.empty()) {
        throw std::invalid_argument("matryoshka_bound: all blocks are empty");
    }
    const double threshold = coding_rate * static_cast<double>(ch.total_bits());
    // Block sizes are integers; tolerate rounding in coding_rate itself so a
    // boundary like R_c * sum(L) == L_1 resolves to the higher order exactly.
    const double eps = 1e-9 * std::max(1.0, threshold);
    double prefix = 0.0;
    for (std::size_t i = 0; i < ch.block_bits.size(); ++i) {
        prefix += static_cast<double>(ch.block_bits[i]);
        if (threshold <= prefix + eps) return ch.diversity_orders[i];
    }
    return ch.diversity_orders.back();  // coding_rate == 1 boundary
}

MatryoshkaChannel monostream_snr_channel(const FrameConfig& frame,
                                         std::vector<int> decode_subframes, int horizon) {
    if (horizon < 1 || horizon > frame.n_max()) {
        throw std::invalid_argument("monostream_snr_channel: horizon out of range");
    }
    std::sort(decode_subframes.begin(), decode_subframes.end());
    // Relays that decode at or after the horizon never get to transmit.
    std::erase_if(decode_subframes, [&](int m) { return first_tx_from_decode(m) > horizon; });

    // Phase boundaries: phase i runs until the next relay activation. Bits
    // are listed from the highest-diversity block (all transmitters active,
    // i.e. the last phase) down to the source-only phase.
    const int n_active = static_cast<int>(decode_subframes.size());
    MatryoshkaChannel ch;
    long long prev_end_symbols = frame.symbols_through(horizon);
    for (int i = n_active - 1; i >= 0; --i) {
        const long long start_symbols =
            frame.symbols_through(first_tx_from_decode(decode_subframes[i]) - 1);
        ch.diversity_orders.push_back(i + 2);
        ch.block_bits.push_back((prev_end_symbols - start_symbols) * frame.source_order_bits);
        prev_end_symbols = start_symbols;
    }
    ch.diversity_orders.push_back(1);
    ch.block_bits.push_back(prev_end_symbols * frame.source_order_bits);
    ch.normalize();
    return ch;
}

std::pair<long long, long long> patched_blocks(long long phase1_bits, long long phase2_bits,
                                               long long patched_slots, int source_order_bits,
                                               int relay_order_bits) {
    if (patched_slots < 0 || patched_slots * source_order_bits > phase2_bits) {
        throw std::invalid_argument("patched_blocks: patched slots exceed the second phase");
    }
    const long long l2p = patched_slots * relay_order_bits +
                          std::max<long long>(phase2_bits - patched_slots * source_order_bits, 0);
    const long long l1p = std::max<long long>(
        phase1_bits - patched_slots * (relay_order_bits - source_order_bits), 0);
    return {l1p, l2p};
}

std::pair<long long, long long> dstbc_blocks(DstbcFamily family, long long phase1_bits,
                                             long long phase2_bits, int source_order_bits,
                                             int relay_order_bits) {
    if (relay_order_bits % source_order_bits != 0 || relay_order_bits < source_order_bits) {
        throw std::invalid_argument("dstbc_blocks: m_R must be an integer multiple of m_S");
    }
    const long long ratio = relay_order_bits / source_order_bits;
    if (family == DstbcFamily::alamouti) {
        const long long l1p = std::max<long long>(phase1_bits - phase2_bits * (ratio - 1), 0);
        const long long l2p = std::min(phase1_bits + phase2_bits, phase2_bits * ratio);
        return {l1p, l2p};
    }
    // Golden/Silver: each second-phase slot carries m_R + m_S combined bits.
    const long long consumed = (phase2_bits / source_order_bits) * relay_order_bits;
    const long long l1p = std::max<long long>(phase1_bits - consumed, 0);
    const long long l2p = std::min(phase1_bits + phase2_bits,
                                   (phase2_bits / source_order_bits) *
                                       static_cast<long long>(relay_order_bits + source_order_bits));
    return {l1p, l2p};
}

std::optional<std::pair<int, long long>> minimal_use_params(long long info_bits,
                                                            long long phase1_bits,
                                                            long long phase2_bits,
                                                            int source_order_bits) {
    if (phase2_bits >= info_bits) return std::make_pair(source_order_bits, 0LL);
    if (phase2_bits <= 0) return std::nullopt;
    const long long phase2_slots = phase2_bits / source_order_bits;
    for (int m_r = source_order_bits * 2; m_r <= kMaxOrderBits; m_r += source_order_bits) {
        // With p <= phase-2 slots, L'_2 = phase2_bits + p (m_R - m_S).
        const long long p = ceil_div(info_bits - phase2_bits, m_r - source_order_bits);
        const long long per_slot = m_r / source_order_bits - 1;
        if (p <= phase2_slots && p * per_slot * source_order_bits <= phase1_bits) {
            return std::make_pair(m_r, p);
        }
    }
    return std::nullopt;
}

SchemeBlocks scheme_blocks(const SchemeId& scheme, const FrameConfig& frame,
                           std::optional<int> decode_subframe) {
    SchemeBlocks out;
    const int m_s = frame.source_order_bits;
    const bool relaying = decode_subframe && first_tx_from_decode(*decode_subframe) <= frame.n_max();
    if (!relaying || scheme.kind == SchemeKind::direct) {
        out.top_bits = 0;
        out.bottom_bits = frame.total_bits();
        out.total_bits = frame.total_bits();
        return out;
    }
    const int m_tx = first_tx_from_decode(*decode_subframe);
    const long long l1 = frame.bits_through(m_tx - 1);
    const long long phase2_symbols = frame.total_symbols() - frame.symbols_through(m_tx - 1);
    const long long l2 = phase2_symbols * m_s;

    switch (scheme.kind) {
        case SchemeKind::monostream:
        case SchemeKind::dist_alamouti:
            out = {l2, l1, l1 + l2};
            break;
        case SchemeKind::monostream_adapted_mod:
        case SchemeKind::alamouti_adapted_mod: {
            const long long l2a = phase2_symbols * adapted_phase2_order(frame, m_tx);
            out = {l2a, l1, l1 + l2a};
            break;
        }
        case SchemeKind::patched_monostream: {
            const long long slots = scheme.patched_slots
                                        ? std::min(*scheme.patched_slots, phase2_symbols)
                                        : phase2_symbols;
            const auto [l1p, l2p] = patched_blocks(l1, l2, slots, m_s, scheme.relay_order_bits);
            out = {l2p, l1p, l1p + l2p};
            break;
        }
        case SchemeKind::patched_monostream_mu: {
            const auto mu = minimal_use_params(frame.info_bits, l1, l2, m_s);
            const int m_r = mu ? mu->first : kMaxOrderBits;
            const long long slots = mu ? mu->second : phase2_symbols;
            const auto [l1p, l2p] = patched_blocks(l1, l2, slots, m_s, m_r);
            out = {l2p, l1p, l1p + l2p};
            break;
        }
        case SchemeKind::patched_alamouti: {
            const auto [l1p, l2p] =
                dstbc_blocks(DstbcFamily::alamouti, l1, l2, m_s, scheme.relay_order_bits);
            out = {l2p, l1p, l1p + l2p};
            break;
        }
        case SchemeKind::patched_golden:
        case SchemeKind::patched_silver: {
            const auto [l1p, l2p] =
                dstbc_blocks(DstbcFamily::golden_silver, l1, l2, m_s, scheme.relay_order_bits);
            out = {l2p, l1p, l1p + l2p};
            break;
        }
        default:
            throw std::invalid_argument("scheme_blocks: unsupported scheme");
    }
    return out;
}

MatryoshkaChannel scheme_snr_channel(const SchemeId& scheme, const FrameConfig& frame,
                                     std::optional<int> decode_subframe) {
    const SchemeBlocks blocks = scheme_blocks(scheme, frame, decode_subframe);
    MatryoshkaChannel ch;
    if (blocks.top_bits > 0) {
        ch.diversity_orders = {2, 1};
        ch.block_bits = {blocks.top_bits, blocks.bottom_bits};
    } else {
        ch.diversity_orders = {1};
        ch.block_bits = {blocks.bottom_bits};
    }
    ch.normalize();
    return ch;
}

bool full_macro(const SchemeId& scheme, const FrameConfig& frame,
                std::optional<int> decode_subframe) {
    return scheme_blocks(scheme, frame, decode_subframe).top_bits >= frame.info_bits;
}

bool full_micro(const SchemeId& scheme, const FrameConfig& frame,
                std::optional<int> decode_subframe, int n_rx) {
    (void)n_rx;  // the per-block conditions do not depend on the antenna count
    const SchemeBlocks blocks = scheme_blocks(scheme, frame, decode_subframe);
    switch (scheme.kind) {
        case SchemeKind::direct:
            return false;
        case SchemeKind::monostream:
        case SchemeKind::monostream_adapted_mod:
        case SchemeKind::patched_monostream:
        case SchemeKind::patched_monostream_mu:
            // Every block of the two-block fading channel needs K bits.
            return blocks.top_bits >= frame.info_bits && blocks.bottom_bits >= frame.info_bits;
        case SchemeKind::dist_alamouti:
        case SchemeKind::alamouti_adapted_mod:
        case SchemeKind::patched_alamouti:
        case SchemeKind::patched_golden:
        case SchemeKind::patched_silver:
            // Alamouti-family: the top block alone suffices, and full micro
            // implies full macro on these Matryoshka fading channels.
            return blocks.top_bits >= frame.info_bits;
        default:
            return false;
    }
}

std::optional<int> min_mr_for_full_diversity(SchemeKind kind, long long info_bits,
                                             long long phase2_bits, int source_order_bits) {
    if (phase2_bits <= 0) return std::nullopt;
    double threshold = 0.0;
    switch (kind) {
        case SchemeKind::patched_alamouti:
        case SchemeKind::patched_monostream:
        case SchemeKind::patched_monostream_mu:
            // m_R >= K m_S / L_2
            threshold = static_cast<double>(info_bits) * source_order_bits /
                        static_cast<double>(phase2_bits);
            break;
        case SchemeKind::patched_golden:
        case SchemeKind::patched_silver:
            // m_R >= m_S (K / L_2 - 1)
            threshold = source_order_bits * (static_cast<double>(info_bits) /
                                                 static_cast<double>(phase2_bits) -
                                             1.0);
            break;
        default:
            throw std::invalid_argument("min_mr_for_full_diversity: not an adaptive patched scheme");
    }
    for (int m_r = source_order_bits; m_r <= kMaxOrderBits; m_r += 2) {
        if (static_cast<double>(m_r) >= threshold) return m_r;
    }
    return std::nullopt;
}

}  // namespace ddf
