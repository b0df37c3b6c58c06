// diversity.hpp - Matryoshka SNR channels, the macro-diversity bound, and the
// micro-diversity / modulation-adaptation predicates.
//
// Convention note: analysis functions here label relay timing by
// decode_subframe, the sub-frame after which the relay finished decoding (the
// labeling used for the contour figures); the relay transmits from
// decode_subframe + 1 on. The protocol engine instead works with the first
// transmit sub-frame; first_tx_from_decode converts.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ddf/frame.hpp"
#include "ddf/schemes.hpp"

namespace ddf {

inline int first_tx_from_decode(int decode_subframe) { return decode_subframe + 1; }

// Nested block channel: diversity_orders strictly decreasing, block_bits[i]
// the number of coded bits riding on diversity order diversity_orders[i].
struct MatryoshkaChannel {
    std::vector<int> diversity_orders;
    std::vector<long long> block_bits;

    long long total_bits() const;
    // Drops zero-bit blocks; throws if orders are not strictly decreasing.
    void normalize();
};

// Upper bound on the diversity order after decoding a rate coding_rate code:
// returns D_i for the unique i with sum_{k<i} L_k < R_c * sum L <= sum_{k<=i} L_k.
int matryoshka_bound(MatryoshkaChannel ch, double coding_rate);

// Equivalent long-term SNR channel of a (multi-relay) Monostream DDF
// transmission. decode_subframes lists, per relay, the sub-frame after which
// it decoded (ascending); relays that decode at or after the horizon never
// transmit and are dropped.
MatryoshkaChannel monostream_snr_channel(const FrameConfig& frame,
                                         std::vector<int> decode_subframes, int horizon);

// Bit counts (L'_1, L'_2) after patching p time-slots of the second phase.
std::pair<long long, long long> patched_blocks(long long phase1_bits, long long phase2_bits,
                                               long long patched_slots, int source_order_bits,
                                               int relay_order_bits);

enum class DstbcFamily { alamouti, golden_silver };

// Bit counts (L'_1, L'_2) of the patched distributed STBC schemes.
std::pair<long long, long long> dstbc_blocks(DstbcFamily family, long long phase1_bits,
                                             long long phase2_bits, int source_order_bits,
                                             int relay_order_bits);

// Minimal-Use parameters: smallest (m_R, p), ordered by m_R then p, making the
// patched top block carry at least info_bits. (m_S, 0) when no patching is
// needed; nullopt when even full 64-QAM patching falls short.
std::optional<std::pair<int, long long>> minimal_use_params(long long info_bits,
                                                            long long phase1_bits,
                                                            long long phase2_bits,
                                                            int source_order_bits);

// (L1, L2) decomposition seen by `scheme` at full horizon, with adapted or
// patched sizes already applied, plus the total coded bits (for the effective
// coding rate). decode_subframe == nullopt or >= N_max means no relay phase.
struct SchemeBlocks {
    long long top_bits = 0;     // block of diversity 2 (0 when single-block)
    long long bottom_bits = 0;  // block of diversity 1
    long long total_bits = 0;
};

SchemeBlocks scheme_blocks(const SchemeId& scheme, const FrameConfig& frame,
                           std::optional<int> decode_subframe);

// Long-term SNR Matryoshka channel of the scheme (single relay).
MatryoshkaChannel scheme_snr_channel(const SchemeId& scheme, const FrameConfig& frame,
                                     std::optional<int> decode_subframe);

// Full macro diversity: the top long-term SNR block carries at least K bits.
bool full_macro(const SchemeId& scheme, const FrameConfig& frame,
                std::optional<int> decode_subframe);

// Full micro diversity: Monostream-family needs every block to carry at least
// K bits; the Alamouti/DSTBC family only needs the top block to.
bool full_micro(const SchemeId& scheme, const FrameConfig& frame,
                std::optional<int> decode_subframe, int n_rx);

// Smallest even relay order (<= 6 bits) restoring full diversity by
// modulation adaptation; nullopt when infeasible.
std::optional<int> min_mr_for_full_diversity(SchemeKind kind, long long info_bits,
                                             long long phase2_bits, int source_order_bits);

}  // namespace ddf
