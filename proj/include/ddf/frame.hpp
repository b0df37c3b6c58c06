// frame.hpp - HARQ frame segmentation: sub-frame lengths and data rates.

#pragma once

#include <vector>

namespace ddf {

// A codeword of info_bits information bits split into sub-frames of
// subframe_symbols[i] channel uses, modulated with a 2^source_order_bits QAM
// by the source. The data rate after n sub-frames is info_bits over the
// symbols sent so far.
struct FrameConfig {
    long long info_bits = 0;                    // K
    int source_order_bits = 2;                  // QPSK source by default
    std::vector<long long> subframe_symbols;    // T_1 .. T_Nmax

    int n_max() const { return static_cast<int>(subframe_symbols.size()); }

    long long symbols_through(int n) const;     // sum of T_i, i <= n
    long long total_symbols() const { return symbols_through(n_max()); }
    long long bits_through(int n) const { return symbols_through(n) * source_order_bits; }
    long long total_bits() const { return bits_through(n_max()); }

    double coding_rate() const;                 // K / total coded bits

    // Throws std::invalid_argument when the segmentation is unusable.
    void validate() const;

    // Open-loop layout used throughout the experiments: N_max = 7, the first
    // sub-frame three times longer than the others and carrying exactly the
    // information bits (T_1 = K / m_S). K must be divisible by 6.
    static FrameConfig open_loop_7sf(long long info_bits, int source_order_bits = 2);

    // Closed-loop HARQ layout: N_max = 3, first sub-frame four times longer.
    // first_rate is the coding rate at the end of the first sub-frame, so
    // K = first_rate * t1 * m_S (must come out integral).
    static FrameConfig closed_loop_3sf(double first_rate, long long t1 = 40,
                                       int source_order_bits = 2);
};

// R_n = K / (symbols through n), in bits per channel use. n in [1, N_max].
double rate_after_n(const FrameConfig& frame, int n);

}  // namespace ddf
