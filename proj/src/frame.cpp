#include "ddf/frame.hpp"

#include <cmath>
#include <stdexcept>

namespace ddf {

long long FrameConfig::symbols_through(int n) const {
    long long sum = 0;
    for (int i = 0; i < n && i < n_max(); ++i) sum += subframe_symbols[i];
    return sum;
}

double FrameConfig::coding_rate() const {
    return static_cast<double>(info_bits) / static_cast<double>(total_bits());
}

void FrameConfig::validate() const {
    if (info_bits <= 0) throw std::invalid_argument("frame: info_bits must be > 0");
    if (source_order_bits < 1) throw std::invalid_argument("frame: bad source order");
    if (subframe_symbols.empty()) throw std::invalid_argument("frame: no sub-frames");
    for (long long t : subframe_symbols) {
        if (t < 1) throw std::invalid_argument("frame: sub-frame lengths must be >= 1");
    }
    // The first sub-frame must be able to carry the whole message.
    if (info_bits > subframe_symbols[0] * source_order_bits) {
        throw std::invalid_argument("frame: R_1 = K/T_1 exceeds the source modulation order");
    }
}

FrameConfig FrameConfig::open_loop_7sf(long long info_bits, int source_order_bits) {
    if (info_bits % 6 != 0) {
        throw std::invalid_argument("open_loop_7sf: info_bits must be divisible by 6");
    }
    FrameConfig frame;
    frame.info_bits = info_bits;
    frame.source_order_bits = source_order_bits;
    const long long t1 = info_bits / source_order_bits;
    if (t1 % 3 != 0) {
        throw std::invalid_argument("open_loop_7sf: K/m_S must be divisible by 3");
    }
    frame.subframe_symbols.assign(7, t1 / 3);
    frame.subframe_symbols[0] = t1;
    frame.validate();
    return frame;
}

FrameConfig FrameConfig::closed_loop_3sf(double first_rate, long long t1,
                                         int source_order_bits) {
    if (t1 % 4 != 0) throw std::invalid_argument("closed_loop_3sf: t1 must be divisible by 4");
    const double k_exact = first_rate * static_cast<double>(t1) * source_order_bits;
    const long long k = std::llround(k_exact);
    if (std::abs(k_exact - static_cast<double>(k)) > 1e-9) {
        throw std::invalid_argument("closed_loop_3sf: rate * t1 * m_S is not an integer");
    }
    FrameConfig frame;
    frame.info_bits = k;
    frame.source_order_bits = source_order_bits;
    frame.subframe_symbols = {t1, t1 / 4, t1 / 4};
    frame.validate();
    return frame;
}

double rate_after_n(const FrameConfig& frame, int n) {
    if (n < 1 || n > frame.n_max()) throw std::invalid_argument("rate_after_n: n out of range");
    return static_cast<double>(frame.info_bits) / static_cast<double>(frame.symbols_through(n));
}

}  // namespace ddf
