#include "ddf/channel.hpp"

#include <stdexcept>

namespace ddf {

FadingDraw draw_fading(int n_rx, TrialRng& stream) {
    if (n_rx < 1) throw std::invalid_argument("draw_fading: n_rx must be >= 1");
    FadingDraw draw;
    draw.h_sd.resize(n_rx);
    draw.h_rd.resize(n_rx);
    for (int i = 0; i < n_rx; ++i) draw.h_sd[i] = stream.next_cn01();
    for (int i = 0; i < n_rx; ++i) draw.h_rd[i] = stream.next_cn01();
    draw.h_sr = stream.next_cn01();
    return draw;
}

double norm_sq(std::span<const std::complex<double>> h) {
    double sum = 0.0;
    for (const auto& v : h) sum += std::norm(v);
    return sum;
}

double post_mrc_snr(std::span<const std::complex<double>> h, double snr_linear) {
    if (!(snr_linear >= 0.0)) throw std::domain_error("post_mrc_snr: snr must be >= 0");
    return snr_linear * norm_sq(h);
}

}  // namespace ddf
