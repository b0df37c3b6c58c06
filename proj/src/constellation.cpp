#include "ddf/constellation.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ddf {

namespace {

// Binary-reflected Gray code of k.
unsigned gray_encode(unsigned k) { return k ^ (k >> 1); }

}  // namespace

Constellation Constellation::square_qam(int order_bits) {
    if (order_bits < 2 || order_bits % 2 != 0) {
        throw std::invalid_argument("square_qam: order_bits must be even and >= 2");
    }
    const int half = order_bits / 2;
    const unsigned side = 1u << half;
    const unsigned count = 1u << order_bits;

    // Unit average energy: E|z|^2 = 2 * (side^2 - 1) / 3 * scale^2 = 1.
    const double scale = std::sqrt(3.0 / (2.0 * (static_cast<double>(count) - 1.0)));

    std::vector<cplx> points(count);
    for (unsigned i = 0; i < side; ++i) {
        const double level_i = scale * (2.0 * i + 1.0 - side);
        const unsigned label_i = gray_encode(i) << half;
        for (unsigned q = 0; q < side; ++q) {
            const double level_q = scale * (2.0 * q + 1.0 - side);
            points[label_i | gray_encode(q)] = {level_i, level_q};
        }
    }
    return Constellation(order_bits, std::move(points));
}

double Constellation::average_energy() const {
    double sum = 0.0;
    for (const cplx& p : points_) sum += std::norm(p);
    return sum / static_cast<double>(points_.size());
}

int Constellation::index_of(cplx z, double tol) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double d2 = std::norm(z - points_[i]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = static_cast<int>(i);
        }
    }
    return (best_d2 <= tol * tol) ? best : -1;
}

const Constellation& qam_for_order(int order_bits) {
    static std::mutex mu;
    static std::map<int, Constellation> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(order_bits);
    if (it == cache.end()) {
        it = cache.emplace(order_bits, Constellation::square_qam(order_bits)).first;
    }
    return it->second;
}

}  // namespace ddf
