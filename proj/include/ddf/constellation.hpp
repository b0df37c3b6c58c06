// constellation.hpp - Unit-energy square QAM alphabets with Gray labeling.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace ddf {

using cplx = std::complex<double>;

// A 2^m-point QAM alphabet, average symbol energy 1. points[label] is the
// symbol carrying the m-bit Gray label `label` (high half of the bits selects
// the in-phase level, low half the quadrature level).
class Constellation {
public:
    // Square QAM for even order_bits: 2 -> QPSK, 4 -> 16-QAM, 6 -> 64-QAM.
    static Constellation square_qam(int order_bits);

    int order_bits() const { return order_bits_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<cplx>& points() const { return points_; }
    cplx point(std::size_t label) const { return points_[label]; }

    double average_energy() const;

    // Index of the alphabet point closest to z, or -1 if the best match is
    // further than tol away.
    int index_of(cplx z, double tol = 1e-9) const;
    bool contains(cplx z, double tol = 1e-9) const { return index_of(z, tol) >= 0; }

private:
    Constellation(int order_bits, std::vector<cplx> points)
        : order_bits_(order_bits), points_(std::move(points)) {}

    int order_bits_;
    std::vector<cplx> points_;
};

// Cached shared instances of the orders used throughout the simulator.
const Constellation& qam_for_order(int order_bits);

}  // namespace ddf
