#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "ddf/constellation.hpp"
#include "ddf/mi.hpp"
#include "oracles.hpp"

using namespace ddf;

namespace {

// Built once; several tests scan them.
const MiTableSet& tables() {
    static MiTableSet set = MiTableSet::with_orders({2, 4, 6});
    return set;
}

// Frozen before the estimators were written: brute-force MC oracle over 2e6
// noise realizations (tests/oracles.hpp), QPSK at 10 dB.
constexpr double kQpsk10dbOracle = 1.993422;

}  // namespace

TEST_CASE("square QAM alphabets are unit energy with 2^m distinct points") {
    for (int m : {2, 4, 6}) {
        const Constellation& c = qam_for_order(m);
        CHECK(c.size() == (1u << m));
        CHECK(c.average_energy() == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (std::size_t j = i + 1; j < c.size(); ++j) {
                CHECK(std::norm(c.point(i) - c.point(j)) > 1e-6);
            }
        }
    }
    CHECK_THROWS_AS(Constellation::square_qam(3), std::invalid_argument);
    CHECK_THROWS_AS(Constellation::square_qam(0), std::invalid_argument);
}

TEST_CASE("gray labeling: physically adjacent 16-QAM points differ in one label bit") {
    const Constellation& c = qam_for_order(4);
    const double step = 2.0 * std::sqrt(3.0 / (2.0 * 15.0));  // distance between levels
    for (std::size_t a = 0; a < c.size(); ++a) {
        for (std::size_t b = a + 1; b < c.size(); ++b) {
            const cplx d = c.point(a) - c.point(b);
            const bool i_neighbor =
                std::abs(d.imag()) < 1e-12 && std::abs(std::abs(d.real()) - step) < 1e-9;
            const bool q_neighbor =
                std::abs(d.real()) < 1e-12 && std::abs(std::abs(d.imag()) - step) < 1e-9;
            if (i_neighbor || q_neighbor) {
                CHECK(std::popcount(a ^ b) == 1u);
            }
        }
    }
}

TEST_CASE("gaussian_mi") {
    CHECK(gaussian_mi(0.0) == doctest::Approx(0.0));
    CHECK(gaussian_mi(1.0) == doctest::Approx(1.0));
    CHECK(gaussian_mi(3.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(gaussian_mi(-1.0), std::domain_error);
}

TEST_CASE("mi_estimate endpoints") {
    const Constellation& qpsk = qam_for_order(2);
    CHECK(mi_estimate(qpsk, 0.0, MiMethod::quadrature) == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(std::abs(mi_estimate(qpsk, 1e6, MiMethod::quadrature) - 2.0) < 1e-3);
    MiPrecision prec;
    prec.mc_samples = 50000;
    CHECK(mi_estimate(qpsk, 0.0, MiMethod::monte_carlo, prec) == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(std::abs(mi_estimate(qpsk, 1e6, MiMethod::monte_carlo, prec) - 2.0) < 1e-3);
}

TEST_CASE("mi_estimate matches the frozen brute-force oracle at 10 dB") {
    const Constellation& qpsk = qam_for_order(2);
    const double snr = std::pow(10.0, 1.0);
    const double quad = mi_estimate(qpsk, snr, MiMethod::quadrature);
    MiPrecision prec;
    prec.mc_samples = 100000;
    const double mc = mi_estimate(qpsk, snr, MiMethod::monte_carlo, prec);
    CHECK(std::abs(quad - kQpsk10dbOracle) < 1e-2);
    CHECK(std::abs(mc - kQpsk10dbOracle) < 1e-2);
    CHECK(std::abs(quad - mc) < 1e-2);
    CHECK(quad < std::log2(1.0 + snr));
    // The oracle itself, re-run at the frozen sample count, lands on the value.
    CHECK(std::abs(oracle::brute_force_mi(qpsk.points(), snr, 2000000) - kQpsk10dbOracle) < 1e-5);
}

TEST_CASE("mi_estimate rejects bad parameters") {
    const Constellation& qpsk = qam_for_order(2);
    MiPrecision prec;
    prec.quad_order = 4;
    CHECK_THROWS_AS(mi_estimate(qpsk, 1.0, MiMethod::quadrature, prec), std::invalid_argument);
    prec = {};
    prec.mc_samples = 100;
    CHECK_THROWS_AS(mi_estimate(qpsk, 1.0, MiMethod::monte_carlo, prec), std::invalid_argument);
    CHECK_THROWS_AS(mi_estimate(qpsk, -0.5, MiMethod::quadrature), std::domain_error);
    CHECK_THROWS_AS(mi_estimate(qpsk, std::nan(""), MiMethod::quadrature), std::domain_error);
}

TEST_CASE("build_mi_table enforces coverage and produces a monotone bounded curve") {
    CHECK_THROWS_AS(build_mi_table(qam_for_order(2), {.lo_db = -10.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_mi_table(qam_for_order(2), {.step_db = 0.5}), std::invalid_argument);

    const MiTable& qpsk = tables().table(2);
    CHECK(qpsk.size() == 241);
    for (std::size_t j = 1; j < qpsk.size(); ++j) {
        CHECK(qpsk.mi_bits()[j] >= qpsk.mi_bits()[j - 1]);
    }
    for (int m : {2, 4, 6}) {
        const MiTable& t = tables().table(m);
        for (std::size_t j = 0; j < t.size(); ++j) {
            const double snr = std::pow(10.0, t.grid_db(j) / 10.0);
            CHECK(t.mi_bits()[j] <= static_cast<double>(m));
            CHECK(t.mi_bits()[j] <= gaussian_mi(snr) + 1e-9);
        }
    }
    CHECK(tables().table(4).mi_bits().back() <= 4.0);
    // 64-QAM endpoint at 40 dB: the brute-force oracle saturates to 6.0 there.
    CHECK(std::abs(tables().table(6).mi_bits().back() - 6.0) < 1e-2);
}

TEST_CASE("mi_lookup interpolation contract") {
    const MiTable& t = tables().table(2);
    CHECK(t.lookup(0.0) == 0.0);

    // Exact grid point: the stored value.
    const double snr_at = std::pow(10.0, t.grid_db(120) / 10.0);
    CHECK(t.lookup(snr_at) == doctest::Approx(t.mi_bits()[120]).epsilon(1e-9));

    // Grid midpoints agree with a fresh estimate.
    for (std::size_t j : {40u, 120u, 200u}) {
        const double mid_db = 0.5 * (t.grid_db(j) + t.grid_db(j + 1));
        const double snr = std::pow(10.0, mid_db / 10.0);
        CHECK(std::abs(t.lookup(snr) - mi_estimate(qam_for_order(2), snr, MiMethod::quadrature)) <
              2e-2);
    }

    // Above the grid: clamped; below: linear in SNR toward 0.
    CHECK(t.lookup(1e9) == t.mi_bits().back());
    const double below = 0.5 * std::pow(10.0, -2.0);
    CHECK(t.lookup(below) == doctest::Approx(0.5 * t.mi_bits().front()).epsilon(1e-12));

    // Monotone in SNR over a random scan.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> db(-30.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        const double a = std::pow(10.0, db(rng) / 10.0);
        const double b = a * 1.3;
        CHECK(t.lookup(a) <= t.lookup(b) + 1e-12);
    }
}

TEST_CASE("quadrature and monte carlo agree across the SNR range") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> db(-20.0, 40.0);
    for (int m : {2, 4, 6}) {
        const Constellation& c = qam_for_order(m);
        MiPrecision prec;
        prec.mc_samples = (m == 6) ? 20000 : 50000;
        for (int i = 0; i < 6; ++i) {
            const double snr = std::pow(10.0, db(rng) / 10.0);
            prec.mc_seed = rng();
            const double a = mi_estimate(c, snr, MiMethod::quadrature);
            const double b = mi_estimate(c, snr, MiMethod::monte_carlo, prec);
            CHECK(std::abs(a - b) < 1e-2);
        }
    }
}

TEST_CASE("mi table csv round trip") {
    const MiTable& t = tables().table(4);
    std::ostringstream out;
    t.write_csv(out);
    std::istringstream in(out.str());
    const MiTable back = MiTable::read_csv(in, 4);
    REQUIRE(back.size() == t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        CHECK(back.mi_bits()[j] == doctest::Approx(t.mi_bits()[j]).epsilon(1e-10));
        CHECK(back.grid_db(j) == doctest::Approx(t.grid_db(j)).epsilon(1e-10));
    }
    CHECK(back.lookup(3.7) == doctest::Approx(t.lookup(3.7)).epsilon(1e-9));
}
