#include <doctest.h>

#include <cmath>
#include <complex>

#include "ddf/channel.hpp"
#include "oracles.hpp"

using namespace ddf;

TEST_CASE("fading entries are zero-mean unit-variance complex gaussians") {
    const int n_draws = 100000;
    double sum_norm = 0.0;
    std::complex<double> mean_sd{0.0, 0.0};
    int sr_tail = 0;
    for (int t = 0; t < n_draws; ++t) {
        TrialRng rng(12345, static_cast<std::uint64_t>(t));
        const FadingDraw d = draw_fading(2, rng);
        REQUIRE(d.h_sd.size() == 2);
        REQUIRE(d.h_rd.size() == 2);
        sum_norm += norm_sq(d.h_sd);
        mean_sd += d.h_sd[0];
        // |h_sr|^2 is exponential(1): P(|h|^2 > 1) = 1/e.
        if (std::norm(d.h_sr) > 1.0) ++sr_tail;
    }
    CHECK(sum_norm / n_draws == doctest::Approx(2.0).epsilon(0.01));
    CHECK(std::abs(mean_sd.real() / n_draws) < 0.01);
    CHECK(std::abs(mean_sd.imag() / n_draws) < 0.01);
    CHECK(static_cast<double>(sr_tail) / n_draws ==
          doctest::Approx(std::exp(-1.0)).epsilon(0.015));
}

TEST_CASE("exponential tail matches the analytic gamma cdf at several points") {
    const int n_draws = 100000;
    for (double x : {0.5, 1.0, 2.0}) {
        int below = 0;
        for (int t = 0; t < n_draws; ++t) {
            TrialRng rng(777, static_cast<std::uint64_t>(t));
            if (std::norm(draw_fading(1, rng).h_sr) < x) ++below;
        }
        const double expected = oracle::gamma_cdf_integer(1, x);
        CHECK(static_cast<double>(below) / n_draws == doctest::Approx(expected).epsilon(0.02));
    }
}

TEST_CASE("identical (seed, trial) reproduces the draw exactly") {
    TrialRng a(42, 1000);
    TrialRng b(42, 1000);
    const FadingDraw da = draw_fading(4, a);
    const FadingDraw db = draw_fading(4, b);
    for (int i = 0; i < 4; ++i) {
        CHECK(da.h_sd[i] == db.h_sd[i]);
        CHECK(da.h_rd[i] == db.h_rd[i]);
    }
    CHECK(da.h_sr == db.h_sr);

    // Different trial index: a different draw.
    TrialRng c(42, 1001);
    CHECK(draw_fading(4, c).h_sr != da.h_sr);
}

TEST_CASE("post_mrc_snr") {
    const std::vector<std::complex<double>> zero(3, {0.0, 0.0});
    CHECK(post_mrc_snr(zero, 123.0) == 0.0);

    const std::vector<std::complex<double>> unit = {{1.0, 0.0}};
    CHECK(post_mrc_snr(unit, 7.5) == doctest::Approx(7.5));

    const std::vector<std::complex<double>> h = {{1.0, 0.0}, {0.0, 1.0}};  // norm^2 = 2
    CHECK(post_mrc_snr(h, 5.0) == doctest::Approx(10.0));

    CHECK_THROWS_AS(post_mrc_snr(h, -1.0), std::domain_error);
}

TEST_CASE("link budget off-sentinel maps to zero power") {
    LinkBudget budget;
    budget.snr_sd_db = 10.0;
    budget.snr_rd_db = kLinkOffDb;
    CHECK(budget.snr_sd() == doctest::Approx(10.0));
    CHECK(budget.snr_rd() == 0.0);
    CHECK(budget.relay_data_link_off());
    CHECK(db_to_linear(linear_to_db(0.0)) == 0.0);
}

TEST_CASE("draw_fading rejects bad antenna counts") {
    TrialRng rng(1, 1);
    CHECK_THROWS_AS(draw_fading(0, rng), std::invalid_argument);
}
