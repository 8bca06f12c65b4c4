#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "lrl/body_spec.hpp"
#include "lrl/error.hpp"
#include "lrl/experiments.hpp"

using namespace lrl;
using doctest::Approx;

TEST_CASE("exponent fits") {
    GrowthSeries s{"sqrt", {}};
    for (double T : {10.0, 100.0, 1000.0}) s.points.push_back({T, std::sqrt(T)});
    const auto f = fit_growth_exponent(s);
    CHECK(f.slope == Approx(0.5).epsilon(1e-12));
    CHECK(f.r_squared == Approx(1.0));
    CHECK(f.n_points == 3);

    GrowthSeries c{"flat", {{10, 3}, {20, 3}, {40, 3}}};
    CHECK(fit_growth_exponent(c).slope == Approx(0.0).scale(1.0));

    CounterRng rng(17, 0);
    GrowthSeries lin{"linear", {}};
    for (double T : geometric_grid(10.0, 2.0, 8)) lin.points.push_back({T, T * (1.0 + 0.01 * rng.normal())});
    const auto g = fit_growth_exponent(lin);
    CHECK(g.slope >= 0.98);
    CHECK(g.slope <= 1.02);

    GrowthSeries few{"few", {{10, 1}, {20, -1}, {40, 0}, {80, 2}}};
    CHECK_THROWS_AS(fit_growth_exponent(few), FitError);
    GrowthSeries excl{"excl", {{10, 1}, {20, -1}, {40, 4}, {80, 8}}};
    CHECK(fit_growth_exponent(excl).excluded == 1);
}

TEST_CASE("grids and medians") {
    const auto g = geometric_grid(50.0, 2.0, 6);
    CHECK(g.size() == 6);
    CHECK(g.back() == 1600.0);
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK_THROWS_AS(median({}), FitError);
    CHECK_THROWS_AS(geometric_grid(1.0, 1.0, 3), DomainError);
}

TEST_CASE("hardy experiment on a small grid") {
    const auto r = hardy_experiment(StarBody::ball(2), 4, geometric_grid(20.0, 2.0, 4), 7);
    CHECK(r.rows.size() == 16);
    CHECK(r.fits.size() == 4);
    CHECK_FALSE(r.partial());
    CHECK(r.max_slope <= 1.0);  // tripwire
    CHECK(r.median_slope > 0.2);
    CHECK(r.median_slope < 0.8);
    const auto again = hardy_experiment(StarBody::ball(2), 4, geometric_grid(20.0, 2.0, 4), 7);
    CHECK(growth_csv(r, "hardy_average") == growth_csv(again, "hardy_average"));
    const auto other = hardy_experiment(StarBody::ball(2), 4, geometric_grid(20.0, 2.0, 4), 8);
    CHECK(growth_csv(r, "hardy_average") != growth_csv(other, "hardy_average"));
    CHECK(growth_csv(r, "hardy_average").rfind("motion_id,T,hardy_average\n", 0) == 0);
}

TEST_CASE("budget failures are recorded per motion") {
    ExperimentOptions opts;
    opts.budget = 50000;  // T = 160 on the disk needs about 80000 candidates
    const auto r = hardy_experiment(StarBody::ball(2), 3, geometric_grid(20.0, 2.0, 4), 1, opts);
    CHECK(r.partial());
    CHECK(r.failures.size() == 3);
    CHECK(r.rows.empty());
}

TEST_CASE("spectrum cache returns identical radii") {
    const auto dir = std::filesystem::temp_directory_path() / "lrl_test_cache";
    std::filesystem::remove_all(dir);
    ExperimentOptions opts;
    opts.cache_dir = dir;
    CounterRng rng(2, 2);
    const auto m = haar_sample(2, rng);
    const auto body = StarBody::pnorm_ball(4, 2);
    const auto a = obtain_spectrum(body, m, 30.0, opts);
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator()) == 1);
    const auto b = obtain_spectrum(body, m, 30.0, opts);
    CHECK(a->radii == b->radii);
    obtain_spectrum(body, m, 31.0, opts);  // different t_max, different key
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator()) == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("group mean square grows like T^(k-1) on a short grid") {
    const auto r = group_mean_square_experiment(StarBody::ball(2), 128, geometric_grid(10.0, 2.0, 4), 3);
    CHECK(r.rows.size() == 4);
    CHECK(r.fit.slope > 0.7);
    CHECK(r.fit.slope < 1.3);
    for (const auto& row : r.rows) CHECK(row.std_error > 0.0);
    CHECK(mean_square_csv(r).rfind("T,estimate,std_error,n_samples\n", 0) == 0);
}

TEST_CASE("standard error shrinks like n^(-1/2)") {
    const auto small = group_mean_square_experiment(StarBody::ball(2), 64, {20.0}, 5);
    const auto large = group_mean_square_experiment(StarBody::ball(2), 1024, {20.0}, 5);
    // 16x the samples: about 4x smaller error
    const double ratio = small.rows[0].std_error / large.rows[0].std_error;
    CHECK(ratio > 2.5);
    CHECK(ratio < 6.0);
}

TEST_CASE("eigenvalue counts through dilates") {
    const double two_pi = 2.0 * std::numbers::pi;
    const auto disk = parse_body_spec("poly:2:1,0,1", 2);
    const auto r = eigenvalue_count_experiment(disk, {two_pi * two_pi}, RigidMotion::identity(2));
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].count == 5);
    CHECK(r.rows[0].T == Approx(1.0));
    CHECK(r.target == Approx(0.25));

    const auto quartic = parse_body_spec("poly:4:1,0,0,0,1", 2);
    const auto q = eigenvalue_count_experiment(quartic, {std::pow(two_pi, 4)}, RigidMotion::identity(2));
    CHECK(q.rows[0].count == 5);  // origin plus the four boundary points
    CHECK(q.rows[0].boundary_ties == 4);
    CHECK_THROWS_AS(eigenvalue_count_experiment(StarBody::ball(2), {1.0}, RigidMotion::identity(2)), BodyInvalid);

    std::vector<double> lambdas;
    for (double s : geometric_grid(100.0, 4.0, 4)) lambdas.push_back(two_pi * two_pi * s);
    CounterRng rng(4, 4);
    const auto e = eigenvalue_count_experiment(disk, lambdas, haar_sample(2, rng));
    REQUIRE(e.fit);
    CHECK(e.fit->slope > 0.05);
    CHECK(e.fit->slope < 0.45);
    CHECK(eigenvalue_csv(e).rfind("lambda,T,s,count,remainder,rescaled_average,boundary_ties\n", 0) == 0);
}

TEST_CASE("orientation comparison on the disk is rotation invariant at x = 0") {
    const auto c = orientation_comparison(StarBody::ball(2), geometric_grid(20.0, 2.0, 4), 3, 1);
    CHECK(c.random.size() == 3);
    for (const auto& s : c.random) {
        // the rotated disk is the same set
        CHECK(s.hardy_fit.slope == Approx(c.identity.hardy_fit.slope).epsilon(1e-9));
        CHECK(s.max_fit.slope == Approx(c.identity.max_fit.slope).epsilon(1e-9));
    }
}

TEST_CASE("experiments reject bad grids") {
    CHECK_THROWS_AS(hardy_experiment(StarBody::ball(2), 2, {0.5, 1.0, 2.0}, 1), DomainError);
    CHECK_THROWS_AS(hardy_experiment(StarBody::ball(2), 2, {10.0, 5.0, 20.0}, 1), DomainError);
    CHECK_THROWS_AS(rescaled_experiment(StarBody::ball(2), 3, 2, {10.0, 20.0, 40.0}, 1), DomainError);
    CHECK_THROWS_AS(hardy_experiment(StarBody::ball(2), 0, {10.0, 20.0, 40.0}, 1), DomainError);
}
