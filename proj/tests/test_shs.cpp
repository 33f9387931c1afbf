#include "aoi/shs.hpp"

#include "aoi/chains.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace aoi;

namespace {

SystemParams wp_b1{1, {1.0}, 1.0, 1.0, 1};

SystemParams make_params(int n, std::vector<double> lam, double eta,
                         double mu, int b) {
    return SystemParams{n, std::move(lam), eta, mu, b};
}

}  // namespace

TEST_CASE("hat matrix marks zero columns") {
    CHECK(hat_matrix(BinaryMat2::of(1, 0, 0, 0)) ==
          BinaryMat2::of(0, 0, 0, 1));
    CHECK(hat_matrix(BinaryMat2::of(1, 1, 0, 0)) ==
          BinaryMat2::of(0, 0, 0, 0));
    CHECK(hat_matrix(BinaryMat2::of(0, 0, 1, 0)) ==
          BinaryMat2::of(0, 0, 0, 1));
    CHECK(hat_matrix(BinaryMat2::of(0, 0, 0, 0)) ==
          BinaryMat2::of(1, 0, 0, 1));
}

TEST_CASE("steady state of small chains, solved by hand") {
    SUBCASE("balanced single-source chain is uniform") {
        SteadyState pi = steady_state(build_wp(wp_b1, 1));
        REQUIRE(pi.pi.size() == 3);
        for (double p : pi.pi) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-12));
    }
    SUBCASE("battery 2 with fast harvesting") {
        SteadyState pi =
            steady_state(build_wp(make_params(1, {1.0}, 2.0, 1.0, 2), 1));
        REQUIRE(pi.pi.size() == 5);
        const double e[5] = {1.0 / 13, 2.0 / 13, 2.0 / 13, 4.0 / 13,
                             4.0 / 13};
        for (int q = 0; q < 5; ++q)
            CHECK(pi.pi[q] == doctest::Approx(e[q]).epsilon(1e-12));
    }
    SUBCASE("source-aware chain splits busy mass by source rate") {
        SteadyState pi = steady_state(
            build_sa(make_params(2, {0.5, 0.5}, 1.0, 1.0, 1), 1));
        REQUIRE(pi.pi.size() == 4);
        CHECK(pi.pi[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(pi.pi[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(pi.pi[2] == doctest::Approx(1.0 / 6).epsilon(1e-12));
        CHECK(pi.pi[3] == doctest::Approx(1.0 / 6).epsilon(1e-12));
    }
}

TEST_CASE("steady state sums to one across a spread of chains") {
    for (auto& p :
         {make_params(2, {0.9, 2.1}, 5.0, 1.0, 3),
          make_params(3, {0.25, 0.15, 0.1}, 0.5, 1.0, 5)}) {
        for (Discipline d :
             {Discipline::WP, Discipline::PS, Discipline::SA}) {
            SteadyState pi = steady_state(build_chain(d, p, 1));
            double sum = 0.0;
            for (double x : pi.pi) {
                CHECK(x >= 0.0);
                sum += x;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("reducible chains are reported with the unreachable states") {
    ShsModel m;
    m.states = {{1, 0, 0}, {2, 1, 0}, {3, 1, 1}};
    m.transitions = {{1, 2, 1.0, "a", BinaryMat2::of(1, 0, 0, 0)},
                     {2, 1, 1.0, "b", BinaryMat2::of(1, 0, 0, 0)},
                     {3, 1, 1.0, "c", BinaryMat2::of(1, 0, 0, 0)}};
    CHECK_THROWS_WITH_AS(steady_state(m),
                         doctest::Contains("not irreducible"),
                         std::invalid_argument);
}

TEST_CASE("first-moment vectors reproduce the hand-solved average") {
    ShsModel m = build_wp(wp_b1, 1);
    SteadyState pi = steady_state(m);
    MomentVectors v = first_moment_vectors(m, pi);
    CHECK(v.sum0() == doctest::Approx(3.0).epsilon(1e-12));
    // Hand solution: v_10 = 2/3, v_20 = 1, v_30 = 4/3.
    CHECK(v.v[0][0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(v.v[1][0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.v[2][0] == doctest::Approx(4.0 / 3).epsilon(1e-12));
}

TEST_CASE("average AoI examples") {
    CHECK(average_aoi(build_wp(wp_b1, 1)) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(average_aoi(build_wp(make_params(1, {1.0}, 1.0, 1.0, 2), 1)) ==
          doctest::Approx(2.8).epsilon(1e-12));
    // Huge energy rate approaches the non-EH preemptive limit (1+rho)/rho1.
    CHECK(average_aoi(build_ps(make_params(2, {0.5, 0.5}, 1e6, 1.0, 2), 1)) ==
          doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("time rescaling scales moments and MGF") {
    const double a = 2.5;
    SystemParams p = make_params(2, {0.6, 0.4}, 1.5, 1.0, 2);
    SystemParams ps = p;
    for (double& l : ps.arrival_rates) l *= a;
    ps.energy_rate *= a;
    ps.service_rate *= a;

    CHECK(average_aoi(build_wp(ps, 1)) ==
          doctest::Approx(average_aoi(build_wp(p, 1)) / a).epsilon(1e-12));
    const double s = 0.2;
    CHECK(mgf(build_sa(ps, 1), s * a) ==
          doctest::Approx(mgf(build_sa(p, 1), s)).epsilon(1e-10));
}

TEST_CASE("self-transitions do not change the steady state") {
    SystemParams p = make_params(2, {0.7, 0.5}, 2.0, 1.0, 2);
    ShsModel m = build_wp(p, 1);
    SteadyState before = steady_state(m);
    m.transitions.push_back({3, 3, 4.2, "extra", BinaryMat2::of(1, 0, 0, 0)});
    SteadyState after = steady_state(m);
    for (size_t q = 0; q < before.pi.size(); ++q)
        CHECK(after.pi[q] == doctest::Approx(before.pi[q]).epsilon(1e-12));
}

TEST_CASE("MGF fixtures") {
    ShsModel m = build_wp(wp_b1, 1);
    SteadyState pi = steady_state(m);

    SUBCASE("normalization at s = 0") {
        MgfVectors v = mgf_vectors(m, pi, 0.0);
        CHECK(v.sum0() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("hand-solved value at sbar = 0.5") {
        CHECK(mgf(m, 0.5) == doctest::Approx(28.0 / 3).epsilon(1e-12));
    }
    SUBCASE("pole at sbar = 1 is outside the convergence region") {
        CHECK_THROWS_WITH_AS(mgf(m, 1.0),
                             doctest::Contains("outside convergence region"),
                             std::domain_error);
        CHECK_THROWS_AS(mgf(m, 1.2), std::domain_error);
        double s0 = estimate_s0(m, pi);
        CHECK(s0 == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("MGF is 1 at 0, >= 1 and nondecreasing on the positive domain") {
    SystemParams p = make_params(2, {0.6, 0.4}, 1.5, 1.0, 2);
    for (Discipline d : {Discipline::WP, Discipline::PS, Discipline::SA}) {
        ShsModel m = build_chain(d, p, 1);
        SteadyState pi = steady_state(m);
        CHECK(mgf_vectors(m, pi, 0.0).sum0() ==
              doctest::Approx(1.0).epsilon(1e-12));
        const double s0 = estimate_s0(m, pi);
        double prev = 1.0;
        for (double f : {0.2, 0.4, 0.6, 0.8}) {
            double v = mgf_vectors(m, pi, f * s0 * 0.9).sum0();
            CHECK(v >= prev - 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("moments via numerical differentiation of the MGF") {
    SystemParams p = make_params(1, {1.0}, 1.0, 1.0, 2);
    ShsModel m = build_wp(p, 1);
    SteadyState pi = steady_state(m);
    auto fn = [&](double sbar) { return mgf_vectors(m, pi, sbar).sum0(); };
    CHECK(moment_from_mgf(fn, 1, 1.0) ==
          doctest::Approx(2.8).epsilon(1e-8));
    CHECK(moment_from_mgf(fn, 2, 1.0) ==
          doctest::Approx(11.2).epsilon(1e-7));
    CHECK(moment_from_mgf([](double) { return 1.0; }, 1, 1.0) ==
          doctest::Approx(0.0).epsilon(1e-12));

    SUBCASE("variance is non-negative") {
        const double m1 = moment_from_mgf(fn, 1, 1.0);
        const double m2 = moment_from_mgf(fn, 2, 1.0);
        CHECK(m2 - m1 * m1 >= -1e-8);
    }
}

TEST_CASE("all entries scale as 1/mu when time is rescaled") {
    SystemParams p = make_params(2, {0.6, 0.4}, 1.5, 1.0, 1);
    SystemParams fast = p;
    const double a = 1000.0;
    for (double& l : fast.arrival_rates) l *= a;
    fast.energy_rate *= a;
    fast.service_rate *= a;
    MomentVectors slow = first_moment_vectors(build_wp(p, 1),
                                              steady_state(build_wp(p, 1)));
    MomentVectors quick = first_moment_vectors(
        build_wp(fast, 1), steady_state(build_wp(fast, 1)));
    for (size_t q = 0; q < slow.v.size(); ++q)
        for (int j = 0; j < 2; ++j)
            CHECK(quick.v[q][j] ==
                  doctest::Approx(slow.v[q][j] / a).epsilon(1e-10));
}
