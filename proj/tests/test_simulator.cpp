#include "aoi/simulator.hpp"

#include "aoi/closed_form.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace aoi;

namespace {

SystemParams two_src{2, {0.5, 0.5}, 1.5, 1.0, 2};

SimConfig quick_config() {
    SimConfig c;
    c.horizon = 2e5;
    c.seed = 42;
    c.mgf_s_values = {0.0, 0.1};
    return c;
}

bool same_batches(const SimResult& a, const SimResult& b) {
    for (size_t i = 0; i < a.mean.size(); ++i) {
        if (a.mean[i].batch_values != b.mean[i].batch_values) return false;
        if (a.second_moment[i].batch_values !=
            b.second_moment[i].batch_values)
            return false;
        for (size_t j = 0; j < a.mgf[i].size(); ++j)
            if (a.mgf[i][j].batch_values != b.mgf[i][j].batch_values)
                return false;
    }
    return true;
}

}  // namespace

TEST_CASE("empirical MGF at s = 0 is exactly 1") {
    SimResult r = simulate(two_src, Discipline::WP, quick_config());
    for (int i = 0; i < 2; ++i) {
        CHECK(r.mgf[i][0].estimate == 1.0);
        for (double b : r.mgf[i][0].batch_values) CHECK(b == 1.0);
    }
}

TEST_CASE("fixed seed reproduces bit-identical results") {
    SimResult a = simulate(two_src, Discipline::PS, quick_config());
    SimResult b = simulate(two_src, Discipline::PS, quick_config());
    CHECK(same_batches(a, b));
    CHECK(a.mean[0].estimate == b.mean[0].estimate);
    CHECK(a.occupancy == b.occupancy);
}

TEST_CASE("one replication equals a plain simulate") {
    SimConfig c = quick_config();
    c.replications = 1;
    CHECK(same_batches(simulate(two_src, Discipline::SA, c),
                       replicate(two_src, Discipline::SA, c)));
}

TEST_CASE("parallel replications match the serial reference") {
    SimConfig c = quick_config();
    c.horizon = 5e4;
    c.replications = 6;
    SimResult par = replicate(two_src, Discipline::WP, c);
    SimResult ser = replicate_serial(two_src, Discipline::WP, c);
    CHECK(same_batches(par, ser));
    CHECK(par.mean[0].estimate == ser.mean[0].estimate);
    CHECK(par.energy_harvested == ser.energy_harvested);
}

TEST_CASE("ps and sa coincide event-for-event with one source") {
    SystemParams one{1, {1.0}, 1.2, 1.0, 2};
    SimConfig c = quick_config();
    SimResult ps = simulate(one, Discipline::PS, c);
    SimResult sa = simulate(one, Discipline::SA, c);
    CHECK(same_batches(ps, sa));
    CHECK(ps.counts[0].served == sa.counts[0].served);
    CHECK(ps.counts[0].preempted == sa.counts[0].preempted);
    CHECK(ps.counts[0].discarded == sa.counts[0].discarded);
}

TEST_CASE("per-source packet accounting balances") {
    SimConfig c = quick_config();
    for (Discipline d : {Discipline::WP, Discipline::PS, Discipline::SA}) {
        SimResult r = simulate(two_src, d, c);
        for (const SourceCounts& cnt : r.counts) {
            CHECK(cnt.generated ==
                  cnt.served + cnt.preempted + cnt.discarded);
            CHECK(cnt.generated > 0);
        }
        double occ = 0.0;
        for (double f : r.occupancy) {
            CHECK(f >= 0.0);
            occ += f;
        }
        CHECK(occ == doctest::Approx(1.0).epsilon(1e-9));
        if (d == Discipline::WP) CHECK(r.counts[0].preempted == 0);
    }
}

TEST_CASE("occupancy converges to the closed-form steady state") {
    SimConfig c;
    c.horizon = 2e6;
    c.seed = 7;
    for (Discipline d : {Discipline::WP, Discipline::SA}) {
        SimResult r = simulate(two_src, d, c);
        SteadyState pi = steady_state_closed(d, two_src, 1);
        REQUIRE(r.occupancy.size() == pi.pi.size());
        for (size_t q = 0; q < pi.pi.size(); ++q)
            CHECK(std::abs(r.occupancy[q] - pi.pi[q]) < 0.005);
    }
}

TEST_CASE("simulated mean and MGF agree with the closed forms") {
    SimConfig c;
    c.horizon = 2e5;
    c.seed = 42;
    c.replications = 4;
    c.mgf_s_values = {0.05, 0.1};
    for (Discipline d : {Discipline::WP, Discipline::PS, Discipline::SA}) {
        SimResult r = replicate(two_src, d, c);
        for (int src = 1; src <= 2; ++src) {
            const double closed = avg_aoi_closed(d, two_src, src);
            const SimMetric& m = r.mean[src - 1];
            CHECK(std::abs(m.estimate - closed) < 4.0 * m.stderr_mean);
            CHECK(m.ci_half_width < 0.05 * closed);
        }
        for (size_t j = 0; j < c.mgf_s_values.size(); ++j) {
            const double closed =
                mgf_closed(d, two_src, 1, c.mgf_s_values[j]);
            const SimMetric& m = r.mgf[0][j];
            CHECK(std::abs(m.estimate - closed) < 4.0 * m.stderr_mean);
        }
    }
}

TEST_CASE("second moment tracks the explicit formulas") {
    SimConfig c;
    c.horizon = 4e5;
    c.seed = 11;
    c.replications = 2;
    SimResult r = replicate(two_src, Discipline::PS, c);
    const double closed = moments_b2(Discipline::PS, two_src, 1).second;
    const SimMetric& m = r.second_moment[0];
    CHECK(std::abs(m.estimate - closed) < 4.0 * m.stderr_mean);
}

TEST_CASE("doubling every rate halves the mean age") {
    SimConfig c;
    c.horizon = 2e5;
    c.seed = 3;
    c.replications = 2;
    SystemParams fast = two_src;
    for (double& l : fast.arrival_rates) l *= 2.0;
    fast.energy_rate *= 2.0;
    fast.service_rate *= 2.0;
    SimResult slow = replicate(two_src, Discipline::WP, c);
    SimResult quick = replicate(fast, Discipline::WP, c);
    const double expected = slow.mean[0].estimate / 2.0;
    CHECK(std::abs(quick.mean[0].estimate - expected) <
          4.0 * (quick.mean[0].stderr_mean + slow.mean[0].stderr_mean));
}

TEST_CASE("pooled intervals at equal total time, 20 trials") {
    // 8 replications of T/8 vs one run of T: the pooled interval must not
    // be wider on average (more batch samples, smaller t quantile). The
    // horizon keeps every batch much longer than the age autocorrelation
    // time, the regime batch means are valid in.
    SimConfig one = quick_config();
    one.horizon = 8e5;
    one.replications = 1;
    SimConfig eight = one;
    eight.horizon = 1e5;
    eight.replications = 8;
    double ratio_sum = 0.0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        one.seed = eight.seed = seed;
        SimResult a = replicate(two_src, Discipline::PS, one);
        SimResult b = replicate(two_src, Discipline::PS, eight);
        ratio_sum += b.mean[0].ci_half_width / a.mean[0].ci_half_width;
    }
    CHECK(ratio_sum / 20.0 <= 1.05);
}

TEST_CASE("event trace is emitted behind the flag") {
    SimConfig c = quick_config();
    c.horizon = 50.0;
    std::ostringstream trace;
    simulate(two_src, Discipline::WP, c, &trace);
    const std::string s = trace.str();
    CHECK(s.find("event=arrival") != std::string::npos);
    CHECK(s.find("event=harvest") != std::string::npos);
    CHECK(s.find("battery=") != std::string::npos);
    CHECK(s.find("aoi=[") != std::string::npos);
}

TEST_CASE("config validation") {
    SimConfig c;
    c.horizon = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.batches = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SimConfig{};
    c.warmup_fraction = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
