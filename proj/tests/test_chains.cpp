#include "aoi/chains.hpp"

#include "aoi/shs.hpp"
#include "grid.hpp"

#include <doctest.h>

#include <set>
#include <string>

using namespace aoi;

namespace {

SystemParams two_sources{2, {0.6, 0.4}, 1.5, 1.0, 1};

}  // namespace

TEST_CASE("state and transition counts") {
    SystemParams p = two_sources;
    SUBCASE("wp: 2B+1 states, 4 transition families per level") {
        p.battery_capacity = 1;
        ShsModel m = build_wp(p, 1);
        CHECK(m.states.size() == 3);
        CHECK(m.transitions.size() == 4);
        p.battery_capacity = 2;
        m = build_wp(p, 1);
        CHECK(m.states.size() == 5);
        CHECK(m.transitions.size() == 8);
        p.battery_capacity = 3;
        CHECK(build_wp(p, 1).states.size() == 7);
    }
    SUBCASE("ps adds two self-transitions per busy state") {
        p.battery_capacity = 1;
        CHECK(build_ps(p, 1).transitions.size() == 6);
        p.battery_capacity = 2;
        CHECK(build_ps(p, 1).transitions.size() == 12);
    }
    SUBCASE("sa: 1 + B(N+1) states") {
        p.battery_capacity = 1;
        CHECK(build_sa(p, 1).states.size() == 4);
        SystemParams q{3, {0.4, 0.3, 0.3}, 1.0, 1.0, 2};
        CHECK(build_sa(q, 1).states.size() == 9);
    }
}

TEST_CASE("model dump is a stable golden rendering") {
    SystemParams p = two_sources;
    CHECK(build_wp(p, 1).dump() ==
          "l=1 1->2 rate=eta A=[[1,0],[0,0]]\n"
          "l=2 2->3 rate=lambda_s A=[[1,0],[0,0]]\n"
          "l=3 2->3 rate=lambda_other A=[[1,1],[0,0]]\n"
          "l=4 3->1 rate=mu A=[[0,0],[1,0]]\n");
    CHECK(build_sa(p, 1).dump() ==
          "l=1 1->2 rate=eta A=[[1,0],[0,0]]\n"
          "l=2 2->3 rate=lambda_1 A=[[1,0],[0,0]]\n"
          "l=3 3->3 rate=lambda_1 A=[[1,0],[0,0]]\n"
          "l=4 3->1 rate=mu A=[[0,0],[1,0]]\n"
          "l=5 2->4 rate=lambda_2 A=[[1,0],[0,0]]\n"
          "l=6 4->4 rate=lambda_2 A=[[1,0],[0,0]]\n"
          "l=7 4->1 rate=mu A=[[1,0],[0,0]]\n");
}

TEST_CASE("outgoing transition rates match the model semantics") {
    SystemParams p = two_sources;
    p.battery_capacity = 2;
    ShsModel m = build_wp(p, 1);
    // Idle states below capacity emit {eta, lambda_s, lambda_other};
    // the full idle state has no harvest; busy states emit only mu.
    auto outgoing = [&](int id) {
        std::multiset<std::string> labels;
        for (const auto& t : m.transitions)
            if (t.from == id) labels.insert(t.rate_label);
        return labels;
    };
    CHECK(outgoing(1) == std::multiset<std::string>{"eta"});
    CHECK(outgoing(2) ==
          std::multiset<std::string>{"eta", "lambda_s", "lambda_other"});
    CHECK(outgoing(4) == std::multiset<std::string>{"lambda_s",
                                                    "lambda_other"});
    CHECK(outgoing(3) == std::multiset<std::string>{"mu"});
    CHECK(outgoing(5) == std::multiset<std::string>{"mu"});
}

TEST_CASE("closed steady state equals the engine on the full grid") {
    for (const GridCell& cell : test_grid()) {
        for (Discipline d :
             {Discipline::WP, Discipline::PS, Discipline::SA}) {
            SteadyState closed = steady_state_closed(d, cell.params, 1);
            SteadyState engine = steady_state(build_chain(d, cell.params, 1));
            REQUIRE(closed.pi.size() == engine.pi.size());
            for (size_t q = 0; q < closed.pi.size(); ++q)
                CHECK(closed.pi[q] ==
                      doctest::Approx(engine.pi[q]).epsilon(1e-10));
        }
    }
}

TEST_CASE("self-transitions leave the steady state unchanged (wp vs ps)") {
    for (const GridCell& cell : test_grid()) {
        SteadyState wp = steady_state(build_wp(cell.params, 1));
        SteadyState ps = steady_state(build_ps(cell.params, 1));
        for (size_t q = 0; q < wp.pi.size(); ++q)
            CHECK(ps.pi[q] == doctest::Approx(wp.pi[q]).epsilon(1e-12));
    }
}

TEST_CASE("battery-level marginals sum to one") {
    for (const GridCell& cell : test_grid()) {
        SteadyState pi = steady_state_closed(Discipline::WP, cell.params, 1);
        double sum = 0.0;
        for (double x : pi.pi) sum += x;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("single-source sa chain is the ps chain") {
    SystemParams p{1, {0.8}, 1.3, 1.0, 3};
    ShsModel sa = build_sa(p, 1);
    ShsModel ps = build_ps(p, 1);
    REQUIRE(sa.states.size() == ps.states.size());
    // Same state numbering, same rates and reset maps transition-wise.
    REQUIRE(sa.transitions.size() == ps.transitions.size());
    auto key = [](const ShsModel& m) {
        std::multiset<std::string> k;
        for (const auto& t : m.transitions)
            k.insert(std::to_string(t.from) + ">" + std::to_string(t.to) +
                     "@" + std::to_string(t.rate) + ":" +
                     std::to_string(t.reset.m[0][0]) +
                     std::to_string(t.reset.m[0][1]) +
                     std::to_string(t.reset.m[1][0]) +
                     std::to_string(t.reset.m[1][1]));
        return k;
    };
    CHECK(key(sa) == key(ps));

    CHECK(average_aoi(sa) == doctest::Approx(average_aoi(ps)).epsilon(1e-12));
    CHECK(mgf(sa, 0.3) == doctest::Approx(mgf(ps, 0.3)).epsilon(1e-12));
}
