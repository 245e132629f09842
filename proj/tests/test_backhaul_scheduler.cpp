#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "edgeho/backhaul_scheduler.hpp"
#include "edgeho/delay_analysis.hpp"
#include "edgeho/oracle.hpp"
#include "edgeho/rng.hpp"

using namespace edgeho;

TEST_CASE("build_schedule hand-checked two-UE case") {
    Instance inst({{0, 0.0, 1000}, {1, 1.0, 2000}});
    BackhaulLink link{500.0, 1.0};
    auto sched = build_schedule(inst, link, 0.0);
    REQUIRE(sched.segments.size() == 2);
    CHECK(sched.segments[0].ue_id == 0);
    CHECK(sched.segments[0].t_start == doctest::Approx(0.0));
    CHECK(sched.segments[0].t_end == doctest::Approx(2.0));
    CHECK(sched.segments[1].ue_id == 1);
    CHECK(sched.segments[1].t_start == doctest::Approx(2.0));
    CHECK(sched.segments[1].t_end == doctest::Approx(6.0));
    CHECK(sched.completion[0] == doctest::Approx(2.0));
    CHECK(sched.completion[1] == doctest::Approx(6.0));
    // both meet tau_i + 5
    CHECK(sched.completion[0] <= 0.0 + 5.0 + 1e-9);
    CHECK(sched.completion[1] <= 1.0 + 5.0 + 1e-9);
    CHECK(verify_schedule(sched, inst, link, 0.0).ok);
}

TEST_CASE("build_schedule trivial cases") {
    Instance inst({{0, 0.3, 1000}, {1, 0.7, 2000}});
    BackhaulLink link{500.0, 1.0};

    auto empty = build_schedule(inst, link, 2000.0);
    CHECK(empty.segments.empty());
    CHECK(empty.completion[0] == 0.3);
    CHECK(empty.completion[1] == 0.7);

    Instance one({{0, 0.25, 800}});
    auto single = build_schedule(one, link, 300.0);
    REQUIRE(single.segments.size() == 1);
    CHECK(single.segments[0].t_start == doctest::Approx(0.25));
    CHECK(single.segments[0].t_end == doctest::Approx(0.25 + 500.0 / 500.0));
}

TEST_CASE("schedule attains the closed-form bound on random instances") {
    Rng rng(41);
    for (int trial = 0; trial < 500; ++trial) {
        Instance inst = random_instance(rng, 1 + int(rng.uniform_int(0, 7)), rng.uniform(0.0, 2.0), 0, 4000);
        BackhaulLink link{rng.uniform(200.0, 20000.0), 1.0};
        const double l = rng.uniform(0.0, double(inst.c_max()));
        auto sched = build_schedule(inst, link, l);
        const double d_star = min_transfer_delay(inst, link, l);

        double worst = 0.0;
        for (std::size_t i = 0; i < inst.size(); ++i)
            worst = std::max(worst, sched.completion[i] - inst[i].tau);
        CHECK(worst <= d_star + 1e-9);

        bool has_demand = false;
        for (const auto& ue : inst.ues())
            if (token_split(ue, l).n_transfer > 0.0) has_demand = true;
        if (has_demand) CHECK(worst == doctest::Approx(d_star).epsilon(1e-9));

        CHECK(verify_schedule(sched, inst, link, l).ok);

        // work conservation: busy time >= S_K(L)/R, equality when never starved
        double busy = 0.0;
        for (const auto& seg : sched.segments) busy += seg.t_end - seg.t_start;
        const double lower = cumulative_remaining(inst, l, inst.size()) / normalized_rate(link);
        CHECK(busy >= lower - 1e-9);
    }
}

TEST_CASE("determinism: identical inputs give identical schedules") {
    Rng rng(77);
    Instance inst = random_instance(rng, 6, 1.5, 0, 3000);
    BackhaulLink link{4321.0, 1.0};
    auto a = build_schedule(inst, link, 512.0);
    auto b = build_schedule(inst, link, 512.0);
    REQUIRE(a.segments.size() == b.segments.size());
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
        CHECK(a.segments[i].t_start == b.segments[i].t_start);
        CHECK(a.segments[i].t_end == b.segments[i].t_end);
        CHECK(a.segments[i].ue_id == b.segments[i].ue_id);
    }
}

TEST_CASE("scheduler switches only at arrivals or completions") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        Instance inst = random_instance(rng, 5, 1.0, 1, 2000);
        BackhaulLink link{rng.uniform(500.0, 5000.0), 1.0};
        auto sched = build_schedule(inst, link, rng.uniform(0.0, double(inst.c_max())));
        for (std::size_t i = 0; i + 1 < sched.segments.size(); ++i) {
            if (sched.segments[i].t_end != sched.segments[i + 1].t_start) continue;
            const double boundary = sched.segments[i].t_end;
            bool is_arrival = false;
            for (const auto& ue : inst.ues())
                if (std::abs(ue.tau - boundary) < 1e-9) is_arrival = true;
            bool is_completion = false;
            for (double c : sched.completion)
                if (std::abs(c - boundary) < 1e-9) is_completion = true;
            CHECK((is_arrival || is_completion));
        }
    }
}

TEST_CASE("verify_schedule flags constructed violations") {
    Instance inst({{0, 1.0, 1000}});
    BackhaulLink link{500.0, 1.0};

    RateSchedule early;
    early.segments = {{0.5, 2.5, 0, 500.0}};  // starts before tau
    early.completion = {2.5};
    early.deadlines = {3.0};
    CHECK_FALSE(verify_schedule(early, inst, link, 0.0).ok);

    RateSchedule under;
    under.segments = {{1.0, 1.0 + 999.0 / 500.0, 0, 500.0}};  // one token short
    under.completion = {1.0 + 999.0 / 500.0};
    under.deadlines = {3.0};
    CHECK_FALSE(verify_schedule(under, inst, link, 0.0).ok);
}

TEST_CASE("schedule CSV serialization") {
    Instance inst({{0, 0.0, 100}});
    BackhaulLink link{100.0, 1.0};
    auto sched = build_schedule(inst, link, 0.0);
    std::ostringstream os;
    write_schedule_csv(os, sched);
    CHECK(os.str() == "t_start,t_end,ue_id,rate_tokens_per_s\n0,1,0,100\n");
}
