#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "edgeho/delay_analysis.hpp"
#include "edgeho/oracle.hpp"
#include "edgeho/rng.hpp"

using namespace edgeho;

namespace {
const PrefillProfile kDefaultProfile{9.4267e-5, 2.4e-3, 0.01};
}

TEST_CASE("prefill_start_time ceiling arithmetic") {
    PrefillProfile prof{0.0, 0.0, 0.01};
    CHECK(prefill_start_time(Instance({{0, 1.234, 1}}), prof) == doctest::Approx(1.24).epsilon(1e-12));
    CHECK(prefill_start_time(Instance({{0, 1.30, 1}}), prof) == doctest::Approx(1.30).epsilon(1e-12));
    CHECK(prefill_start_time(Instance({{0, 0.005, 1}}), prof) == doctest::Approx(0.01).epsilon(1e-12));
    // depends on the latest trigger time
    CHECK(prefill_start_time(Instance({{0, 0.002, 1}, {1, 0.031, 1}}), prof) ==
          doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("worst_prefill_delay") {
    // t_s = 1.3 from tau_K = 1.295
    Instance inst({{0, 1.0, 3072}, {1, 1.295, 3072}});
    const double d = worst_prefill_delay(inst, kDefaultProfile, 3072.0);
    CHECK(d == doctest::Approx(1.3 + 9.4267e-5 * 3072 + 2.4e-3 - 1.0).epsilon(1e-12));
    CHECK(d == doctest::Approx(0.59199).epsilon(1e-4));

    CHECK(worst_prefill_delay(inst, kDefaultProfile, 0.0) == 0.0);
    CHECK(worst_prefill_delay(inst, kDefaultProfile, 0.0,
                              DelayOptions{true}) == doctest::Approx(1.3 + 2.4e-3 - 1.0));

    Instance single({{0, 0.0, 1000}});
    CHECK(worst_prefill_delay(single, PrefillProfile{1e-4, 0.0, 0.01}, 1000.0) ==
          doctest::Approx(0.1).epsilon(1e-12));

    CHECK_THROWS_AS(worst_prefill_delay(inst, kDefaultProfile, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(worst_prefill_delay(inst, kDefaultProfile, 4000.0), std::invalid_argument);
}

TEST_CASE("cumulative_remaining") {
    Instance inst({{0, 0.0, 1000}, {1, 1.0, 2000}});
    CHECK(cumulative_remaining(inst, 0.0, 2) == 3000.0);
    CHECK(cumulative_remaining(inst, 1500.0, 2) == 500.0);
    CHECK(cumulative_remaining(inst, 2000.0, 2) == 0.0);
    CHECK(cumulative_remaining(inst, 500.0, 1) == 500.0);
    CHECK_THROWS_AS(cumulative_remaining(inst, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(cumulative_remaining(inst, 0.0, 3), std::invalid_argument);
}

TEST_CASE("min_transfer_delay closed form") {
    Instance inst({{0, 0.0, 1000}, {1, 1.0, 2000}});
    BackhaulLink link{500.0, 1.0};
    CHECK(min_transfer_delay(inst, link, 0.0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(min_transfer_delay(inst, link, 2000.0) == 0.0);

    Instance single({{0, 0.0, 1000}});
    CHECK(min_transfer_delay(single, BackhaulLink{1000.0, 1.0}, 250.0) ==
          doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("min_transfer_delay monotone, scale covariant, bounded") {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        Instance inst = random_instance(rng, 1 + int(rng.uniform_int(0, 7)), rng.uniform(0.0, 2.0), 0, 4000);
        BackhaulLink link{rng.uniform(200.0, 20000.0), 1.0};
        const double c_max = double(inst.c_max());
        double prev = 1e18;
        for (int i = 0; i <= 16; ++i) {
            const double l = c_max * i / 16.0;
            const double d = min_transfer_delay(inst, link, l);
            CHECK(d <= prev + 1e-12);
            prev = d;

            // lower-bound property: S_k(L) <= R (D + tau_k - tau_1) + eps
            const double rate = normalized_rate(link);
            for (std::size_t k = 1; k <= inst.size(); ++k) {
                CHECK(cumulative_remaining(inst, l, k) <=
                      rate * (d + inst[k - 1].tau - inst.tau_first()) + 1e-9 * rate);
            }

            // scale covariance in (C, L, R); token counts are integers, so
            // scale the rate only when the scaled tokens stay integral
            std::vector<UEContext> scaled;
            for (auto ue : inst.ues()) scaled.push_back({ue.id, ue.tau, ue.c_tokens * 3});
            CHECK(min_transfer_delay(Instance(scaled), BackhaulLink{link.capacity_bps * 3.0, 1.0},
                                     l * 3.0) == doctest::Approx(d).epsilon(1e-9));
        }
        CHECK(min_transfer_delay(inst, link, c_max) == 0.0);
    }
}

TEST_CASE("worst_prefill_delay monotone in L") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Instance inst = random_instance(rng, 4, 1.0, 1, 4000);
        PrefillProfile prof{rng.uniform(0.0, 3e-4), rng.uniform(0.0, 5e-3), 0.01};
        double prev = -1e18;
        for (int i = 0; i <= 32; ++i) {
            const double l = double(inst.c_max()) * i / 32.0;
            const double d = worst_prefill_delay(inst, prof, l);
            CHECK(d >= prev - 1e-12);
            prev = d;
        }
    }
}

TEST_CASE("value_function boundaries") {
    Instance inst({{0, 0.0, 1000}, {1, 1.0, 2000}});
    BackhaulLink link{500.0, 1.0};
    auto at0 = value_function(inst, link, kDefaultProfile, 0.0);
    CHECK(at0.v == at0.d_transfer);
    CHECK(at0.d_prefill == 0.0);

    auto atmax = value_function(inst, link, kDefaultProfile, 2000.0);
    CHECK(atmax.d_transfer == 0.0);
    CHECK(atmax.v == atmax.d_prefill);
    CHECK(atmax.v == doctest::Approx(std::max(at0.d_prefill, atmax.d_prefill)));
}

TEST_CASE("optimal_prefill_length single-UE closed form") {
    // aL = (C-L)/R with t_s = 0, b = 0: L* = C/(R a + 1) * R ... = 1/(1.1e-3)
    Instance inst({{0, 0.0, 1000}});
    BackhaulLink link{1000.0, 1.0};
    PrefillProfile prof{1e-4, 0.0, 0.01};
    auto plan = optimal_prefill_length(inst, link, prof);
    CHECK(plan.l_star == doctest::Approx(1.0 / 1.1e-3).epsilon(1e-9));
    CHECK(plan.breakdown.v == doctest::Approx(1e-4 / 1.1e-3).epsilon(1e-9));
    CHECK(plan.interior);
    CHECK(std::abs(plan.breakdown.d_prefill - plan.breakdown.d_transfer) <= 1e-9);

    // grid confirmation at dL = 0.01
    double grid_min = 1e18;
    for (double l = 0.0; l <= 1000.0; l += 0.01)
        grid_min = std::min(grid_min, value_function(inst, link, prof, l).v);
    CHECK(plan.breakdown.v <= grid_min + 1e-9);
}

TEST_CASE("optimal_prefill_length boundary cases") {
    Instance inst({{0, 0.1, 1500}, {1, 0.4, 3000}});

    // near-infinite backhaul: transfer is free, stay at L = 0
    BackhaulLink fast{1e18, 1.0};
    auto plan = optimal_prefill_length(inst, fast, kDefaultProfile);
    CHECK(plan.l_star == 0.0);
    CHECK(plan.breakdown.v == doctest::Approx(0.0).epsilon(1e-9));

    // free prefill with t_s = tau_1: equalizer sits at C_max
    Instance single({{0, 0.0, 1000}});
    PrefillProfile free_prefill{0.0, 0.0, 0.01};
    BackhaulLink slow{100.0, 1.0};
    auto plan2 = optimal_prefill_length(single, slow, free_prefill);
    CHECK(plan2.l_star == doctest::Approx(1000.0));
    CHECK(plan2.breakdown.v == doctest::Approx(0.0));

    // all C_i equal to zero
    Instance zeros({{0, 0.2, 0}, {1, 0.5, 0}});
    auto plan3 = optimal_prefill_length(zeros, slow, kDefaultProfile);
    CHECK(plan3.l_star == 0.0);
    CHECK(plan3.breakdown.v == 0.0);
}

TEST_CASE("optimal_prefill_length ties break toward the smallest L") {
    // a = 0, b = 0 but t_s > tau_1: f is the positive constant t_s - tau_1,
    // so every L past the first equalizer is optimal; the smallest is returned.
    Instance inst({{0, 0.0, 1000}, {1, 0.395, 1000}});
    PrefillProfile prof{0.0, 0.0, 0.01};
    BackhaulLink link{1000.0, 1.0};
    auto plan = optimal_prefill_length(inst, link, prof);
    const double f = plan.t_start_prefill - inst.tau_first();
    CHECK(plan.breakdown.v == doctest::Approx(f).epsilon(1e-9));
    // any smaller L must be strictly worse
    CHECK(value_function(inst, link, prof, plan.l_star * 0.99).v > plan.breakdown.v + 1e-12);
}

TEST_CASE("plan_for_strategy dispatch and dominance") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        Instance inst = random_instance(rng, 1 + int(rng.uniform_int(0, 5)), rng.uniform(0.0, 1.0), 0, 3000);
        BackhaulLink link{rng.uniform(500.0, 20000.0), 1.0};
        auto ct = plan_for_strategy(Strategy::ctHO, inst, link, kDefaultProfile);
        auto t = plan_for_strategy(Strategy::tHO, inst, link, kDefaultProfile);
        auto c = plan_for_strategy(Strategy::cHO, inst, link, kDefaultProfile);
        CHECK(t.l_star == double(inst.c_max()));
        CHECK(c.l_star == 0.0);
        CHECK(ct.breakdown.v <= t.breakdown.v + 1e-12);
        CHECK(ct.breakdown.v <= c.breakdown.v + 1e-12);

        // tHO has no transfer term, so it ignores the link
        auto t2 = plan_for_strategy(Strategy::tHO, inst, BackhaulLink{link.capacity_bps * 10, 1.0},
                                    kDefaultProfile);
        CHECK(t2.breakdown.v == t.breakdown.v);

        for (std::size_t i = 0; i < inst.size(); ++i) {
            auto expect = token_split(inst[i], ct.l_star);
            CHECK(ct.splits[i].n_prefill == expect.n_prefill);
            CHECK(ct.splits[i].n_transfer == expect.n_transfer);
        }
    }
    Instance inst({{0, 0.0, 100}});
    CHECK_THROWS_AS(
        plan_for_strategy(Strategy::fixedL, inst, BackhaulLink{100.0, 1.0}, kDefaultProfile, {}, 200.0),
        std::invalid_argument);
}
