#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "fibweave/pipeline.hpp"
#include "fibweave/report.hpp"

using namespace fibweave;
using Q = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

namespace {

const double kTau = (1 + std::sqrt(5.0)) / 2;

template <class T>
T power(T x, int n) {
    T r(1);
    while (n-- > 0) r *= x;
    return r;
}

// Nontrivial probability of a balanced merge tree, level by level.
template <class T>
T tree_oracle(const T& p, const T& eps, int n) {
    T x = p;
    for (int w = n; w > 1; w /= 2) x = 2 * x * (1 - x) + x * x * (1 - eps);
    return x;
}

// Markov chain over the composite's charge as pairs are added one at a time.
template <class T>
T one_mobile_oracle(const ErrorModel<T>& m, int n) {
    T a = m.p * (1 - m.eps_add);  // a fresh pair arrives nontrivial
    T q = a;
    for (int k = 1; k < n; ++k) q = q * (1 - a) + (1 - q) * a + q * a * (1 - m.eps_merge);
    return q * q * (1 - m.eps_final);
}

bool within_3sigma(const SampleStats& s, double exact) {
    double se = std::max(s.std_error(), 1.0 / static_cast<double>(s.trials));
    return std::abs(s.mean() - exact) <= 3 * se;
}

}  // namespace

TEST(Formulas, MergeSuccess) {
    EXPECT_DOUBLE_EQ(merge_success_probability(0.5, 0.0), 0.75);
    EXPECT_DOUBLE_EQ(merge_success_probability(1.0, 0.2), 0.8);
    EXPECT_NEAR(merge_success_probability(0.3, 0.01), 0.5091, 1e-15);
    EXPECT_THROW(merge_success_probability(1.5, 0.0), std::domain_error);
    EXPECT_THROW(merge_success_probability(0.5, -0.1), std::domain_error);
}

TEST(Formulas, MergeMatchesCaseSum) {
    for (double p : {0.1, 0.3, 0.7})
        for (double e : {0.0, 0.05, 1.0})
            EXPECT_NEAR(merge_success_probability(p, e), 2 * p * (1 - p) + p * p * (1 - e), 1e-15);
}

TEST(Formulas, OneMobileFloor) {
    EXPECT_EQ(one_mobile_floor(Q(1, 2), 4), Q(225, 256));
    EXPECT_NEAR(one_mobile_floor(0.5, 4), 0.87891, 1e-5);
    EXPECT_DOUBLE_EQ(one_mobile_floor(1.0, 1), 1.0);
    EXPECT_GE(one_mobile_floor(0.5, 8), one_mobile_asymptotic_bound(4.0));
    EXPECT_THROW(one_mobile_floor(0.0, 3), std::domain_error);
}

TEST(Plan, OneMobileSingleDegenerateCase) {
    auto p = plan_one_mobile(1, 0, 0);
    EXPECT_EQ(p.count(StepKind::Add), 2u);
    EXPECT_EQ(p.count(StepKind::Integrate), 0u);
    EXPECT_EQ(p.count(StepKind::IntegrateAcross), 1u);
    EXPECT_EQ(p.count(StepKind::InverseAdd), 1u);
    EXPECT_EQ(p.gadget_steps(), 4u);
    std::vector<StepKind> gadgets;
    for (const auto& s : p.steps)
        if (s.kind != StepKind::MoveStar) gadgets.push_back(s.kind);
    EXPECT_EQ(gadgets, (std::vector<StepKind>{StepKind::Add, StepKind::Add, StepKind::IntegrateAcross, StepKind::InverseAdd}));
}

TEST(Plan, OneMobileTwoPerSide) {
    auto p = plan(Scheme::OneMobile, 2, 2);
    EXPECT_EQ(p.count(StepKind::Add), 4u);
    EXPECT_EQ(p.count(StepKind::Integrate), 2u);
    EXPECT_EQ(p.count(StepKind::IntegrateAcross), 1u);
    EXPECT_EQ(p.count(StepKind::InverseAdd), 1u);
    EXPECT_EQ(p.steps.back().kind, StepKind::InverseAdd);
}

TEST(Plan, HierarchicalTree) {
    auto p = plan(Scheme::Hierarchical, 4, 1);
    ASSERT_EQ(p.count(StepKind::Merge), 3u);
    EXPECT_EQ(p.steps[0].side, 1);
    EXPECT_EQ(p.steps[1].side, 1);
    EXPECT_EQ(p.steps[2].side, 2);
    EXPECT_EQ(plan(Scheme::Hierarchical, 16, 0).count(StepKind::Merge), 15u);
}

TEST(Plan, Rejections) {
    EXPECT_THROW(plan(Scheme::Hierarchical, 3, 1), PlanError);
    EXPECT_THROW(plan(Scheme::Hierarchical, 1, 1), PlanError);
    EXPECT_THROW(plan(Scheme::OneMobile, 2, 1), PlanError);
    EXPECT_THROW(plan(Scheme::OneMobile, 0, 2), PlanError);
    EXPECT_THROW(parse_scheme("flat"), std::invalid_argument);
    EXPECT_EQ(parse_scheme("one-mobile"), Scheme::OneMobile);
}

TEST(ExactSuccess, HierarchicalPerfectExamples) {
    EXPECT_EQ(exact_success_probability(plan_hierarchical(4, 1), ErrorModel<Q>::perfect(Q(1, 2))), Q(15, 16));
    EXPECT_NEAR(exact_success_probability(plan_hierarchical(4, 1), ErrorModel<double>::perfect(0.5)), 0.9375, 1e-15);
    for (Q p : {Q(1, 3), Q(2, 7), Q(9, 10)})
        EXPECT_EQ(exact_success_probability(plan_hierarchical(2, 0), ErrorModel<Q>::perfect(p)), 1 - (1 - p) * (1 - p));
}

TEST(ExactSuccess, PerfectClosedFormsAsRationals) {
    for (Q p : {Q(1, 3), Q(1, 2), Q(3, 10), Q(9, 10)}) {
        for (int n : {2, 4, 8}) {
            auto h = exact_success_probability(plan_hierarchical(n, 0), ErrorModel<Q>::perfect(p));
            EXPECT_EQ(h, 1 - power(1 - p, n)) << n;
        }
        for (int n : {1, 2, 3, 5, 8}) {
            auto o = exact_success_probability(plan_one_mobile(n, 0, 0), ErrorModel<Q>::perfect(p));
            EXPECT_EQ(o, power(1 - power(1 - p, n), 2)) << n;
            EXPECT_EQ(o, one_mobile_floor(p, n));
        }
    }
}

TEST(ExactSuccess, HierarchicalWithErrorMatchesTreeOracle) {
    for (Q eps : {Q(1, 100), Q(1, 7)})
        for (int n : {2, 4, 8})
            EXPECT_EQ(exact_success_probability(plan_hierarchical(n, 1), ErrorModel<Q>{Q(3, 10), 0, eps, 0}),
                      tree_oracle(Q(3, 10), eps, n));
    EXPECT_EQ(exact_success_probability(plan_hierarchical(2, 1), ErrorModel<Q>{Q(3, 10), 0, Q(1, 100), 0}),
              Q(5091, 10000));
}

TEST(ExactSuccess, OneMobileWithErrorMatchesMarkovOracle) {
    ErrorModel<Q> m{Q(2, 5), Q(1, 50), Q(1, 30), Q(1, 20)};
    for (int n : {1, 2, 3, 6}) EXPECT_EQ(exact_success_probability(plan_one_mobile(n, 0, 0), m), one_mobile_oracle(m, n)) << n;
}

TEST(ExactSuccess, Budget) {
    EXPECT_THROW(exact_success_probability(plan_hierarchical(32, 0), ErrorModel<double>::perfect(0.5)),
                 EnumerationBudgetExceeded);
}

TEST(MonteCarlo, PerfectOneMobileExample) {
    auto s = monte_carlo(plan_one_mobile(4, 0, 0), ErrorModel<double>::perfect(0.5), 100000, 7);
    EXPECT_TRUE(within_3sigma(s, 225.0 / 256.0)) << s.mean() << " +- " << s.std_error();
}

TEST(MonteCarlo, AgreesWithExactWithErrors) {
    ErrorModel<double> m{0.3, 0.02, 0.05, 0.01};
    for (int n : {2, 4}) {
        auto h = plan_hierarchical(n, 1);
        ErrorModel<double> hm{0.3, 0, 0.05, 0};
        EXPECT_TRUE(within_3sigma(monte_carlo(h, hm, 100000, 11), exact_success_probability(h, hm)));
        auto o = plan_one_mobile(n, 0, 0);
        EXPECT_TRUE(within_3sigma(monte_carlo(o, m, 100000, 13), exact_success_probability(o, m)));
    }
}

TEST(MonteCarlo, CertainPairsAlwaysSucceed) {
    auto s = monte_carlo(plan_one_mobile(3, 0, 0), ErrorModel<double>::perfect(1.0), 5000, 1);
    EXPECT_EQ(s.successes, s.trials);
    auto h = monte_carlo(plan_hierarchical(8, 0), ErrorModel<double>::perfect(1.0), 5000, 1);
    EXPECT_EQ(h.successes, h.trials);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
    auto p = plan_one_mobile(4, 0, 0);
    auto m = ErrorModel<double>::perfect(0.5);
    auto a = monte_carlo(p, m, 20000, 42, 1);
    auto b = monte_carlo(p, m, 20000, 42, 4);
    auto c = monte_carlo(p, m, 20000, 42);
    EXPECT_EQ(a.successes, b.successes);
    EXPECT_EQ(a.successes, c.successes);
    EXPECT_NE(a.successes, monte_carlo(p, m, 20000, 43, 1).successes);
    EXPECT_THROW(monte_carlo(p, m, 0, 1), std::invalid_argument);
}

TEST(MonteCarlo, ReportsAreIdentical) {
    auto p = plan_one_mobile(2, 0, 0);
    auto m = ErrorModel<double>::perfect(0.5);
    EXPECT_EQ(to_json(make_report(p, m, true, 1000, 9)).dump(), to_json(make_report(p, m, true, 1000, 9)).dump());
}

TEST(Cost, HierarchicalExamples) {
    auto c2 = hierarchical_cost(2, 1);
    EXPECT_EQ(c2.gadget_braids, 13u);
    EXPECT_EQ(c2.total_braids, 13u);
    auto c4 = hierarchical_cost(4, 1);
    ASSERT_EQ(c4.levels.size(), 2u);
    EXPECT_EQ(c4.levels[0].braids, 2u * 13u);
    EXPECT_EQ(c4.levels[1].composite_size, 2u);
    EXPECT_EQ(c4.levels[1].braids, 13u * 2u * 2u);
    EXPECT_EQ(c4.total_braids, 78u);
    EXPECT_EQ(c4.composite_level_braids, 39u);
    for (int j = 0; j <= 4; ++j) EXPECT_EQ(hierarchical_cost(2, j).gadget_braids, word_metrics(build_M(j, s_word())).elementary_braid_count);
}

TEST(Cost, OneMobileInvocations) {
    auto g = compile_gadgets(1, 2);
    auto sched = one_mobile_schedule(1, 1, g);
    EXPECT_EQ(sched.gadget_invocations, 4u);
    auto c = one_mobile_cost(1, 1, 2);
    EXPECT_EQ(c.composite_level_braids, 3 * g.add.active_move_count() + g.integrate.active_move_count());
    EXPECT_EQ(c.total_braids, sched.steps.size());
    auto m1 = compile_to_weave(build_M(1, weave_seed()), kAddStart);
    EXPECT_EQ(g.add.active_move_count(),
              word_metrics(build_M(1, weave_seed())).elementary_braid_count + m1.closing_moves.size());
}

TEST(GadgetModel, ErrorLawsAsProbabilities) {
    auto m1 = error_model_from_gadgets(plan_one_mobile(1, 1, 2), 0.5);
    EXPECT_NEAR(m1.eps_add / std::pow(kTau, -20), 1.0, 1e-9);
    EXPECT_NEAR(m1.eps_merge / std::pow(kTau, -25), 1.0, 1e-9);
    auto h = error_model_from_gadgets(plan_hierarchical(2, 2), 0.5);
    EXPECT_NEAR(h.eps_merge / std::pow(kTau, -50), 1.0, 1e-9);
}

TEST(EndToEnd, SinglePairsBothNontrivial) {
    auto r = run_end_to_end({1}, {1}, 1);
    EXPECT_GE(r.prob1, 1 - std::pow(kTau, -20) - 1e-12);
    EXPECT_NEAR(r.prob1, 0.999934, 1e-6);
    EXPECT_EQ(r.anyons, 6u);
}

TEST(EndToEnd, TrivialLeftGivesZero) {
    EXPECT_NEAR(run_end_to_end({0}, {1}, 1).prob1, 0.0, 1e-12);
    EXPECT_NEAR(run_end_to_end({0}, {1}, 0).prob1, 0.0, 1e-12);
}

TEST(EndToEnd, OrderZeroMixedPairsFollowTheAddError) {
    // With order-0 gadgets the add step leaves a nontrivial pair trivial with probability tau^-4.
    auto r = run_end_to_end({1, 0}, {0, 1}, 0);
    EXPECT_NEAR(r.prob1, 1 - std::pow(kTau, -4), 1e-9);
    auto m = error_model_from_gadgets(plan_one_mobile(2, 0, 0), 0.5);
    EXPECT_NEAR(r.prob1, exact_assignment({1, 0}, {0, 1}, m).prob1, 1e-9);
}

TEST(EndToEnd, EnumerationMatchesExactModel) {
    auto m = error_model_from_gadgets(plan_one_mobile(2, 1, 2), 0.5);
    for (unsigned mask = 0; mask < 16; ++mask) {
        std::vector<int> left{int(mask & 1), int((mask >> 1) & 1)};
        std::vector<int> right{int((mask >> 2) & 1), int((mask >> 3) & 1)};
        auto chain = run_end_to_end(left, right, 1, 2);
        auto exact = exact_assignment(left, right, m);
        EXPECT_NEAR(chain.prob1, exact.prob1, 1e-9) << mask;
        EXPECT_NEAR(chain.success, exact.success, 1e-9) << mask;
    }
}

TEST(EndToEnd, RejectsOversizedChains) {
    EXPECT_THROW(run_end_to_end(std::vector<int>(6, 1), std::vector<int>(6, 1), 0), std::invalid_argument);
}

TEST(AllMobile, SeedSOnTwoPairs) {
    auto w = build_M(1, s_word());
    EXPECT_NEAR(run_all_mobile(1, 0, w).second, 1.0, 1e-12);
    EXPECT_NEAR(run_all_mobile(0, 1, w).second, 1.0, 1e-12);
    EXPECT_NEAR(run_all_mobile(1, 1, w).second, 1 - std::pow(kTau, -10), 1e-12);
    EXPECT_THROW(all_mobile_generators(weave_seed()), std::invalid_argument);
}
