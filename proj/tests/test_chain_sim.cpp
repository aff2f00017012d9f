#include <gtest/gtest.h>

#include <random>

#include "fibweave/chain_sim.hpp"

using namespace fibweave;

namespace {

using C = Complex<double>;
const auto K = make_constants<double>(53);

ChainState<double> random_state(std::mt19937_64& rng, std::vector<int> charges, int total) {
    std::normal_distribution<double> nd;
    ChainState<double> s(std::move(charges), total, 53);
    double n = 0;
    for (auto p : s.paths()) {
        C a(nd(rng), nd(rng));
        n += a.norm();
        s.set_amplitude(p, a);
    }
    for (auto p : s.paths()) s.set_amplitude(p, s.amplitude(p) / std::sqrt(n));
    return s;
}

double distance(const ChainState<double>& a, const ChainState<double>& b) {
    EXPECT_EQ(a.charges(), b.charges());
    double d = 0;
    for (auto p : a.paths()) d = std::max(d, (a.amplitude(p) - b.amplitude(p)).abs());
    return d;
}

// Fibonacci by iteration: fib(1) = fib(2) = 1.
std::size_t fib(int n) {
    std::size_t a = 0, b = 1;
    for (int i = 0; i < n; ++i) std::tie(a, b) = std::pair{b, a + b};
    return a;
}

// Count fusion paths by dynamic programming over the running charge.
std::size_t count_paths(int n, int total) {
    std::size_t c0 = 1, c1 = 0;
    for (int i = 0; i < n; ++i) std::tie(c0, c1) = std::pair{c1, c0 + c1};
    return total == 0 ? c0 : c1;
}

}  // namespace

TEST(Paths, FibonacciCounts) {
    for (int n = 2; n <= 16; ++n) {
        std::vector<int> ones(n, 1);
        EXPECT_EQ(enumerate_paths(ones, 0).size(), fib(n - 1)) << n;
        EXPECT_EQ(enumerate_paths(ones, 0).size(), count_paths(n, 0)) << n;
        EXPECT_EQ(enumerate_paths(ones, 1).size(), fib(n)) << n;
    }
}

TEST(Paths, RejectsBadCharges) {
    EXPECT_THROW(ChainState<double>({1, 2}, 0, 53), std::invalid_argument);
    EXPECT_THROW(init_pairs<double>({3}, 53), std::invalid_argument);
}

TEST(InitPairs, ChargeOnePairsAreVacuumPairs) {
    auto s = init_pairs<double>({1, 1}, 53);
    EXPECT_EQ(s.size(), 4u);
    EXPECT_EQ(s.dimension(), 2u);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
    auto [p0, p1] = cut_charge_distribution(s, 2);
    EXPECT_NEAR(p0, 1.0, 1e-15);
    EXPECT_NEAR(p1, 0.0, 1e-15);
    EXPECT_NEAR(cut_charge_distribution(s, 1).second, 1.0, 1e-15);
}

TEST(InitPairs, MixedCharges) {
    auto s = init_pairs<double>({1, 0}, 53);
    EXPECT_EQ(s.dimension(), 1u);
    EXPECT_EQ(s.charges(), (std::vector<int>{1, 1, 0, 0}));
    EXPECT_NEAR(cut_charge_distribution(s, 3).first, 1.0, 1e-15);
}

TEST(Braid, SlotOutOfRange) {
    auto s = init_pairs<double>({1, 1}, 53);
    EXPECT_THROW(s.apply({0, true}, K), std::out_of_range);
    EXPECT_THROW(s.apply({4, true}, K), std::out_of_range);
    EXPECT_THROW(cut_charge_distribution(s, 4), std::out_of_range);
}

TEST(Braid, FullTwistOfVacuumPair) {
    auto s = run_program(init_pairs<double>({1}, 53), {{1, true}, {1, true}}, K);
    auto expect = K.R(0, 0) * K.R(0, 0);
    EXPECT_LT((s.amplitude(0b010) - expect).abs(), 1e-15);
    EXPECT_LT((s.amplitude(0b010) - C::polar(-8 * M_PI / 5)).abs(), 1e-15);
}

TEST(Braid, MiddleExchangeOfTwoPairsMixesCut) {
    // sigma_2 on two vacuum pairs: the middle pair fuses through S.
    auto s = braid_adjacent(init_pairs<double>({1, 1}, 53), 2, true, K);
    EXPECT_NEAR(cut_charge_distribution(s, 2).first, K.S(0, 0).norm(), 1e-15);
    EXPECT_NEAR(cut_charge_distribution(s, 2).first, 1 / (K.tau * K.tau), 1e-15);
}

TEST(Braid, SSquaredOnThreeAnyons) {
    // sigma_i^2 with x = z = 1 acts as S*S on the middle label.
    std::mt19937_64 rng(1);
    auto s = random_state(rng, {1, 1, 1}, 1);
    auto t = run_program(s, {{1, true}, {2, true}, {2, true}}, K);
    auto u = braid_adjacent(s, 1, true, K);
    auto ss = K.S * K.S;
    for (auto p : u.paths()) {
        int y = path_label(p, 2);
        C want = C::zero(53);
        for (auto q : u.paths())
            if ((q & ~0b100ull) == (p & ~0b100ull)) want += ss(y, path_label(q, 2)) * u.amplitude(q);
        EXPECT_LT((t.amplitude(p) - want).abs(), 1e-14);
    }
}

TEST(Braid, PreservesNorm) {
    std::mt19937_64 rng(2);
    for (int n = 4; n <= 8; ++n) {
        auto s = random_state(rng, std::vector<int>(n, 1), n % 2);
        std::uniform_int_distribution<int> slot(1, n - 1);
        for (int t = 0; t < 30; ++t) s.apply({slot(rng), rng() % 2 == 0}, K);
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-13);
    }
}

TEST(Braid, YangBaxter) {
    std::mt19937_64 rng(3);
    for (int n = 4; n <= 8; ++n) {
        for (int total : {0, 1}) {
            auto s = random_state(rng, std::vector<int>(n, 1), total);
            for (int i = 1; i + 1 < n; ++i)
                for (bool ccw : {true, false}) {
                    auto a = run_program(s, {{i, ccw}, {i + 1, ccw}, {i, ccw}}, K);
                    auto b = run_program(s, {{i + 1, ccw}, {i, ccw}, {i + 1, ccw}}, K);
                    EXPECT_LT(distance(a, b), 1e-13) << n << " " << i;
                }
        }
    }
}

TEST(Braid, FarGeneratorsCommute) {
    std::mt19937_64 rng(4);
    for (int n = 4; n <= 8; ++n) {
        auto s = random_state(rng, std::vector<int>(n, 1), 0);
        for (int i = 1; i < n; ++i)
            for (int j = i + 2; j < n; ++j) {
                auto a = run_program(s, {{i, true}, {j, false}}, K);
                auto b = run_program(s, {{j, false}, {i, true}}, K);
                EXPECT_LT(distance(a, b), 1e-14);
            }
    }
}

TEST(Braid, InverseUndoes) {
    std::mt19937_64 rng(5);
    auto s = random_state(rng, {1, 1, 1, 1, 1, 1}, 0);
    std::vector<Generator> w;
    for (int t = 0; t < 40; ++t) w.push_back({1 + static_cast<int>(rng() % 5), rng() % 2 == 0});
    auto back = run_program(run_program(s, w, K), inverse_steps(w), K);
    EXPECT_LT(distance(s, back), 1e-13);
}

TEST(Braid, TrivialAnyonIsTransparent) {
    std::mt19937_64 rng(6);
    auto s = random_state(rng, {1, 0, 1, 1}, 1);
    auto once = braid_adjacent(s, 1, true, K);
    EXPECT_EQ(once.charges(), (std::vector<int>{0, 1, 1, 1}));
    EXPECT_NEAR(once.norm_squared(), 1.0, 1e-15);
    auto twice = braid_adjacent(once, 1, true, K);
    EXPECT_LT(distance(s, twice), 1e-15);
    auto cw = braid_adjacent(once, 1, false, K);
    EXPECT_LT(distance(s, cw), 1e-15);
}

TEST(Transport, RangeChargeOfVacuumPairs) {
    auto s = init_pairs<double>({1, 1, 1}, 53);
    auto [a0, a1] = range_charge_distribution(s, 3, 5, K);
    EXPECT_NEAR(a0, 1.0, 1e-14);
    auto [b0, b1] = range_charge_distribution(s, 2, 4, K);
    EXPECT_NEAR(b0, 1 / (K.tau * K.tau), 1e-14);
    EXPECT_NEAR(b1, 1 - 1 / (K.tau * K.tau), 1e-14);
    EXPECT_NEAR(range_charge_distribution(s, 2, 3, K).second, 1.0, 1e-14);
}

TEST(Transport, JointBlocksOfPairs) {
    auto s = init_pairs<double>({1, 1}, 53);
    auto j = joint_block_charges(s, 1, {3, 5}, K);
    EXPECT_NEAR(j[0], 1.0, 1e-14);
    EXPECT_THROW(joint_block_charges(s, 2, {2}, K), std::out_of_range);
    EXPECT_THROW(joint_block_charges(s, 1, {}, K), std::invalid_argument);
}

TEST(WeaveGenerators, ExchangeFromD) {
    WeaveProgram p;
    p.start_state = {Basis::Pair, Star::D};
    p.moves.push_back(make_move(MoveKind::ExchangeCCW, p.start_state));
    auto g = weave_to_generators(p, GadgetLayout{});
    EXPECT_EQ(g, (std::vector<Generator>{{3, true}}));
}

TEST(WeaveGenerators, ClockwiseLoopFromPairB) {
    WeaveProgram p;
    p.start_state = {Basis::Pair, Star::B};
    p.moves.push_back(make_move(MoveKind::LoopCW, p.start_state));
    auto g = weave_to_generators(p, GadgetLayout{});
    EXPECT_EQ(g, (std::vector<Generator>{{2, false}, {3, false}}));
}

TEST(WeaveGenerators, BlockSizesStretchPaths) {
    WeaveProgram p;
    p.start_state = {Basis::Pair, Star::B};
    p.moves.push_back(make_move(MoveKind::LoopCCW, p.start_state));
    auto g = weave_to_generators(p, GadgetLayout{1, 1, 2, 3});
    EXPECT_EQ(g.size(), 5u);
    EXPECT_THROW(weave_to_generators(p, GadgetLayout{1, 1, 0, 1}), std::invalid_argument);
}

TEST(WeaveGenerators, PassiveStepsEmitNothing) {
    auto p = compile_to_weave(build_N(0), {Basis::Pair, Star::D});
    EXPECT_TRUE(weave_to_generators(p, GadgetLayout{}).empty());
}

TEST(Gadget, EverySingleMoveMatchesItsMatrix) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (const auto& st : all_weave_states())
        for (int sign : {1, -1}) {
            WeaveProgram p;
            p.start_state = st;
            p.moves.push_back(r_move(sign, st));
            std::array<C, 2> q{C(nd(rng), nd(rng)), C(nd(rng), nd(rng))};
            auto out = read_gadget_qubit(run_program(gadget_state(q, st.basis, K), weave_to_generators(p, {}), K),
                                         p.end_state().basis, K);
            auto m = weave_semantics(p, K);
            EXPECT_LT((out[0] - (m(0, 0) * q[0] + m(0, 1) * q[1])).abs(), 1e-14) << to_string(st);
            EXPECT_LT((out[1] - (m(1, 0) * q[0] + m(1, 1) * q[1])).abs(), 1e-14) << to_string(st);
        }
}

TEST(Gadget, CompiledWordsMatchEvaluatedWords) {
    const WeaveState start{Basis::Nested, Star::D};
    std::vector<GateWord> words{weave_seed(), s_word(), build_M(1, weave_seed()), build_M(1, s_word())};
    for (const auto& w : words) {
        auto p = compile_to_weave(w, start);
        auto gens = weave_to_generators(p, GadgetLayout{}, false);
        for (int b = 0; b < 2; ++b) {
            std::array<C, 2> q{b == 0 ? C::one(53) : C::zero(53), b == 1 ? C::one(53) : C::zero(53)};
            auto out = read_gadget_qubit(run_program(gadget_state(q, start.basis, K), gens, K), p.body_end().basis, K);
            auto u = C::unit_root(p.total_phase(false), 5, 53) * evaluate(w, K);
            EXPECT_LT((out[0] - u(0, b)).abs(), 1e-12);
            EXPECT_LT((out[1] - u(1, b)).abs(), 1e-12);
        }
    }
}

TEST(Gadget, ExchangesCostOneAndLoopsTwo) {
    auto p = compile_to_weave(build_M(1, weave_seed()), {Basis::Nested, Star::D});
    std::size_t expect = 0;
    for (const auto& m : p.moves) expect += m.kind == MoveKind::Passive ? 0 : is_loop(m.kind) ? 2 : 1;
    for (const auto& m : p.closing_moves) expect += is_loop(m.kind) ? 2 : 1;
    EXPECT_EQ(weave_to_generators(p, GadgetLayout{}).size(), expect);
    EXPECT_GT(weave_to_generators(p, GadgetLayout{1, 1, 2, 3}).size(), expect);
}
