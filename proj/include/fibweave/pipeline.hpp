#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibweave/distill.hpp"

namespace fibweave {

/// The three weave programs used by the one-mobile scheme.
struct OneMobileGadgets {
    int add_order = 0;
    int integrate_order = 0;
    WeaveProgram add;          // M_j from the weave seed, (Nested,D) back to (Nested,D)
    WeaveProgram integrate;    // N_j, (Pair,D) to (Nested,D)
    WeaveProgram inverse_add;
};

inline constexpr WeaveState kAddStart{Basis::Nested, Star::D};
inline constexpr WeaveState kIntegrateStart{Basis::Pair, Star::D};
inline constexpr WeaveState kIntegrateTarget{Basis::Nested, Star::D};

inline OneMobileGadgets compile_gadgets(int add_order, int integrate_order) {
    if (integrate_order % 2 != 0)
        throw PlanError("integrate gadget needs an even order, got " + std::to_string(integrate_order));
    OneMobileGadgets g;
    g.add_order = add_order;
    g.integrate_order = integrate_order;
    g.add = compile_to_weave(build_M(add_order, weave_seed()), kAddStart);
    if (!(g.add.end_state() == kAddStart)) throw std::logic_error("add gadget does not close");
    g.integrate = compile_to_weave(build_N(integrate_order), kIntegrateStart);
    if (!(g.integrate.end_state() == kIntegrateTarget)) throw std::logic_error("integrate gadget misses its target");
    g.inverse_add = inverse(g.add);
    return g;
}

/// Gadget failure probabilities taken from the exact gadget matrices.
template <class Real = BigFloat>
ErrorModel<double> error_model_from_gadgets(const DistillPlan& plan, double p, long bits = 256) {
    const auto k = make_constants<Real>(bits);
    ErrorModel<double> m;
    m.p = p;
    if (plan.scheme == Scheme::Hierarchical) {
        Mat2<Real> g = evaluate(build_M(plan.add_order, s_word()), k);
        m.eps_merge = to_double(g(0, 0).norm());
        return m;
    }
    OneMobileGadgets gadgets = compile_gadgets(plan.add_order, plan.integrate_order);
    Mat2<Real> add = weave_semantics(gadgets.add, k);
    Mat2<Real> integ = weave_semantics(gadgets.integrate, k);
    m.eps_add = to_double(add(0, 0).norm());
    m.eps_merge = to_double(integ(0, 1).norm());
    Mat2<Real> final_map = add.adjoint() * integ;
    m.eps_final = to_double(1.0 - final_map(0, 1).norm());
    if (m.eps_final < 0.0) m.eps_final = 0.0;
    return m;
}

/// Full generator sequence of the one-mobile pipeline. The chain is
/// [A, mobile, left pairs..., right pairs...]; the mobile anyon starts paired with A.
struct OneMobileSchedule {
    std::vector<Generator> steps;
    int left_size = 0;   // physical anyons in the left composite
    int right_size = 0;
    std::uint64_t gadget_invocations = 0;
    std::uint64_t transport_steps = 0;
};

inline OneMobileSchedule one_mobile_schedule(int n_left, int n_right, const OneMobileGadgets& g) {
    if (n_left < 1 || n_right < 1) throw PlanError("need at least one pair per side");
    OneMobileSchedule out;
    int star = 2;
    auto append = [&](const WeaveProgram& prog, const GadgetLayout& layout) {
        if (layout.star_slot(prog.start_state.star) != star) throw std::logic_error("mobile anyon out of place");
        auto gens = weave_to_generators(prog, layout);
        out.steps.insert(out.steps.end(), gens.begin(), gens.end());
        ++out.gadget_invocations;
    };
    auto side = [&](int n, int s1_base) {
        int comp = 0;
        for (int k = 0; k < n; ++k) {
            // The fresh pair fuses to vacuum, so carrying the mobile anyon past it is free.
            out.steps.push_back({star, true});
            out.steps.push_back({star + 1, true});
            out.transport_steps += 2;
            star += 2;
            append(g.add, GadgetLayout{1, s1_base + comp, 1, 1});
            if (comp > 0) append(g.integrate, GadgetLayout{1, s1_base, comp, 2});
            comp += 2;
        }
        return comp;
    };
    out.left_size = side(n_left, 1);
    out.right_size = side(n_right, 1 + out.left_size);
    const GadgetLayout across{1, 1, out.left_size, out.right_size};
    append(g.integrate, across);
    append(g.inverse_add, across);
    return out;
}

inline BraidCost one_mobile_cost(int n, int add_order, int integrate_order) {
    DistillPlan p = plan_one_mobile(n, add_order, integrate_order);
    OneMobileGadgets g = compile_gadgets(add_order, integrate_order);
    OneMobileSchedule s = one_mobile_schedule(n, n, g);
    BraidCost c;
    c.scheme = Scheme::OneMobile;
    c.n = n;
    c.j = add_order;
    c.gadget_braids = g.add.active_move_count();
    c.composite_level_braids = 0;
    for (const PlanStep& st : p.steps) {
        if (st.kind == StepKind::Add || st.kind == StepKind::InverseAdd) c.composite_level_braids += g.add.active_move_count();
        if (st.kind == StepKind::Integrate || st.kind == StepKind::IntegrateAcross)
            c.composite_level_braids += g.integrate.active_move_count();
    }
    c.total_braids = s.steps.size();
    c.expansion_rule = "mobile anyon passes each anyon of a block once per move";
    c.error_amplitude_exponent = 2.0 * std::pow(5.0, add_order);
    return c;
}

inline BraidCost braid_cost(const DistillPlan& p) {
    if (p.scheme == Scheme::Hierarchical) return hierarchical_cost(p.n, p.add_order);
    return one_mobile_cost(p.n, p.add_order, p.integrate_order);
}

struct EndToEndResult {
    double prob0 = 0.0;    // left composite trivial
    double prob1 = 0.0;    // left composite nontrivial
    double success = 0.0;  // left nontrivial, left + right trivial: a nontrivial pair across the cut
    std::size_t generator_count = 0;
    std::size_t anyons = 0;
};

inline constexpr std::size_t kMaxChainAnyons = 24;

/// Runs the compiled pipeline on the chain simulator for one charge assignment.
template <class Real = double>
EndToEndResult run_end_to_end(const std::vector<int>& left, const std::vector<int>& right, int add_order,
                              int integrate_order, long bits = 53) {
    const auto k = make_constants<Real>(bits);
    OneMobileGadgets g = compile_gadgets(add_order, integrate_order);
    OneMobileSchedule sched = one_mobile_schedule(static_cast<int>(left.size()), static_cast<int>(right.size()), g);
    std::vector<int> pairs{1};
    pairs.insert(pairs.end(), left.begin(), left.end());
    pairs.insert(pairs.end(), right.begin(), right.end());
    if (2 * pairs.size() > kMaxChainAnyons) throw std::invalid_argument("chain too long for dense simulation");
    ChainState<Real> s = run_program(init_pairs<Real>(pairs, k.precision_bits), sched.steps, k);
    const int lo = 2;
    auto joint = joint_block_charges(s, lo, {lo + sched.left_size, lo + sched.left_size + sched.right_size}, k);
    EndToEndResult r;
    r.prob0 = joint[0] + joint[2];
    r.prob1 = joint[1] + joint[3];
    r.success = joint[1];
    r.generator_count = sched.steps.size();
    r.anyons = s.size();
    return r;
}

/// Gadget orders from a single j: the integrate order is rounded up to even.
template <class Real = double>
EndToEndResult run_end_to_end(const std::vector<int>& left, const std::vector<int>& right, int j, long bits = 53) {
    return run_end_to_end<Real>(left, right, j, j + (j % 2), bits);
}

/// Exact counterpart of run_end_to_end for one assignment.
inline EndToEndResult exact_assignment(const std::vector<int>& left, const std::vector<int>& right,
                                       const ErrorModel<double>& m) {
    EndToEndResult r;
    double ql = side_nontrivial_probability(left, m);
    double qr = side_nontrivial_probability(right, m);
    r.prob1 = ql;
    r.prob0 = 1.0 - ql;
    r.success = ql * qr * (1.0 - m.eps_final);
    return r;
}

/// All anyons mobile, four anyons: F R^a1 F R^a2 F ... F with an even number of
/// F symbols is a braid word. Odd-numbered R tokens are exchanges of the middle
/// two anyons, even-numbered ones of the first two. Returned in time order.
inline std::vector<Generator> all_mobile_generators(const GateWord& w) {
    if (!w.alternates() || w.empty() || !w.tokens.front().is_f || !w.tokens.back().is_f)
        throw std::invalid_argument("word must alternate and begin and end with F");
    if (word_metrics(w).f_count % 2 != 0) throw std::invalid_argument("word needs an even number of F symbols");
    std::vector<Generator> out;
    int r_index = static_cast<int>(word_metrics(w).r_token_count);
    for (auto it = w.tokens.rbegin(); it != w.tokens.rend(); ++it) {
        if (it->is_f) continue;
        const int slot = (r_index % 2 == 1) ? 2 : 1;
        for (int u = 0; u < std::abs(it->alpha); ++u) out.push_back({slot, it->alpha > 0});
        --r_index;
    }
    return out;
}

/// Two pairs with charges (a1, a2), braided by `w`; returns the charge distribution of the first two anyons.
template <class Real = double>
std::pair<double, double> run_all_mobile(int a1, int a2, const GateWord& w, long bits = 53) {
    const auto k = make_constants<Real>(bits);
    ChainState<Real> s = run_program(init_pairs<Real>({a1, a2}, k.precision_bits), all_mobile_generators(w), k);
    return cut_charge_distribution(s, 2);
}

}  // namespace fibweave
