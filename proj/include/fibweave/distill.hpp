#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fibweave/chain_sim.hpp"

namespace fibweave {

enum class Scheme { Hierarchical, OneMobile };

inline const char* to_string(Scheme s) { return s == Scheme::Hierarchical ? "hierarchical" : "one-mobile"; }

inline Scheme parse_scheme(const std::string& s) {
    if (s == "hierarchical") return Scheme::Hierarchical;
    if (s == "one-mobile") return Scheme::OneMobile;
    throw std::invalid_argument("unknown scheme: " + s);
}

/// Rejected plan parameters (odd integrate order, non power-of-two pair count, ...).
class PlanError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class EnumerationBudgetExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

inline constexpr int kEnumerationBudget = 20;

enum class StepKind { Merge, MoveStar, Add, Integrate, IntegrateAcross, InverseAdd };

inline const char* to_string(StepKind k) {
    switch (k) {
        case StepKind::Merge: return "merge";
        case StepKind::MoveStar: return "move-star";
        case StepKind::Add: return "add";
        case StepKind::Integrate: return "integrate";
        case StepKind::IntegrateAcross: return "integrate-across";
        case StepKind::InverseAdd: return "inverse-add";
    }
    return "?";
}

struct PlanStep {
    StepKind kind;
    int side = 0;   // OneMobile: 0 left, 1 right, -1 across. Hierarchical: level (1-based).
    int index = 0;  // pair index within the side, or merge index within the level
    std::string describe() const {
        std::string s = to_string(kind);
        if (kind == StepKind::Merge) return s + " level=" + std::to_string(side) + " #" + std::to_string(index);
        if (side >= 0) s += side == 0 ? " left" : " right";
        if (kind != StepKind::IntegrateAcross && kind != StepKind::InverseAdd) s += " pair=" + std::to_string(index);
        return s;
    }
};

/// Ordered steps of one distillation run. For OneMobile, `n` counts pairs per side.
struct DistillPlan {
    Scheme scheme = Scheme::OneMobile;
    int n = 1;
    int add_order = 0;        // M gadget order (OneMobile) or merge order (Hierarchical)
    int integrate_order = 0;  // N gadget order, even
    std::vector<PlanStep> steps;

    std::size_t count(StepKind k) const {
        return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [&](const PlanStep& s) { return s.kind == k; }));
    }
    /// Gadget invocations, excluding free repositioning of the mobile anyon.
    std::size_t gadget_steps() const { return steps.size() - count(StepKind::MoveStar); }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline DistillPlan plan_hierarchical(int n, int j) {
    if (j < 0) throw PlanError("gadget order must be nonnegative");
    if (!is_power_of_two(n) || n < 2) throw PlanError("hierarchical scheme needs a power-of-two pair count >= 2, got " + std::to_string(n));
    DistillPlan p;
    p.scheme = Scheme::Hierarchical;
    p.n = n;
    p.add_order = j;
    p.integrate_order = j;
    int level = 1;
    for (int width = n / 2; width >= 1; width /= 2, ++level)
        for (int m = 0; m < width; ++m) p.steps.push_back({StepKind::Merge, level, m});
    return p;
}

/// Interleaved order: each pair is added and then integrated with the pairs before it.
inline DistillPlan plan_one_mobile(int n, int add_order, int integrate_order) {
    if (n < 1) throw PlanError("need at least one pair per side");
    if (add_order < 0 || integrate_order < 0) throw PlanError("gadget order must be nonnegative");
    if (integrate_order % 2 != 0)
        throw PlanError("integrate gadget N_j only lands in the target configuration for even j, got j=" +
                        std::to_string(integrate_order));
    DistillPlan p;
    p.scheme = Scheme::OneMobile;
    p.n = n;
    p.add_order = add_order;
    p.integrate_order = integrate_order;
    for (int side = 0; side < 2; ++side) {
        for (int k = 0; k < n; ++k) {
            p.steps.push_back({StepKind::MoveStar, side, k});
            p.steps.push_back({StepKind::Add, side, k});
            if (k > 0) p.steps.push_back({StepKind::Integrate, side, k});
        }
    }
    p.steps.push_back({StepKind::IntegrateAcross, -1, 0});
    p.steps.push_back({StepKind::InverseAdd, -1, 0});
    return p;
}

inline DistillPlan plan(Scheme scheme, int n, int j) {
    return scheme == Scheme::Hierarchical ? plan_hierarchical(n, j) : plan_one_mobile(n, j, j);
}

/// Failure probabilities of the gadgets, as probabilities (squared amplitudes).
template <class T = double>
struct ErrorModel {
    T p{};          // probability a pair is nontrivial
    T eps_add{};    // OneMobile: nontrivial pair left trivial by the add gadget
    T eps_merge{};  // (1,1) merge or integrate yields a trivial composite
    T eps_final{};  // OneMobile: cross-integrate plus inverse add fails on (1,1)

    static ErrorModel perfect(T p) { return {p, T(0), T(0), T(0)}; }
};

template <class T>
void check_probability(const T& x, const char* what) {
    if (x < T(0) || x > T(1)) throw std::domain_error(std::string(what) + " must lie in [0, 1]");
}

/// 2p(1-p) + p^2(1-eps) = 1 - (1-p)^2 - eps p^2.
template <class T>
T merge_success_probability(const T& p, const T& eps) {
    check_probability(p, "p");
    check_probability(eps, "eps");
    return T(1) - (T(1) - p) * (T(1) - p) - eps * p * p;
}

template <class T>
T one_mobile_floor(const T& p, int n) {
    if (!(p > T(0)) || p > T(1)) throw std::domain_error("p must lie in (0, 1]");
    if (n < 1) throw std::domain_error("n must be positive");
    T q(1);
    for (int i = 0; i < n; ++i) q = q * (T(1) - p);
    T f = T(1) - q;
    return f * f;
}

/// 1 - 2/e^m, the large-n bound for n = m/p pairs per side.
inline double one_mobile_asymptotic_bound(double m) { return 1.0 - 2.0 * std::exp(-m); }

/// Probability that the composite built from one side's pairs is nontrivial, for a fixed assignment.
template <class T>
T side_nontrivial_probability(const std::vector<int>& charges, const ErrorModel<T>& m) {
    T q(0);
    bool first = true;
    for (int c : charges) {
        T pa = c ? T(1) - m.eps_add : T(0);
        if (first) {
            q = pa;
            first = false;
        } else {
            q = q * (T(1) - pa) + (T(1) - q) * pa + q * pa * (T(1) - m.eps_merge);
        }
    }
    return q;
}

/// Probability that the root of the binary merge tree is nontrivial for a fixed leaf assignment.
template <class T>
T hierarchical_root_probability(const std::vector<int>& leaves, const T& eps) {
    std::vector<T> level;
    for (int c : leaves) level.push_back(c ? T(1) : T(0));
    while (level.size() > 1) {
        std::vector<T> next;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
            const T& a = level[i];
            const T& b = level[i + 1];
            next.push_back(a * (T(1) - b) + (T(1) - a) * b + a * b * (T(1) - eps));
        }
        level = std::move(next);
    }
    return level.front();
}

/// Weight p^{#1} (1-p)^{#0} and the charges of assignment `mask` over `n` pairs.
template <class T>
std::pair<T, std::vector<int>> assignment_of(std::uint64_t mask, int n, const T& p) {
    std::vector<int> c(n);
    T w(1);
    for (int i = 0; i < n; ++i) {
        c[i] = static_cast<int>((mask >> i) & 1u);
        w = w * (c[i] ? p : T(1) - p);
    }
    return {w, c};
}

/// Exact success probability by enumerating every pair-charge assignment.
template <class T>
T exact_success_probability(const DistillPlan& plan, const ErrorModel<T>& m) {
    check_probability(m.p, "p");
    if (plan.n > kEnumerationBudget)
        throw EnumerationBudgetExceeded("enumeration over " + std::to_string(plan.n) + " pairs exceeds budget " +
                                        std::to_string(kEnumerationBudget));
    const std::uint64_t count = std::uint64_t{1} << plan.n;
    T total(0);
    if (plan.scheme == Scheme::Hierarchical) {
        for (std::uint64_t mask = 0; mask < count; ++mask) {
            auto [w, c] = assignment_of(mask, plan.n, m.p);
            total = total + w * hierarchical_root_probability(c, m.eps_merge);
        }
        return total;
    }
    // Sides are independent until the final step, so enumerate one side.
    T side(0);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        auto [w, c] = assignment_of(mask, plan.n, m.p);
        side = side + w * side_nontrivial_probability(c, m);
    }
    return side * side * (T(1) - m.eps_final);
}

/// splitmix64 of a (seed, trial, draw) counter: every draw is addressable.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t trial) : key_(splitmix64(seed ^ splitmix64(trial))) {}
    double uniform() {
        std::uint64_t bits = splitmix64(key_ + splitmix64(draw_++));
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
    std::uint64_t draw_ = 0;
};

inline bool sample_trial(const DistillPlan& plan, const ErrorModel<double>& m, CounterRng& rng) {
    auto bernoulli = [&](double q) { return rng.uniform() < q; };
    if (plan.scheme == Scheme::Hierarchical) {
        std::vector<int> level(plan.n);
        for (int& c : level) c = bernoulli(m.p);
        while (level.size() > 1) {
            std::vector<int> next;
            for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
                int a = level[i], b = level[i + 1];
                next.push_back(a && b ? !bernoulli(m.eps_merge) : (a || b));
            }
            level = std::move(next);
        }
        return level.front() != 0;
    }
    int q[2] = {0, 0};
    for (int side = 0; side < 2; ++side) {
        for (int k = 0; k < plan.n; ++k) {
            int c = bernoulli(m.p);
            int pa = c && !bernoulli(m.eps_add);
            if (k == 0) q[side] = pa;
            else if (q[side] && pa) q[side] = !bernoulli(m.eps_merge);
            else q[side] = q[side] || pa;
        }
    }
    return q[0] && q[1] && !bernoulli(m.eps_final);
}

struct SampleStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double mean() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
    double std_error() const {
        double f = mean();
        return trials ? std::sqrt(f * (1.0 - f) / static_cast<double>(trials)) : 0.0;
    }
};

/// Deterministic in (seed, trials) regardless of thread count.
inline SampleStats monte_carlo(const DistillPlan& plan, const ErrorModel<double>& m, std::uint64_t trials,
                               std::uint64_t seed, unsigned threads = 0) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    check_probability(m.p, "p");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
    std::vector<std::uint64_t> hits(threads, 0);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::uint64_t i = t; i < trials; i += threads) {
                CounterRng rng(seed, i);
                hits[t] += sample_trial(plan, m, rng);
            }
        });
    }
    for (auto& th : pool) th.join();
    SampleStats s;
    s.trials = trials;
    for (auto h : hits) s.successes += h;
    return s;
}

/// Elementary braid count of one merge gadget of order j with seed S: 3 5^j - 2.
inline std::uint64_t hierarchical_gadget_braids(int j) {
    std::uint64_t p = 1;
    for (int i = 0; i < j; ++i) p *= 5;
    return 3 * p - 2;
}

struct CostLevel {
    int level = 0;
    std::uint64_t merges = 0;
    std::uint64_t composite_size = 0;  // physical anyons per composite anyon
    std::uint64_t braids = 0;
};

struct BraidCost {
    Scheme scheme = Scheme::Hierarchical;
    int n = 0;
    int j = 0;
    std::uint64_t gadget_braids = 0;
    std::uint64_t total_braids = 0;
    std::uint64_t composite_level_braids = 0;  // braids counted on composite anyons, before expansion
    std::vector<CostLevel> levels;
    std::string expansion_rule;
    double error_amplitude_exponent = 0.0;  // gadget amplitude error is tau^{-exponent}
    double log_eps_exponent_this = 3.0;     // total cost ~ (log 1/eps)^3 for fixed p
    double log_eps_exponent_prior = 5.0;    // prior scheme: (log 1/eps)^{5 + delta}
};

/// Hierarchical cost: level k has n/2^k merges on composites of 2^{k-1} anyons;
/// one composite braid expands to (2^{k-1})^2 physical braids.
inline BraidCost hierarchical_cost(int n, int j) {
    plan_hierarchical(n, j);  // validates n and j
    BraidCost c;
    c.scheme = Scheme::Hierarchical;
    c.n = n;
    c.j = j;
    c.gadget_braids = hierarchical_gadget_braids(j);
    c.expansion_rule = "composite braid = product of the two composite sizes";
    c.error_amplitude_exponent = std::pow(5.0, j);
    int levels = 0;
    for (int w = n; w > 1; w /= 2) ++levels;
    for (int k = 1; k <= levels; ++k) {
        CostLevel l;
        l.level = k;
        l.merges = static_cast<std::uint64_t>(n >> k);
        l.composite_size = std::uint64_t{1} << (k - 1);
        l.braids = l.merges * c.gadget_braids * l.composite_size * l.composite_size;
        c.composite_level_braids += l.merges * c.gadget_braids;
        c.total_braids += l.braids;
        c.levels.push_back(l);
    }
    return c;
}

}  // namespace fibweave
