#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fibweave/pipeline.hpp"
#include "json.hpp"

namespace fibweave {

struct DistillReport {
    Scheme scheme = Scheme::OneMobile;
    int n = 0;
    int j = 0;
    int integrate_order = 0;
    double p = 0.0;
    bool perfect_gadgets = false;
    ErrorModel<double> model;
    std::optional<double> exact_probability;
    std::optional<double> sampled_probability;
    std::optional<double> std_error;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t gadget_braids = 0;
    std::uint64_t total_braids = 0;
    std::vector<std::string> steps;
};

/// Exact probability, optional sampling, and cost for one plan.
inline DistillReport make_report(const DistillPlan& plan, const ErrorModel<double>& model, bool perfect,
                                 std::uint64_t trials, std::uint64_t seed) {
    DistillReport r;
    r.scheme = plan.scheme;
    r.n = plan.n;
    r.j = plan.add_order;
    r.integrate_order = plan.integrate_order;
    r.p = model.p;
    r.perfect_gadgets = perfect;
    r.model = model;
    r.exact_probability = exact_success_probability(plan, model);
    if (trials > 0) {
        SampleStats s = monte_carlo(plan, model, trials, seed);
        r.sampled_probability = s.mean();
        r.std_error = s.std_error();
    }
    r.trials = trials;
    r.seed = seed;
    BraidCost c = braid_cost(plan);
    r.gadget_braids = c.gadget_braids;
    r.total_braids = c.total_braids;
    for (const auto& st : plan.steps) r.steps.push_back(st.describe());
    return r;
}

inline nlohmann::ordered_json to_json(const DistillReport& r) {
    nlohmann::ordered_json j;
    j["scheme"] = to_string(r.scheme);
    j["n"] = r.n;
    j["j"] = r.j;
    j["p"] = r.p;
    j["exact_probability"] = r.exact_probability ? nlohmann::ordered_json(*r.exact_probability) : nullptr;
    j["sampled_probability"] = r.sampled_probability ? nlohmann::ordered_json(*r.sampled_probability) : nullptr;
    j["std_error"] = r.std_error ? nlohmann::ordered_json(*r.std_error) : nullptr;
    j["braid_counts"] = {{"gadget", r.gadget_braids}, {"total", r.total_braids}};
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    j["perfect_gadgets"] = r.perfect_gadgets;
    j["integrate_order"] = r.integrate_order;
    j["error_model"] = {{"eps_add", r.model.eps_add}, {"eps_merge", r.model.eps_merge}, {"eps_final", r.model.eps_final}};
    if (r.scheme == Scheme::OneMobile) j["floor"] = one_mobile_floor(r.p, r.n);
    j["steps"] = r.steps;
    return j;
}

inline std::string csv_header() { return "scheme,n,j,p,exact_probability,sampled_probability,std_error,gadget_braids,total_braids,seed"; }

inline std::string to_csv_row(const DistillReport& r) {
    std::ostringstream out;
    out.precision(17);
    auto opt = [&](const std::optional<double>& x) {
        if (x) out << *x;
    };
    out << to_string(r.scheme) << ',' << r.n << ',' << r.j << ',' << r.p << ',';
    opt(r.exact_probability);
    out << ',';
    opt(r.sampled_probability);
    out << ',';
    opt(r.std_error);
    out << ',' << r.gadget_braids << ',' << r.total_braids << ',' << r.seed;
    return out.str();
}

}  // namespace fibweave
