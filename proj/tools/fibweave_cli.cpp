#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

#include "fibweave/fibweave.hpp"
#include "fibweave/report.hpp"

using namespace fibweave;
using nlohmann::ordered_json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPlan = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

long default_precision() {
    const char* env = std::getenv("FIBWEAVE_PRECISION");
    if (!env || !*env) return 256;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 53) throw UsageError("FIBWEAVE_PRECISION must be an integer >= 53");
    return v;
}

// "3", "1..4", "2,4,8" or a mix such as "1..3,8".
std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string part;
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) throw UsageError(flag + ": not an integer: '" + s + "'");
        return v;
    };
    while (std::getline(in, part, ',')) {
        auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_int(part));
            continue;
        }
        int a = to_int(part.substr(0, dots)), b = to_int(part.substr(dots + 2));
        if (a > b) throw UsageError(flag + ": empty range " + part);
        for (int v = a; v <= b; ++v) out.push_back(v);
    }
    if (out.empty()) throw UsageError(flag + ": empty list");
    return out;
}

std::vector<int> parse_charges(const std::string& text, const std::string& flag) {
    auto v = parse_int_list(text, flag);
    for (int c : v)
        if (c != 0 && c != 1) throw UsageError(flag + ": charges must be 0 or 1");
    return v;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot open output file " + path);
        }
    }
    std::ostream& operator()() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

// ---- compile ----

struct CompileOpts {
    std::string gadget;
    int j = 0;
    std::string seed = "S";
    std::string format = "json";
};

int cmd_compile(const CompileOpts& o, long bits, Output& out) {
    if (o.j < 0) throw UsageError("--j must be nonnegative");
    const bool is_m = o.gadget == "M";
    if (!is_m && o.j % 2 != 0)
        throw UsageError("--gadget N requires even --j (N_j lands in the target configuration only for even j)");
    GateWord w;
    try {
        w = is_m ? build_M(o.j, o.seed == "S" ? s_word() : weave_seed()) : build_N(o.j);
    } catch (const TokenBudgetExceeded& e) {
        throw UsageError(std::string("--j too large: ") + e.what());
    }
    const WeaveState start = is_m ? kAddStart : kIntegrateStart;
    WeaveProgram prog = compile_to_weave(w, start);
    if (o.format == "braidtext") {
        out() << serialize(prog);
        return 0;
    }
    auto metrics = word_metrics(w);
    const double p5 = std::pow(5.0, o.j);
    const double exponent = !is_m ? p5 / 2 : o.seed == "S" ? p5 : 2 * p5;
    const auto k = make_constants<BigFloat>(bits);
    Mat2<BigFloat> u = evaluate(w, k);
    BigFloat entry = is_m ? u(0, 0).abs() : u(1, 0).abs();
    double measured = (-(log(entry) / log(k.tau))).to_double();
    if (o.format == "csv") {
        out() << "gadget,j,seed,f_count,r_token_count,braid_count,weave_moves,closing_moves,error_tau_exponent,"
                 "measured_tau_exponent\n";
        out() << o.gadget << ',' << o.j << ',' << (is_m ? o.seed : "") << ',' << metrics.f_count << ','
              << metrics.r_token_count << ',' << metrics.elementary_braid_count << ',' << prog.active_move_count() << ','
              << prog.closing_moves.size() << ',' << exponent << ',' << std::setprecision(17) << measured << '\n';
        return 0;
    }
    ordered_json j;
    j["gadget"] = o.gadget;
    j["j"] = o.j;
    if (is_m) j["seed"] = o.seed;
    j["word"] = to_text(w);
    j["f_count"] = metrics.f_count;
    j["r_token_count"] = metrics.r_token_count;
    j["braid_count"] = metrics.elementary_braid_count;
    j["error_entry"] = is_m ? "<0|M|0>" : "<1|N|0>";
    j["error_tau_exponent"] = exponent;
    j["measured_tau_exponent"] = measured;
    j["precision_bits"] = bits;
    j["permutation"] = permutation_of(o.j).to_string();
    j["weave"] = {{"start", to_string(prog.start_state)},
                  {"end", to_string(prog.end_state())},
                  {"program", serialize(prog)},
                  {"active_moves", prog.active_move_count()},
                  {"closing_moves", prog.closing_moves.size()}};
    out() << j.dump(2) << '\n';
    return 0;
}

// ---- verify ----

class Suite {
public:
    Suite(std::ostream& os, std::string name) : os_(os), name_(std::move(name)) {}
    void check(bool ok, const std::string& what) {
        os_ << (ok ? "PASS " : "FAIL ") << name_ << ": " << what << '\n';
        ok_ = ok_ && ok;
    }
    void note(const std::string& what) { os_ << "INFO " << name_ << ": " << what << '\n'; }
    bool ok() const { return ok_; }

private:
    std::ostream& os_;
    std::string name_;
    bool ok_ = true;
};

std::string fmt(double x) {
    std::ostringstream s;
    s << std::setprecision(6) << x;
    return s.str();
}

double precision_tolerance(long bits) { return std::max(1e-20, std::ldexp(1.0, -static_cast<int>(bits - 30))); }

bool suite_lemma1(std::ostream& os, long bits) {
    Suite s(os, "lemma1");
    std::mt19937_64 rng(1);
    double worst = 0;
    for (int t = 0; t < 200; ++t) {
        auto u = random_unitary<BigFloat>(rng, bits);
        worst = std::max(worst, abs(converge5_identity(u)(1, 0).abs() - pow(u(1, 0).abs(), 5)).to_double());
        worst = std::max(worst, abs(converge5_not(u)(0, 0).abs() - pow(u(0, 0).abs(), 5)).to_double());
    }
    s.check(worst <= std::ldexp(1.0, -static_cast<int>(bits - 30)), "fifth-power laws on 200 random U, max error " + fmt(worst));
    auto report = self_check(make_constants<BigFloat>(bits), std::ldexp(1.0, -static_cast<int>(bits - 20)));
    s.check(report.all_passed(), "model identities at " + std::to_string(bits) + " bits");
    return s.ok();
}

bool suite_error_laws(std::ostream& os, long bits) {
    Suite s(os, "error-laws");
    const auto k = make_constants<BigFloat>(bits);
    const double tol = precision_tolerance(bits);
    const int top = bits >= 1024 ? 3 : 2;
    for (int j = 0; j <= top; ++j) {
        BigFloat e(std::pow(5.0, j), bits);
        auto rel = [](const BigFloat& got, const BigFloat& want) { return (abs(got - want) / want).to_double(); };
        double a = rel(evaluate(build_M(j, s_word()), k)(0, 0).abs(), pow(k.tau, -e));
        double b = rel(evaluate(build_M(j, weave_seed()), k)(0, 0).abs(), pow(k.tau, -(e * 2.0)));
        double c = rel(evaluate(build_N(j), k)(1, 0).abs(), pow(k.tau, -(e / 2.0)));
        s.check(a <= tol && b <= tol && c <= tol,
                "j=" + std::to_string(j) + " relative errors " + fmt(a) + ", " + fmt(b) + ", " + fmt(c));
    }
    return s.ok();
}

bool suite_lengths(std::ostream& os, long) {
    Suite s(os, "lengths");
    for (int j = 0; j <= 5; ++j) {
        auto n = word_metrics(build_M(j, s_word())).elementary_braid_count;
        s.check(n == hierarchical_gadget_braids(j), "j=" + std::to_string(j) + " braid count " + std::to_string(n));
    }
    for (int j = 0; j <= 8; ++j) {
        auto p = permutation_of(j).to_string();
        s.check(p == (j % 2 == 0 ? "(23)" : "(13)"), "j=" + std::to_string(j) + " permutation " + p);
    }
    return s.ok();
}

bool suite_weave(std::ostream& os, long bits) {
    Suite s(os, "weave");
    const auto k = make_constants<BigFloat>(bits);
    for (int j = 0; j <= 3; ++j) {
        auto p = compile_to_weave(build_M(j, weave_seed()), kAddStart);
        s.check(p.end_state() == kAddStart && p.closing_moves.size() <= 2,
                "M_" + std::to_string(j) + " closes with " + std::to_string(p.closing_moves.size()) + " move(s)");
    }
    for (int j : {0, 2}) {
        auto p = compile_to_weave(build_N(j), kIntegrateStart);
        s.check(p.end_state() == kIntegrateTarget, "N_" + std::to_string(j) + " ends at " + to_string(p.end_state()));
    }
    double worst = 0;
    for (int j = 0; j <= 2; ++j) {
        for (const auto& [w, st] : {std::pair{build_M(j, weave_seed()), kAddStart}, std::pair{build_N(j), kIntegrateStart}}) {
            auto p = compile_to_weave(w, st);
            worst = std::max(worst, proj_distance(weave_semantics(p, k, false), evaluate(w, k)).to_double());
        }
    }
    s.check(worst <= 1e-12, "program semantics match words, max projective distance " + fmt(worst));
    return s.ok();
}

bool suite_chain(std::ostream& os, long) {
    Suite s(os, "chain");
    const auto k = make_constants<double>(53);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    double yb = 0;
    for (int n = 4; n <= 8; ++n) {
        ChainState<double> st(std::vector<int>(n, 1), 0, 53);
        for (auto p : st.paths()) st.set_amplitude(p, Complex<double>(nd(rng), nd(rng)));
        for (int i = 1; i + 1 < n; ++i) {
            auto a = run_program(st, {{i, true}, {i + 1, true}, {i, true}}, k);
            auto b = run_program(st, {{i + 1, true}, {i, true}, {i + 1, true}}, k);
            for (auto p : a.paths()) yb = std::max(yb, (a.amplitude(p) - b.amplitude(p)).abs());
        }
    }
    s.check(yb <= 1e-12, "Yang-Baxter on 4-8 anyons, max deviation " + fmt(yb));
    std::size_t a = 0, b = 1;
    bool counts = true;
    for (int n = 1; n <= 16; ++n) {
        counts = counts && enumerate_paths(std::vector<int>(n, 1), 0).size() == a;
        std::tie(a, b) = std::pair{b, a + b};
    }
    s.check(counts, "fusion path counts are Fibonacci numbers for n <= 16");
    double p = run_end_to_end({1}, {1}, 1).prob1;
    s.check(p >= 1 - std::pow(k.tau, -20) - 1e-12, "pipeline on (1,1) gives prob1 " + fmt(p));
    return s.ok();
}

bool suite_protocol(std::ostream& os, long) {
    Suite s(os, "protocol");
    for (double p : {0.3, 0.5, 0.9})
        for (int n : {2, 4, 8}) {
            auto plan = plan_one_mobile(n, 0, 0);
            auto m = ErrorModel<double>::perfect(p);
            auto mc = monte_carlo(plan, m, 100000, 7);
            double floor = one_mobile_floor(p, n);
            double se = std::max(mc.std_error(), 1e-5);
            s.check(std::abs(mc.mean() - floor) <= 3 * se && std::abs(exact_success_probability(plan, m) - floor) < 1e-12,
                    "p=" + fmt(p) + " n=" + std::to_string(n) + " sampled " + fmt(mc.mean()) + " vs floor " + fmt(floor));
        }
    return s.ok();
}

bool suite_conjectures(std::ostream& os, long) {
    Suite s(os, "conjectures");
    for (int kk = 1; kk <= 4; ++kk) {
        auto fit = order_estimate(kk, 50, 0.01, 0.1);
        s.note("k=" + std::to_string(kk) + " empirical slope " + fmt(fit.slope) + " (order " + std::to_string(2 * kk + 1) +
               " expected)");
    }
    return true;
}

int cmd_verify(const std::string& suite, long bits, Output& out) {
    using Fn = bool (*)(std::ostream&, long);
    const std::vector<std::pair<std::string, Fn>> suites{
        {"lemma1", suite_lemma1}, {"error-laws", suite_error_laws}, {"lengths", suite_lengths},
        {"weave", suite_weave},   {"chain", suite_chain},           {"protocol", suite_protocol},
        {"conjectures", suite_conjectures}};
    bool ok = true;
    for (const auto& [name, fn] : suites)
        if (suite == "all" || suite == name) ok = fn(out(), bits) && ok;
    out() << (ok ? "verify: all hard checks passed\n" : "verify: FAILED\n");
    return ok ? 0 : kExitFailure;
}

// ---- simulate ----

struct SimulateOpts {
    std::string scheme;
    int n = 0;
    double p = 0.5;
    int j = 2;
    bool perfect = false;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::string format = "json";
};

int cmd_simulate(const SimulateOpts& o, long bits, Output& out) {
    if (!(o.p > 0.0 && o.p <= 1.0)) throw UsageError("--p must lie in (0, 1]");
    DistillPlan plan = fibweave::plan(parse_scheme(o.scheme), o.n, o.j);
    ErrorModel<double> m = o.perfect ? ErrorModel<double>::perfect(o.p) : error_model_from_gadgets(plan, o.p, bits);
    DistillReport r = make_report(plan, m, o.perfect, o.trials, o.seed);
    if (o.format == "csv") out() << csv_header() << '\n' << to_csv_row(r) << '\n';
    else out() << to_json(r).dump(2) << '\n';
    return 0;
}

// ---- cost ----

int cmd_cost(const std::string& scheme_name, const std::string& n_text, const std::string& j_text, Output& out) {
    const Scheme scheme = parse_scheme(scheme_name);
    auto ns = parse_int_list(n_text, "--n");
    auto js = parse_int_list(j_text, "--j");
    std::ostringstream body;
    body << "scheme,n,j,gadget_braids,total_braids,error_exponent\n";
    for (int n : ns)
        for (int j : js) {
            BraidCost c = braid_cost(plan(scheme, n, j));
            body << to_string(scheme) << ',' << n << ',' << j << ',' << c.gadget_braids << ',' << c.total_braids << ','
                 << c.error_amplitude_exponent << '\n';
        }
    out() << body.str();
    return 0;
}

// ---- chain-run ----

struct ChainOpts {
    std::string left;
    std::string right;
    int j = 1;
    int integrate_order = -1;
    int enumerate = 0;
};

int cmd_chain_run(const ChainOpts& o, long bits, Output& out) {
    if (o.j < 0) throw UsageError("--j must be nonnegative");
    const int integ = o.integrate_order >= 0 ? o.integrate_order : o.j + o.j % 2;
    std::vector<std::pair<std::vector<int>, std::vector<int>>> cases;
    if (o.enumerate > 0) {
        const int n = o.enumerate;
        for (unsigned mask = 0; mask < (1u << (2 * n)); ++mask) {
            std::vector<int> l, r;
            for (int i = 0; i < n; ++i) l.push_back((mask >> i) & 1);
            for (int i = 0; i < n; ++i) r.push_back((mask >> (n + i)) & 1);
            cases.emplace_back(l, r);
        }
    } else {
        if (o.left.empty() || o.right.empty()) throw UsageError("--left and --right are required unless --enumerate is set");
        cases.emplace_back(parse_charges(o.left, "--left"), parse_charges(o.right, "--right"));
        if (cases[0].first.size() != cases[0].second.size()) throw UsageError("--left and --right need equal lengths");
    }
    const int n = static_cast<int>(cases[0].first.size());
    auto m = error_model_from_gadgets(plan_one_mobile(n, o.j, integ), 0.5, std::max(bits, 128L));
    auto join = [](const std::vector<int>& v) {
        std::string s;
        for (int c : v) s += static_cast<char>('0' + c);
        return s;
    };
    out() << "assignment,prob0,prob1,success,exact_prob1,exact_success,generators,anyons\n";
    out() << std::setprecision(12);
    for (const auto& [l, r] : cases) {
        EndToEndResult res = bits > 53 ? run_end_to_end<BigFloat>(l, r, o.j, integ, bits) : run_end_to_end<double>(l, r, o.j, integ, bits);
        EndToEndResult ex = exact_assignment(l, r, m);
        out() << join(l) << '|' << join(r) << ',' << res.prob0 << ',' << res.prob1 << ',' << res.success << ','
              << ex.prob1 << ',' << ex.success << ',' << res.generator_count << ',' << res.anyons << '\n';
    }
    out() << "# chain: [A, mobile, left pairs, right pairs]; add order " << o.j << ", integrate order " << integ << '\n';
    out() << "# loops realized as runs of same-handed exchanges past whole blocks; range charges read after transport braids\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fibonacci anyon weave compiler and distillation simulator"};
    app.require_subcommand(1);
    long precision = 0;
    std::string output;
    app.add_option("--precision", precision, "working precision in bits (default $FIBWEAVE_PRECISION or 256)")
        ->check(CLI::Range(53L, 1L << 20));
    app.add_option("-o,--output", output, "write to this file instead of stdout");

    CompileOpts co;
    auto* compile = app.add_subcommand("compile", "build a gadget word and its weave program");
    compile->add_option("--gadget", co.gadget, "M or N")->required()->check(CLI::IsMember({"M", "N"}));
    compile->add_option("--j", co.j, "recursion order")->required();
    compile->add_option("--seed", co.seed, "seed word for M: S or weave")->check(CLI::IsMember({"S", "weave"}));
    compile->add_option("--format", co.format, "json, csv or braidtext")->check(CLI::IsMember({"json", "csv", "braidtext"}));

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite, "lemma1, error-laws, lengths, weave, chain, protocol, conjectures or all")
        ->required()
        ->check(CLI::IsMember({"lemma1", "error-laws", "lengths", "weave", "chain", "protocol", "conjectures", "all"}));

    SimulateOpts so;
    auto* simulate = app.add_subcommand("simulate", "exact and sampled distillation success");
    simulate->add_option("--scheme", so.scheme, "hierarchical or one-mobile")
        ->required()
        ->check(CLI::IsMember({"hierarchical", "one-mobile"}));
    simulate->add_option("--n", so.n, "pairs (hierarchical) or pairs per side (one-mobile)")->required();
    simulate->add_option("--p", so.p, "probability that a pair is nontrivial");
    simulate->add_option("--j", so.j, "gadget order");
    simulate->add_flag("--perfect-gadgets", so.perfect, "ignore gadget errors");
    simulate->add_option("--trials", so.trials, "Monte Carlo trials (0 disables sampling)");
    simulate->add_option("--seed", so.seed, "random seed");
    simulate->add_option("--format", so.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    std::string cost_scheme, n_range = "2", j_range = "1";
    auto* cost = app.add_subcommand("cost", "braid-count table");
    cost->add_option("--scheme", cost_scheme, "hierarchical or one-mobile")
        ->required()
        ->check(CLI::IsMember({"hierarchical", "one-mobile"}));
    cost->add_option("--n", n_range, "pair counts, e.g. 2,4,8 or 1..3");
    cost->add_option("--j", j_range, "gadget orders, e.g. 1..3");

    ChainOpts ch;
    auto* chain = app.add_subcommand("chain-run", "run the one-mobile pipeline on the chain simulator");
    chain->add_option("--left", ch.left, "left pair charges, e.g. 1,0");
    chain->add_option("--right", ch.right, "right pair charges, e.g. 0,1");
    chain->add_option("--j", ch.j, "add gadget order");
    chain->add_option("--integrate-order", ch.integrate_order, "integrate gadget order (default: j rounded up to even)");
    chain->add_option("--enumerate", ch.enumerate, "run every assignment with this many pairs per side")
        ->check(CLI::Range(1, 3));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        const long bits = precision > 0 ? precision : default_precision();
        Output out(output);
        if (*compile) return cmd_compile(co, bits, out);
        if (*verify) return cmd_verify(suite, bits, out);
        if (*simulate) return cmd_simulate(so, bits, out);
        if (*cost) return cmd_cost(cost_scheme, n_range, j_range, out);
        if (*chain) return cmd_chain_run(ch, bits, out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PlanError& e) {
        std::cerr << "plan error: " << e.what() << '\n';
        return kExitPlan;
    } catch (const EnumerationBudgetExceeded& e) {
        std::cerr << "plan error: " << e.what() << '\n';
        return kExitPlan;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}
