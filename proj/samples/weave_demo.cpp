// Compiles the order-1 add gadget, prints its weave, and runs it on a four-anyon chain.

#include <cstdio>
#include <iostream>

#include "fibweave/fibweave.hpp"

using namespace fibweave;

int main() {
    const auto k = make_constants<BigFloat>(256);
    GateWord w = build_M(1, weave_seed());
    WeaveProgram prog = compile_to_weave(w, kAddStart);

    std::cout << "word:   " << to_text(w) << "\n";
    std::cout << "weave:  " << serialize(prog);
    std::printf("moves:  %zu (%zu closing)\n", prog.active_move_count(), prog.closing_moves.size());

    Mat2<BigFloat> u = weave_semantics(prog, k);
    std::printf("|<0|U|0>| = %.6e, tau^-10 = %.6e\n", u(0, 0).abs().to_double(), pow(k.tau, -10L).to_double());

    // Same program on the chain: the mobile anyon starts at D, qubit |0> in the nested basis.
    const auto kd = make_constants<double>(53);
    using C = Complex<double>;
    auto start = gadget_state<double>({C::one(53), C::zero(53)}, Basis::Nested, kd);
    auto gens = weave_to_generators(prog, GadgetLayout{});
    auto end = read_gadget_qubit(run_program(start, gens, kd), Basis::Nested, kd);
    std::printf("chain:  %zu generators, |<0|out>| = %.6e\n", gens.size(), end[0].abs());
    return 0;
}
