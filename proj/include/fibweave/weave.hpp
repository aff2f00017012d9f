#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibweave/gate_word.hpp"

namespace fibweave {

enum class Basis { Pair, Nested };
enum class Star { B, C, D };

/// Basis diagram plus the slot currently held by the mobile anyon.
struct WeaveState {
    Basis basis = Basis::Pair;
    Star star = Star::D;
    friend bool operator==(const WeaveState&, const WeaveState&) = default;
};

inline const char* to_string(Basis b) { return b == Basis::Pair ? "Pair" : "Nested"; }
inline const char* to_string(Star s) { return s == Star::B ? "B" : s == Star::C ? "C" : "D"; }
inline std::string to_string(const WeaveState& s) {
    return std::string("(") + to_string(s.basis) + "," + to_string(s.star) + ")";
}

inline std::vector<WeaveState> all_weave_states() {
    std::vector<WeaveState> out;
    for (Basis b : {Basis::Pair, Basis::Nested})
        for (Star s : {Star::B, Star::C, Star::D}) out.push_back({b, s});
    return out;
}

/// Exchange states toggle by swapping with a neighbour; the other two by a loop.
inline bool is_loop_state(const WeaveState& s) {
    return (s.basis == Basis::Pair && s.star == Star::B) || (s.basis == Basis::Nested && s.star == Star::D);
}

/// The state reached by one R move.
inline WeaveState r_partner(const WeaveState& s) {
    if (s.basis == Basis::Pair) {
        switch (s.star) {
            case Star::B: return {Basis::Nested, Star::D};
            case Star::C: return {Basis::Pair, Star::D};
            case Star::D: return {Basis::Pair, Star::C};
        }
    } else {
        switch (s.star) {
            case Star::B: return {Basis::Nested, Star::C};
            case Star::C: return {Basis::Nested, Star::B};
            case Star::D: return {Basis::Pair, Star::B};
        }
    }
    throw std::logic_error("unreachable weave state");
}

inline WeaveState f_partner(const WeaveState& s) {
    return {s.basis == Basis::Pair ? Basis::Nested : Basis::Pair, s.star};
}

enum class MoveKind {
    Passive,       // basis relabel for an F symbol, no motion
    ExchangeCCW,   // R
    ExchangeCW,    // R^-1
    LoopCCW,       // diag(1, e^{3 pi i/5}) = e^{-4 pi i/5} R^-1
    LoopCW,        // e^{4 pi i/5} R
};

inline const char* move_symbol(MoveKind k) {
    switch (k) {
        case MoveKind::Passive: return "F";
        case MoveKind::ExchangeCCW: return "X+";
        case MoveKind::ExchangeCW: return "X-";
        case MoveKind::LoopCCW: return "L+";
        case MoveKind::LoopCW: return "L-";
    }
    return "?";
}

inline bool is_loop(MoveKind k) { return k == MoveKind::LoopCCW || k == MoveKind::LoopCW; }

/// Global phase of a move relative to R^{+-1}, in units of pi/5.
inline int phase_of(MoveKind k) {
    switch (k) {
        case MoveKind::LoopCW: return 4;
        case MoveKind::LoopCCW: return -4;
        default: return 0;
    }
}

inline MoveKind reversed(MoveKind k) {
    switch (k) {
        case MoveKind::ExchangeCCW: return MoveKind::ExchangeCW;
        case MoveKind::ExchangeCW: return MoveKind::ExchangeCCW;
        case MoveKind::LoopCCW: return MoveKind::LoopCW;
        case MoveKind::LoopCW: return MoveKind::LoopCCW;
        default: return k;
    }
}

/// Sign of the R power a move implements (0 for passive).
inline int r_sign(MoveKind k) {
    switch (k) {
        case MoveKind::ExchangeCCW:
        case MoveKind::LoopCW: return 1;
        case MoveKind::ExchangeCW:
        case MoveKind::LoopCCW: return -1;
        default: return 0;
    }
}

struct WeaveMove {
    MoveKind kind = MoveKind::Passive;
    WeaveState pre_state;
    WeaveState post_state;
    int global_phase_exponent = 0;  // multiple of pi/5
    friend bool operator==(const WeaveMove&, const WeaveMove&) = default;
};

/// Checks the kind is legal from `pre` and fills in post state and phase.
inline WeaveMove make_move(MoveKind kind, const WeaveState& pre) {
    if (kind == MoveKind::Passive) return {kind, pre, f_partner(pre), 0};
    if (is_loop(kind) != is_loop_state(pre))
        throw std::invalid_argument(std::string(move_symbol(kind)) + " is not available from " + to_string(pre));
    return {kind, pre, r_partner(pre), phase_of(kind)};
}

/// Unit move implementing R^{sign} from `pre`.
inline WeaveMove r_move(int sign, const WeaveState& pre) {
    if (is_loop_state(pre)) return make_move(sign > 0 ? MoveKind::LoopCW : MoveKind::LoopCCW, pre);
    return make_move(sign > 0 ? MoveKind::ExchangeCCW : MoveKind::ExchangeCW, pre);
}

/// Steps in time order. `moves` includes passive F relabels.
struct WeaveProgram {
    WeaveState start_state;
    std::vector<WeaveMove> moves;
    std::vector<WeaveMove> closing_moves;

    WeaveState body_end() const { return moves.empty() ? start_state : moves.back().post_state; }
    WeaveState end_state() const { return closing_moves.empty() ? body_end() : closing_moves.back().post_state; }

    std::size_t active_move_count(bool include_closing = true) const {
        std::size_t n = 0;
        for (const auto& m : moves) n += m.kind != MoveKind::Passive;
        return n + (include_closing ? closing_moves.size() : 0);
    }
    int total_phase(bool include_closing = true) const {
        int p = 0;
        for (const auto& m : moves) p += m.global_phase_exponent;
        if (include_closing)
            for (const auto& m : closing_moves) p += m.global_phase_exponent;
        return p;
    }
    friend bool operator==(const WeaveProgram&, const WeaveProgram&) = default;
};

class BrokenStateChain : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void validate(const WeaveProgram& p) {
    WeaveState cur = p.start_state;
    auto check = [&](const WeaveMove& m) {
        if (!(m.pre_state == cur)) throw BrokenStateChain("move starts at " + to_string(m.pre_state) + ", expected " + to_string(cur));
        WeaveMove expect = make_move(m.kind, m.pre_state);
        if (!(expect == m)) throw BrokenStateChain("inconsistent move from " + to_string(m.pre_state));
        cur = m.post_state;
    };
    for (const auto& m : p.moves) check(m);
    if (p.closing_moves.size() > 2) throw BrokenStateChain("more than two closing moves");
    for (const auto& m : p.closing_moves) {
        if (m.kind == MoveKind::Passive) throw BrokenStateChain("closing moves must be braids");
        check(m);
    }
}

/// Translates a word into motions of the single mobile anyon. Tokens are
/// consumed in time order (right to left); R^alpha becomes |alpha| unit moves.
inline WeaveProgram compile_to_weave(const GateWord& w, const WeaveState& start) {
    if (!w.alternates()) throw std::invalid_argument("word does not alternate F and R tokens");
    WeaveProgram p;
    p.start_state = start;
    WeaveState cur = start;
    std::size_t f_count = 0;
    for (auto it = w.tokens.rbegin(); it != w.tokens.rend(); ++it) {
        if (it->is_f) {
            ++f_count;
            p.moves.push_back(make_move(MoveKind::Passive, cur));
        } else {
            const int sign = it->alpha > 0 ? 1 : -1;
            for (int u = 0; u < std::abs(it->alpha); ++u) {
                p.moves.push_back(r_move(sign, cur));
                cur = p.moves.back().post_state;
            }
            continue;
        }
        cur = p.moves.back().post_state;
    }
    if (f_count % 3 == 0 && !(cur == start)) {
        if (!(r_partner(cur) == start))
            throw std::logic_error("end state " + to_string(cur) + " cannot be closed to " + to_string(start));
        p.closing_moves.push_back(r_move(1, cur));
    }
    return p;
}

template <class Real>
Mat2<Real> move_matrix(const WeaveMove& m, const FibConstants<Real>& c) {
    switch (m.kind) {
        case MoveKind::Passive: return c.F;
        case MoveKind::ExchangeCCW: return c.R;
        case MoveKind::ExchangeCW: return c.R.adjoint();
        default: break;
    }
    auto one = Complex<Real>::one(c.precision_bits);
    // Loops act only on the nontrivial channel of the middle edge.
    return Mat2<Real>::diag(one, c.omega_power(m.kind == MoveKind::LoopCCW ? 3 : -3));
}

/// Time-ordered product of the step matrices: later steps multiply on the left.
template <class Real>
Mat2<Real> weave_semantics(const WeaveProgram& p, const FibConstants<Real>& c, bool include_closing = true) {
    validate(p);
    Mat2<Real> out = Mat2<Real>::identity(c.precision_bits);
    for (const auto& m : p.moves) out = move_matrix(m, c) * out;
    if (include_closing)
        for (const auto& m : p.closing_moves) out = move_matrix(m, c) * out;
    return out;
}

template <class Real>
Mat2<Real> weave_semantics(const WeaveProgram& p, long precision_bits, bool include_closing = true) {
    return weave_semantics(p, make_constants<Real>(precision_bits), include_closing);
}

/// The program undoing `p` (closing moves included), as a single body.
inline WeaveProgram inverse(const WeaveProgram& p) {
    validate(p);
    WeaveProgram out;
    out.start_state = p.end_state();
    auto push = [&](const WeaveMove& m) {
        out.moves.push_back({reversed(m.kind), m.post_state, m.pre_state, -m.global_phase_exponent});
    };
    for (auto it = p.closing_moves.rbegin(); it != p.closing_moves.rend(); ++it) push(*it);
    for (auto it = p.moves.rbegin(); it != p.moves.rend(); ++it) push(*it);
    return out;
}

/// Text form:
///   start=<Pair|Nested>,<B|C|D>
///   <steps> [| <closing moves>]
/// Steps are X+ X- L+ L- and F for a passive relabel. Lines starting with # are comments.
inline std::string serialize(const WeaveProgram& p) {
    std::ostringstream out;
    out << "start=" << to_string(p.start_state.basis) << "," << to_string(p.start_state.star) << "\n";
    bool first = true;
    for (const auto& m : p.moves) {
        out << (first ? "" : " ") << move_symbol(m.kind);
        first = false;
    }
    if (!p.closing_moves.empty()) {
        out << (first ? "|" : " |");
        for (const auto& m : p.closing_moves) out << " " << move_symbol(m.kind);
    }
    out << "\n";
    return out.str();
}

inline WeaveProgram parse_weave(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    WeaveProgram p;
    bool have_start = false;
    bool closing = false;
    WeaveState cur;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string tok;
        while (words >> tok) {
            if (!have_start) {
                if (tok.rfind("start=", 0) != 0) throw std::invalid_argument("missing start= header");
                std::string spec = tok.substr(6);
                auto comma = spec.find(',');
                if (comma == std::string::npos) throw std::invalid_argument("bad start state: " + spec);
                std::string b = spec.substr(0, comma), s = spec.substr(comma + 1);
                if (b == "Pair") cur.basis = Basis::Pair;
                else if (b == "Nested") cur.basis = Basis::Nested;
                else throw std::invalid_argument("bad basis: " + b);
                if (s == "B") cur.star = Star::B;
                else if (s == "C") cur.star = Star::C;
                else if (s == "D") cur.star = Star::D;
                else throw std::invalid_argument("bad star slot: " + s);
                p.start_state = cur;
                have_start = true;
                continue;
            }
            if (tok == "|") {
                if (closing) throw std::invalid_argument("repeated closing separator");
                closing = true;
                continue;
            }
            MoveKind kind;
            if (tok == "F") kind = MoveKind::Passive;
            else if (tok == "X+") kind = MoveKind::ExchangeCCW;
            else if (tok == "X-") kind = MoveKind::ExchangeCW;
            else if (tok == "L+") kind = MoveKind::LoopCCW;
            else if (tok == "L-") kind = MoveKind::LoopCW;
            else throw std::invalid_argument("unknown move: " + tok);
            WeaveMove m = make_move(kind, cur);
            (closing ? p.closing_moves : p.moves).push_back(m);
            cur = m.post_state;
        }
    }
    if (!have_start) throw std::invalid_argument("missing start= header");
    validate(p);
    return p;
}

}  // namespace fibweave
