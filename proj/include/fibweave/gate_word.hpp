#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibweave/fib_model.hpp"

namespace fibweave {

/// One symbol of a gate word: F, or R^alpha with alpha odd and nonzero.
struct Token {
    bool is_f = true;
    int alpha = 0;

    static Token f() { return {true, 0}; }
    static Token r(int alpha) {
        if (alpha % 2 == 0) throw std::invalid_argument("R exponent must be odd and nonzero");
        return {false, alpha};
    }
    friend bool operator==(const Token&, const Token&) = default;
};

/// Symbolic product of F and odd R powers. The matrix is the left-to-right
/// product of the tokens, so the rightmost token acts first.
struct GateWord {
    std::vector<Token> tokens;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    friend bool operator==(const GateWord&, const GateWord&) = default;

    /// True when F and R tokens strictly alternate.
    bool alternates() const {
        for (std::size_t i = 1; i < tokens.size(); ++i)
            if (tokens[i].is_f == tokens[i - 1].is_f) return false;
        return true;
    }
};

class TokenBudgetExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

inline constexpr std::size_t kDefaultTokenBudget = std::size_t{1} << 24;

inline GateWord word_of(std::initializer_list<Token> t) { return GateWord{std::vector<Token>(t)}; }

/// S = F R F.
inline GateWord s_word() { return word_of({Token::f(), Token::r(1), Token::f()}); }

/// F R^-1 F R F, the seed whose F-count is a multiple of three.
inline GateWord weave_seed() {
    return word_of({Token::f(), Token::r(-1), Token::f(), Token::r(1), Token::f()});
}

inline GateWord dagger(const GateWord& w) {
    GateWord out;
    out.tokens.assign(w.tokens.rbegin(), w.tokens.rend());
    for (Token& t : out.tokens) t.alpha = -t.alpha;
    return out;
}

namespace detail {

/// W r0 W^dag r1 W r2 W^dag r3 W.
inline GateWord five_fold(const GateWord& w, const std::array<int, 4>& r, std::size_t budget) {
    const std::size_t predicted = 5 * w.size() + 4;
    if (predicted > budget)
        throw TokenBudgetExceeded("word of " + std::to_string(predicted) + " tokens exceeds budget " +
                                  std::to_string(budget));
    const GateWord wd = dagger(w);
    GateWord out;
    out.tokens.reserve(predicted);
    auto append = [&](const GateWord& x) { out.tokens.insert(out.tokens.end(), x.tokens.begin(), x.tokens.end()); };
    append(w);
    out.tokens.push_back(Token::r(r[0]));
    append(wd);
    out.tokens.push_back(Token::r(r[1]));
    append(w);
    out.tokens.push_back(Token::r(r[2]));
    append(wd);
    out.tokens.push_back(Token::r(r[3]));
    append(w);
    return out;
}

}  // namespace detail

/// M_j = M R^-1 M^dag R^3 M R^-3 M^dag R M with M = M_{j-1}, M_0 = seed.
inline GateWord build_M(int j, const GateWord& seed, std::size_t token_budget = kDefaultTokenBudget) {
    if (j < 0) throw std::invalid_argument("j must be nonnegative");
    if (seed.empty() || !seed.tokens.front().is_f || !seed.tokens.back().is_f)
        throw std::invalid_argument("seed must begin and end with F");
    for (const Token& t : seed.tokens)
        if (!t.is_f && t.alpha % 2 == 0) throw std::invalid_argument("seed has an even R exponent");
    GateWord w = seed;
    for (int i = 0; i < j; ++i) w = detail::five_fold(w, {-1, 3, -3, 1}, token_budget);
    return w;
}

/// N_j = N R N^dag R^3 N R^3 N^dag R N with N = N_{j-1}, N_0 = F.
inline GateWord build_N(int j, std::size_t token_budget = kDefaultTokenBudget) {
    if (j < 0) throw std::invalid_argument("j must be nonnegative");
    GateWord w = word_of({Token::f()});
    for (int i = 0; i < j; ++i) w = detail::five_fold(w, {1, 3, 3, 1}, token_budget);
    return w;
}

struct WordMetrics {
    std::size_t f_count = 0;
    std::size_t r_token_count = 0;
    std::uint64_t elementary_braid_count = 0;  // sum of |alpha|
};

inline WordMetrics word_metrics(const GateWord& w) {
    WordMetrics m;
    for (const Token& t : w.tokens) {
        if (t.is_f) {
            ++m.f_count;
        } else {
            ++m.r_token_count;
            m.elementary_braid_count += static_cast<std::uint64_t>(std::abs(t.alpha));
        }
    }
    return m;
}

/// Left-to-right product of the token matrices.
template <class Real>
Mat2<Real> evaluate(const GateWord& w, const FibConstants<Real>& c) {
    Mat2<Real> out = Mat2<Real>::identity(c.precision_bits);
    for (const Token& t : w.tokens) out = out * (t.is_f ? c.F : c.R_power(t.alpha));
    return out;
}

template <class Real>
Mat2<Real> evaluate(const GateWord& w, long precision_bits) {
    return evaluate(w, make_constants<Real>(precision_bits));
}

/// Permutation of four slots stored as images: p[i] is where slot i + 1 goes (1-based values).
struct FourPermutation {
    std::array<int, 4> image{1, 2, 3, 4};

    static FourPermutation transposition(int a, int b) {
        FourPermutation p;
        std::swap(p.image[a - 1], p.image[b - 1]);
        return p;
    }
    /// (this after other)(x) = this(other(x)).
    FourPermutation after(const FourPermutation& other) const {
        FourPermutation r;
        for (int i = 0; i < 4; ++i) r.image[i] = image[other.image[i] - 1];
        return r;
    }
    FourPermutation inverse() const {
        FourPermutation r;
        for (int i = 0; i < 4; ++i) r.image[image[i] - 1] = i + 1;
        return r;
    }
    /// Cycle notation without fixed points, e.g. "(23)"; "()" for the identity.
    std::string to_string() const {
        std::string out;
        std::array<bool, 4> seen{};
        for (int s = 0; s < 4; ++s) {
            if (seen[s] || image[s] == s + 1) continue;
            out += '(';
            for (int x = s; !seen[x]; x = image[x] - 1) {
                seen[x] = true;
                out += static_cast<char>('1' + x);
            }
            out += ')';
        }
        return out.empty() ? "()" : out;
    }
    friend bool operator==(const FourPermutation&, const FourPermutation&) = default;
};

/// sigma_j = sigma (12) sigma^-1 (12) sigma (12) sigma^-1 (12) sigma, sigma_0 = (23).
inline FourPermutation permutation_of(int j) {
    if (j < 0) throw std::invalid_argument("j must be nonnegative");
    const FourPermutation swap12 = FourPermutation::transposition(1, 2);
    FourPermutation s = FourPermutation::transposition(2, 3);
    for (int i = 0; i < j; ++i) {
        const FourPermutation si = s.inverse();
        s = s.after(swap12).after(si).after(swap12).after(s).after(swap12).after(si).after(swap12).after(s);
    }
    return s;
}

/// "F R1 F R-1 F".
inline std::string to_text(const GateWord& w) {
    std::string out;
    for (std::size_t i = 0; i < w.tokens.size(); ++i) {
        if (i) out += ' ';
        out += w.tokens[i].is_f ? std::string("F") : "R" + std::to_string(w.tokens[i].alpha);
    }
    return out;
}

inline GateWord parse_word(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    GateWord w;
    while (in >> tok) {
        if (tok == "F") {
            w.tokens.push_back(Token::f());
        } else if (tok.size() > 1 && tok[0] == 'R') {
            std::size_t used = 0;
            int alpha = 0;
            try {
                alpha = std::stoi(tok.substr(1), &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("bad R token: " + tok);
            }
            if (used != tok.size() - 1) throw std::invalid_argument("bad R token: " + tok);
            w.tokens.push_back(Token::r(alpha));
        } else {
            throw std::invalid_argument("unknown token: " + tok);
        }
    }
    return w;
}

}  // namespace fibweave
