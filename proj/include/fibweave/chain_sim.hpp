#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fibweave/weave.hpp"

namespace fibweave {

/// Adjacent exchange of slots `slot` and `slot + 1` (1-based).
struct Generator {
    int slot = 1;
    bool ccw = true;
    friend bool operator==(const Generator&, const Generator&) = default;
};

/// Inverse word: reversed order, opposite handedness.
inline std::vector<Generator> inverse_steps(const std::vector<Generator>& steps) {
    std::vector<Generator> out(steps.rbegin(), steps.rend());
    for (auto& g : out) g.ccw = !g.ccw;
    return out;
}

/// Valid fusion paths l_0 = 0, l_{k+1} in l_k x c_k, l_n = total, packed as bit k = l_k.
inline std::vector<std::uint64_t> enumerate_paths(const std::vector<int>& charges, int total) {
    if (charges.size() > 62) throw std::invalid_argument("chain too long");
    std::vector<std::uint64_t> frontier{0};
    for (std::size_t k = 0; k < charges.size(); ++k) {
        std::vector<std::uint64_t> next;
        for (std::uint64_t p : frontier) {
            int x = static_cast<int>((p >> k) & 1u);
            for (Charge y : fuse(charge_of(x), charge_of(charges[k])))
                next.push_back(p | (static_cast<std::uint64_t>(value(y)) << (k + 1)));
        }
        frontier = std::move(next);
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t p : frontier)
        if (static_cast<int>((p >> charges.size()) & 1u) == total) out.push_back(p);
    return out;
}

inline int path_label(std::uint64_t path, int k) { return static_cast<int>((path >> k) & 1u); }

/// Dense state over the fusion-path basis of a line of anyons.
template <class Real>
class ChainState {
public:
    using C = Complex<Real>;

    ChainState(std::vector<int> charges, int total, long precision_bits)
        : charges_(std::move(charges)), total_(total), bits_(precision_bits) {
        for (int c : charges_)
            if (c != 0 && c != 1) throw std::invalid_argument("charges must be 0 or 1");
        rebuild_basis();
        amps_.assign(paths_.size(), C::zero(bits_));
    }

    std::size_t size() const { return charges_.size(); }
    int total_charge() const { return total_; }
    long precision() const { return bits_; }
    const std::vector<int>& charges() const { return charges_; }
    const std::vector<std::uint64_t>& paths() const { return paths_; }
    const std::vector<C>& amplitudes() const { return amps_; }
    std::size_t dimension() const { return paths_.size(); }

    std::size_t index_of(std::uint64_t path) const {
        auto it = index_.find(path);
        if (it == index_.end()) throw std::invalid_argument("path not valid for these charges");
        return it->second;
    }
    const C& amplitude(std::uint64_t path) const { return amps_[index_of(path)]; }
    void set_amplitude(std::uint64_t path, C a) { amps_[index_of(path)] = std::move(a); }

    Real norm_squared() const {
        Real s = RealTraits<Real>::make(0.0, bits_);
        for (const auto& a : amps_) s = s + a.norm();
        return s;
    }

    /// Braid in place; the free function returns a copy.
    void apply(const Generator& g, const FibConstants<Real>& k) {
        const int i = g.slot;
        if (i < 1 || i >= static_cast<int>(charges_.size()))
            throw std::out_of_range("generator slot " + std::to_string(i) + " outside 1.." +
                                    std::to_string(static_cast<int>(charges_.size()) - 1));
        const int a = charges_[i - 1];
        const int b = charges_[i];
        if (a == 0 || b == 0) {
            // Trivial anyon: relabel the middle edge, no phase.
            std::vector<int> swapped = charges_;
            std::swap(swapped[i - 1], swapped[i]);
            ChainState out(std::move(swapped), total_, bits_);
            for (std::size_t n = 0; n < paths_.size(); ++n) {
                std::uint64_t p = paths_[n];
                int x = path_label(p, i - 1);
                int z = path_label(p, i + 1);
                int y_new = (a == 0) ? z : x;
                std::uint64_t q = (p & ~(std::uint64_t{1} << i)) | (static_cast<std::uint64_t>(y_new) << i);
                out.amps_[out.index_of(q)] = amps_[n];
            }
            *this = std::move(out);
            return;
        }
        const Mat2<Real> r = g.ccw ? k.R : k.R.adjoint();
        const Mat2<Real> s = g.ccw ? k.S : k.F * k.R.adjoint() * k.F;
        std::vector<C> next(amps_.size(), C::zero(bits_));
        const std::uint64_t bit = std::uint64_t{1} << i;
        for (std::size_t n = 0; n < paths_.size(); ++n) {
            std::uint64_t p = paths_[n];
            int x = path_label(p, i - 1);
            int y = path_label(p, i);
            int z = path_label(p, i + 1);
            if (x == 1 && z == 1) {
                for (int y2 = 0; y2 < 2; ++y2) {
                    std::uint64_t q = (p & ~bit) | (static_cast<std::uint64_t>(y2) << i);
                    next[index_of(q)] += s(y2, y) * amps_[n];
                }
            } else {
                int f = x == 0 ? z : x;  // fusion channel of the exchanged pair
                next[n] += r(f, f) * amps_[n];
            }
        }
        amps_ = std::move(next);
    }

private:
    void rebuild_basis() {
        paths_ = enumerate_paths(charges_, total_);
        index_.clear();
        for (std::size_t n = 0; n < paths_.size(); ++n) index_[paths_[n]] = n;
    }

    std::vector<int> charges_;
    int total_ = 0;
    long bits_ = 53;
    std::vector<std::uint64_t> paths_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::vector<C> amps_;
};

/// Adjacent pairs, each fusing to vacuum; pair k holds two anyons of charge pair_charges[k].
template <class Real>
ChainState<Real> init_pairs(const std::vector<int>& pair_charges, long precision_bits) {
    std::vector<int> charges;
    std::uint64_t path = 0;
    int k = 0;
    for (int c : pair_charges) {
        if (c != 0 && c != 1) throw std::invalid_argument("pair charge must be 0 or 1");
        charges.push_back(c);
        charges.push_back(c);
        path |= static_cast<std::uint64_t>(c) << (k + 1);  // label after first anyon of the pair
        k += 2;
    }
    ChainState<Real> s(std::move(charges), 0, precision_bits);
    s.set_amplitude(path, Complex<Real>::one(precision_bits));
    return s;
}

template <class Real>
ChainState<Real> braid_adjacent(const ChainState<Real>& s, int slot, bool ccw, const FibConstants<Real>& k) {
    ChainState<Real> out = s;
    out.apply({slot, ccw}, k);
    return out;
}

template <class Real>
ChainState<Real> run_program(const ChainState<Real>& s, const std::vector<Generator>& steps,
                             const FibConstants<Real>& k) {
    ChainState<Real> out = s;
    for (const auto& g : steps) out.apply(g, k);
    return out;
}

/// Probability that label l_k takes each value.
template <class Real>
std::pair<double, double> label_distribution(const ChainState<Real>& s, int k) {
    double p[2] = {0.0, 0.0};
    for (std::size_t n = 0; n < s.dimension(); ++n) p[path_label(s.paths()[n], k)] += to_double(s.amplitudes()[n].norm());
    return {p[0], p[1]};
}

/// Total charge of slots 1..position; 1 <= position <= n - 1.
template <class Real>
std::pair<double, double> cut_charge_distribution(const ChainState<Real>& s, int position) {
    if (position < 1 || position >= static_cast<int>(s.size())) throw std::out_of_range("cut position out of range");
    return label_distribution(s, position);
}

/// Moves every anyon left of slot `lo` rightward past slots lo..hi-1, so the
/// block ends up at the left end of the chain. Returns the generators used.
inline std::vector<Generator> transport_prefix_steps(int lo, int hi) {
    std::vector<Generator> steps;
    const int m = hi - lo;
    for (int a = lo - 1; a >= 1; --a)
        for (int g = a; g < a + m; ++g) steps.push_back({g, true});
    return steps;
}

/// Joint distribution of the total charges of slots [lo, e) for each e in `ends`
/// (ascending, all > lo). Key bit t is the charge of the t-th block.
template <class Real>
std::map<unsigned, double> joint_block_charges(const ChainState<Real>& s, int lo, const std::vector<int>& ends,
                                               const FibConstants<Real>& k) {
    if (ends.empty()) throw std::invalid_argument("no block ends");
    int prev = lo;
    for (int e : ends) {
        if (e <= prev || e > static_cast<int>(s.size()) + 1) throw std::out_of_range("bad block end");
        prev = e;
    }
    if (lo < 1) throw std::out_of_range("bad block start");
    ChainState<Real> moved = run_program(s, transport_prefix_steps(lo, ends.back()), k);
    std::map<unsigned, double> out;
    for (std::size_t n = 0; n < moved.dimension(); ++n) {
        unsigned key = 0;
        for (std::size_t t = 0; t < ends.size(); ++t)
            key |= static_cast<unsigned>(path_label(moved.paths()[n], ends[t] - lo)) << t;
        out[key] += to_double(moved.amplitudes()[n].norm());
    }
    return out;
}

/// Total charge of slots lo..hi-1.
template <class Real>
std::pair<double, double> range_charge_distribution(const ChainState<Real>& s, int lo, int hi,
                                                    const FibConstants<Real>& k) {
    auto joint = joint_block_charges(s, lo, {hi}, k);
    return {joint[0], joint[1]};
}

/// Four-slot gadget on the chain: blocks S1 (never moved), S2, S3, and the
/// mobile anyon. Slot A of the weave holds S1; B, C, D are the mobile positions.
struct GadgetLayout {
    int first_slot = 1;  // 1-based slot of S1's first anyon
    int s1 = 1;
    int s2 = 1;
    int s3 = 1;

    int star_slot(Star star) const {
        switch (star) {
            case Star::B: return first_slot + s1;
            case Star::C: return first_slot + s1 + s2;
            case Star::D: return first_slot + s1 + s2 + s3;
        }
        return 0;
    }
    int total() const { return s1 + s2 + s3 + 1; }
};

/// Generators that carry the mobile anyon from `from` to `to`, all of one handedness.
inline std::vector<Generator> star_path(const GadgetLayout& g, Star from, Star to, bool ccw) {
    std::vector<Generator> out;
    int p = g.star_slot(from);
    int q = g.star_slot(to);
    for (; p < q; ++p) out.push_back({p, ccw});
    for (; p > q; --p) out.push_back({p - 1, ccw});
    return out;
}

/// Exchanges and loops become runs of adjacent generators; passive steps emit nothing.
inline std::vector<Generator> weave_to_generators(const WeaveProgram& p, const GadgetLayout& layout,
                                                  bool include_closing = true) {
    validate(p);
    if (layout.s1 < 1 || layout.s2 < 1 || layout.s3 < 1 || layout.first_slot < 1)
        throw std::invalid_argument("gadget blocks must be nonempty");
    std::vector<Generator> out;
    auto emit = [&](const WeaveMove& m) {
        if (m.kind == MoveKind::Passive) return;
        bool ccw = m.kind == MoveKind::ExchangeCCW || m.kind == MoveKind::LoopCCW;
        auto steps = star_path(layout, m.pre_state.star, m.post_state.star, ccw);
        out.insert(out.end(), steps.begin(), steps.end());
    };
    for (const auto& m : p.moves) emit(m);
    if (include_closing)
        for (const auto& m : p.closing_moves) emit(m);
    return out;
}

/// Four single charge-1 anyons with total charge 0 holding `qubit` in the given basis.
/// Pair basis reads l_2 (charge of the first two); nested vectors are F applied to pair vectors.
template <class Real>
ChainState<Real> gadget_state(const std::array<Complex<Real>, 2>& qubit, Basis basis, const FibConstants<Real>& k) {
    ChainState<Real> s({1, 1, 1, 1}, 0, k.precision_bits);
    for (int b = 0; b < 2; ++b) {
        Complex<Real> a = Complex<Real>::zero(k.precision_bits);
        if (basis == Basis::Pair) {
            a = qubit[b];
        } else {
            for (int n = 0; n < 2; ++n) a += k.F(b, n) * qubit[n];
        }
        s.set_amplitude(0b01010 | (static_cast<std::uint64_t>(b) << 2), a);
    }
    return s;
}

template <class Real>
std::array<Complex<Real>, 2> read_gadget_qubit(const ChainState<Real>& s, Basis basis, const FibConstants<Real>& k) {
    std::array<Complex<Real>, 2> pair;
    for (int b = 0; b < 2; ++b) pair[b] = s.amplitude(0b01010 | (static_cast<std::uint64_t>(b) << 2));
    if (basis == Basis::Pair) return pair;
    std::array<Complex<Real>, 2> out;
    for (int n = 0; n < 2; ++n) out[n] = k.F(n, 0) * pair[0] + k.F(n, 1) * pair[1];
    return out;
}

}  // namespace fibweave
