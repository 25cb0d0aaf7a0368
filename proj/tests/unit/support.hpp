#pragma once
// Reference computations used as independent oracles by the unit tests.
// They follow definitions directly and never call the library routine they
// check.

#include "qlll/instance.hpp"
#include "qlll/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace qlll::test {

inline std::string data(const std::string& name) { return std::string(QLLL_TEST_DATA) + "/" + name; }

inline Mat random_matrix(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed, 77);
    Mat x(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) x(r, c) = Cx(rng.normal(), rng.normal());
    return x;
}

inline Mat random_state(std::size_t dim, std::uint64_t seed) {
    Mat g = random_matrix(dim, seed);
    Mat r = g * g.adjoint();
    return r / r.trace().real();
}

inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Digits of a basis index, qudit 0 first.
inline std::vector<int> digits_of(std::size_t i, const Shape& s) {
    std::vector<int> out(s.n);
    for (int q = s.n - 1; q >= 0; --q) {
        out[q] = static_cast<int>(i % s.d);
        i /= s.d;
    }
    return out;
}

inline std::size_t index_of(const std::vector<int>& digits, int d) {
    std::size_t i = 0;
    for (int v : digits) i = i * d + v;
    return i;
}

// Embedding by its matrix-element definition.
inline Mat embed_by_elements(const Mat& local, const std::vector<int>& qudits, const Shape& s) {
    const std::size_t D = s.dim();
    Mat out = Mat::Zero(D, D);
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) {
            auto di = digits_of(i, s), dj = digits_of(j, s);
            bool rest_equal = true;
            for (int q = 0; q < s.n; ++q)
                if (std::find(qudits.begin(), qudits.end(), q) == qudits.end() && di[q] != dj[q]) rest_equal = false;
            if (!rest_equal) continue;
            std::size_t li = 0, lj = 0;
            for (int q : qudits) {
                li = li * s.d + di[q];
                lj = lj * s.d + dj[q];
            }
            out(i, j) = local(li, lj);
        }
    return out;
}

// Partial trace by explicit index contraction; kept qudits in increasing order.
inline Mat partial_trace_by_contraction(const Mat& m, const std::vector<int>& traced, const Shape& s) {
    std::vector<int> kept;
    for (int q = 0; q < s.n; ++q)
        if (std::find(traced.begin(), traced.end(), q) == traced.end()) kept.push_back(q);
    std::size_t K = 1;
    for (std::size_t t = 0; t < kept.size(); ++t) K *= s.d;
    Mat out = Mat::Zero(K, K);
    const std::size_t D = s.dim();
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) {
            auto di = digits_of(i, s), dj = digits_of(j, s);
            bool diag = true;
            for (int q : traced) diag = diag && di[q] == dj[q];
            if (!diag) continue;
            std::size_t ki = 0, kj = 0;
            for (int q : kept) {
                ki = ki * s.d + di[q];
                kj = kj * s.d + dj[q];
            }
            out(ki, kj) += m(i, j);
        }
    return out;
}

// Process on an instance of computational-basis projectors, treated as a
// classical Markov chain over basis states. All quantities are exact sums.
struct DiagonalChain {
    const QlllInstance& inst;

    bool violated(std::size_t s, int a) const {
        const auto& p = inst.projectors[a];
        auto dig = digits_of(s, inst.shape);
        std::size_t local = 0;
        for (int q : p.qudits) local = local * inst.shape.d + dig[q];
        return p.local(local, local).real() > 0.5;
    }

    int violated_count(std::size_t s) const {
        int c = 0;
        for (int a = 0; a < inst.m(); ++a) c += violated(s, a);
        return c;
    }

    // Basis states reachable by redrawing the qudits of projector a.
    std::vector<std::size_t> redraws(std::size_t s, int a) const {
        const auto& qs = inst.projectors[a].qudits;
        std::vector<std::size_t> out;
        std::size_t k = 1;
        for (std::size_t t = 0; t < qs.size(); ++t) k *= inst.shape.d;
        for (std::size_t r = 0; r < k; ++r) {
            auto dig = digits_of(s, inst.shape);
            std::size_t rr = r;
            for (int t = static_cast<int>(qs.size()) - 1; t >= 0; --t) {
                dig[qs[t]] = static_cast<int>(rr % inst.shape.d);
                rr /= inst.shape.d;
            }
            out.push_back(index_of(dig, inst.shape.d));
        }
        return out;
    }

    // Probability that the first |seq| violations, starting from s, are seq.
    // From s, each violated projector is the next violation with equal chance.
    double sequence_from(std::size_t s, const std::vector<int>& seq, std::size_t pos = 0) const {
        if (pos == seq.size()) return 1.0;
        const int v = violated_count(s);
        if (v == 0 || !violated(s, seq[pos])) return 0.0;
        auto next = redraws(s, seq[pos]);
        double acc = 0.0;
        for (auto n : next) acc += sequence_from(n, seq, pos + 1);
        return acc / (v * static_cast<double>(next.size()));
    }

    double sequence(const std::vector<int>& seq) const {
        const std::size_t D = inst.shape.dim();
        double acc = 0.0;
        for (std::size_t s = 0; s < D; ++s) acc += sequence_from(s, seq);
        return acc / static_cast<double>(D);
    }

    // Relevant violations seq[k] in order, where violations of gaps[k] before
    // seq[k] are redrawn and the process goes on. Each stage is an absorbing
    // chain over basis states, solved as (I - Q) f_k = b_k.
    double gapped_sequence(const std::vector<int>& seq, const std::vector<std::vector<int>>& gaps) const {
        const auto D = static_cast<Eigen::Index>(inst.shape.dim());
        Eigen::VectorXd next = Eigen::VectorXd::Ones(D);
        for (int k = static_cast<int>(seq.size()) - 1; k >= 0; --k) {
            Eigen::MatrixXd q = Eigen::MatrixXd::Zero(D, D);
            Eigen::VectorXd b = Eigen::VectorXd::Zero(D);
            for (Eigen::Index s = 0; s < D; ++s) {
                const int v = violated_count(s);
                for (int j = 0; j < inst.m(); ++j) {
                    if (!violated(s, j)) continue;
                    const bool gap = std::find(gaps[k].begin(), gaps[k].end(), j) != gaps[k].end();
                    if (!gap && j != seq[k]) continue;
                    auto r = redraws(s, j);
                    const double w = 1.0 / (v * static_cast<double>(r.size()));
                    for (auto t : r) {
                        if (gap)
                            q(s, static_cast<Eigen::Index>(t)) += w;
                        else
                            b(s) += w * next(static_cast<Eigen::Index>(t));
                    }
                }
            }
            next = (Eigen::MatrixXd::Identity(D, D) - q).fullPivLu().solve(b);
        }
        return next.mean();
    }
};

// Every length-t sequence over m labels.
inline std::vector<std::vector<int>> all_sequences(int m, int t) {
    std::vector<std::vector<int>> out{{}};
    for (int k = 0; k < t; ++k) {
        std::vector<std::vector<int>> next;
        for (const auto& s : out)
            for (int a = 0; a < m; ++a) {
                auto e = s;
                e.push_back(a);
                next.push_back(e);
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace qlll::test
