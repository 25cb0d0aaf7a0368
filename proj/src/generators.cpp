#include "qlll/generators.hpp"

#include "qlll/instance_io.hpp"
#include "qlll/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlll {

QlllInstance counterexample_instance(double a) {
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("counter-example parameter a must lie in (0,1]");
    QlllInstance inst;
    inst.shape = {2, 2};
    inst.projectors.push_back(basis_projector(0, {0}, {0}, 2));
    inst.projectors.push_back(basis_projector(1, {1}, {0}, 2));
    Vec psi = Vec::Zero(4);
    psi(0) = std::sqrt(a);
    psi(3) = std::sqrt(1.0 - a);
    Mat p3 = psi * psi.adjoint();
    p3(1, 1) += 1.0;
    p3(2, 2) += 1.0;
    inst.projectors.push_back({2, {0, 1}, p3});
    validate(inst);
    mark_commutation(inst);
    return inst;
}

Projector basis_projector(int id, std::vector<int> qudits, const std::vector<int>& states, int d) {
    std::size_t k = 1;
    for (std::size_t i = 0; i < qudits.size(); ++i) k *= static_cast<std::size_t>(d);
    Mat local = Mat::Zero(k, k);
    for (int s : states) {
        if (s < 0 || static_cast<std::size_t>(s) >= k) throw std::out_of_range("basis state out of range");
        local(s, s) = 1.0;
    }
    return {id, std::move(qudits), local};
}

namespace {

std::vector<int> random_subset(Rng& rng, int n, int arity) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    for (int i = 0; i < arity; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
    std::vector<int> s(all.begin(), all.begin() + arity);
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

QlllInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& opt) {
    if (opt.n < 1 || opt.m < 0 || opt.d < 2 || opt.max_arity < 1)
        throw std::invalid_argument("random_instance: bad options");
    Rng rng(seed, 0xa11ce);
    QlllInstance inst;
    inst.shape = {opt.n, opt.d};
    const int max_arity = std::min(opt.max_arity, opt.n);
    // Planted product state: per-qudit basis digit (commuting) or random vector.
    std::vector<int> planted_digit(opt.n);
    std::vector<Vec> planted_vec(opt.n);
    for (int q = 0; q < opt.n; ++q) {
        planted_digit[q] = static_cast<int>(rng.below(opt.d));
        Vec v(opt.d);
        for (int t = 0; t < opt.d; ++t) v(t) = Cx(rng.normal(), rng.normal());
        planted_vec[q] = v.normalized();
    }
    for (int i = 0; i < opt.m; ++i) {
        int arity = 1 + static_cast<int>(rng.below(max_arity));
        auto qs = random_subset(rng, opt.n, arity);
        std::size_t k = 1;
        for (int t = 0; t < arity; ++t) k *= static_cast<std::size_t>(opt.d);
        int max_rank = static_cast<int>(opt.planted ? k - 1 : k);
        int rank = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, max_rank))));
        if (opt.commuting) {
            std::vector<int> states(k);
            for (std::size_t s = 0; s < k; ++s) states[s] = static_cast<int>(s);
            std::size_t forbidden = 0;
            for (int q : qs) forbidden = forbidden * opt.d + planted_digit[q];
            if (opt.planted) states.erase(states.begin() + static_cast<long>(forbidden));
            for (std::size_t t = 0; t < states.size(); ++t)
                std::swap(states[t], states[t + rng.below(states.size() - t)]);
            states.resize(static_cast<std::size_t>(rank));
            inst.projectors.push_back(basis_projector(i, qs, states, opt.d));
        } else {
            Mat local;
            if (opt.planted) {
                Vec v = planted_vec[qs[0]];
                for (std::size_t t = 1; t < qs.size(); ++t) {
                    Vec w(v.size() * opt.d);
                    for (Eigen::Index a = 0; a < v.size(); ++a)
                        for (int b = 0; b < opt.d; ++b) w(a * opt.d + b) = v(a) * planted_vec[qs[t]](b);
                    v = w;
                }
                // Random rank-r projector inside the orthogonal complement of v.
                Mat comp = identity(k) - v * v.adjoint();
                Mat g(k, rank);
                for (Eigen::Index c = 0; c < g.cols(); ++c)
                    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = Cx(rng.normal(), rng.normal());
                g = comp * g;
                Eigen::HouseholderQR<Mat> qr(g);
                Mat q = qr.householderQ() * Mat::Identity(k, rank);
                local = q * q.adjoint();
            } else {
                local = random_projector(k, rank, rng.next_u64());
            }
            local = 0.5 * (local + local.adjoint());
            inst.projectors.push_back({i, qs, local});
        }
    }
    validate(inst);
    mark_commutation(inst);
    return inst;
}

QlllInstance random_certified_commuting(std::uint64_t seed, int n, int m) {
    for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
        Rng rng(seed, attempt);
        QlllInstance inst;
        inst.shape = {n, 2};
        for (int i = 0; i < m; ++i) {
            int q = static_cast<int>(rng.below(n));
            if (rng.below(2) == 0 || n == 1) {
                inst.projectors.push_back(basis_projector(i, {q}, {static_cast<int>(rng.below(2))}, 2));
            } else {
                int r = (q + 1) % n;
                inst.projectors.push_back(
                    basis_projector(i, {std::min(q, r), std::max(q, r)}, {static_cast<int>(rng.below(4))}, 2));
            }
        }
        validate(inst);
        mark_commutation(inst);
        if (find_certificate(inst, 0.0)) return inst;
    }
    throw std::runtime_error("random_certified_commuting: no certified instance found");
}

}  // namespace qlll
