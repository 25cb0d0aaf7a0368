#include "qlll/quantum_process.hpp"

#include "qlll/parallel.hpp"
#include "qlll/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlll {

namespace {
constexpr double settled_energy = 1e-24;
}

StateSimulator::StateSimulator(const QlllInstance& inst) : inst_(&inst), dim_(inst.shape.dim()) {
    require_dense_budget(inst.shape);
    for (const auto& p : inst.projectors) {
        offsets_.push_back(subset_offsets(p.qudits, inst.shape));
        bases_.push_back(complement_bases(p.qudits, inst.shape));
    }
}

Vec StateSimulator::apply(const Vec& psi, int i) const {
    const Mat& local = inst_->projectors[i].local;
    const auto& offs = offsets_[i];
    const Eigen::Index k = static_cast<Eigen::Index>(offs.size());
    Vec out = Vec::Zero(psi.size());
    Vec chunk(k);
    for (std::size_t b : bases_[i]) {
        for (Eigen::Index s = 0; s < k; ++s) chunk(s) = psi(b + offs[s]);
        Vec r = local * chunk;
        for (Eigen::Index s = 0; s < k; ++s) out(b + offs[s]) = r(s);
    }
    return out;
}

double StateSimulator::expectation(const Vec& psi, int i) const { return apply(psi, i).squaredNorm(); }

Vec StateSimulator::ground_component(const Vec& psi) const {
    Vec v = psi;
    for (int i = 0; i < inst_->m(); ++i) v -= apply(v, i);
    return v;
}

Vec StateSimulator::random_basis_state(Rng& rng) const {
    std::size_t idx = 0;
    for (int q = 0; q < inst_->shape.n; ++q) idx = idx * inst_->shape.d + rng.below(inst_->shape.d);
    Vec psi = Vec::Zero(dim_);
    psi(idx) = 1.0;
    return psi;
}

bool StateSimulator::measure(Vec& psi, int i, Rng& rng) const {
    Vec hit = apply(psi, i);
    const double p = hit.squaredNorm();
    const double u = rng.uniform();
    Vec miss = psi - hit;
    const double rest = miss.norm();
    if (u < p || rest < 1e-150) {
        psi = hit / std::sqrt(p);
        return true;
    }
    psi = miss / rest;
    return false;
}

void StateSimulator::resample(Vec& psi, int i, Rng& rng) const {
    const auto& offs = offsets_[i];
    const auto& bases = bases_[i];
    std::vector<double> weight(offs.size(), 0.0);
    for (std::size_t s = 0; s < offs.size(); ++s)
        for (std::size_t b : bases) weight[s] += std::norm(psi(b + offs[s]));
    double total = 0.0;
    for (double w : weight) total += w;
    double u = rng.uniform() * total;
    std::size_t outcome = 0;
    for (; outcome + 1 < offs.size(); ++outcome) {
        if (u < weight[outcome]) break;
        u -= weight[outcome];
    }
    while (weight[outcome] <= 0.0) outcome = (outcome + 1) % offs.size();
    std::size_t fresh = 0;
    for (std::size_t t = 0; t < inst_->projectors[i].qudits.size(); ++t)
        fresh = fresh * inst_->shape.d + rng.below(inst_->shape.d);
    Vec out = Vec::Zero(psi.size());
    const double scale = 1.0 / std::sqrt(weight[outcome]);
    for (std::size_t b : bases) out(b + offs[fresh]) = psi(b + offs[outcome]) * scale;
    psi = std::move(out);
}

Trajectory run_quantum_solver(const QlllInstance& inst, std::uint64_t seed, const SolverOptions& opt,
                              std::uint64_t stream) {
    StateSimulator sim(inst);
    return run_quantum_solver(sim, seed, opt, stream);
}

Trajectory run_quantum_solver(const StateSimulator& sim, std::uint64_t seed, const SolverOptions& opt,
                              std::uint64_t stream) {
    const auto& inst = sim.instance();
    const int m = inst.m();
    Rng rng(seed, stream);
    Trajectory tr;
    tr.seed = seed;
    tr.stream = stream;
    tr.log.seed = seed;
    tr.state = sim.random_basis_state(rng);
    const std::uint64_t max_steps = opt.max_steps ? opt.max_steps : 1000ULL * static_cast<std::uint64_t>(m);
    if (m == 0) return tr;
    std::uint64_t quiet = 0;
    for (std::uint64_t step = 0; step < max_steps; ++step) {
        const int i = static_cast<int>(rng.below(m));
        const bool violated = sim.measure(tr.state, i, rng);
        if (opt.keep_trace) tr.outcome_trace.push_back({i, violated});
        tr.steps = step + 1;
        if (violated) {
            tr.log.append(step, i);
            sim.resample(tr.state, i, rng);
            if (opt.stop_after_violations && tr.log.size() >= opt.stop_after_violations) break;
            quiet = 0;
        } else if (opt.skip_when_settled && ++quiet % static_cast<std::uint64_t>(m) == 0) {
            double energy = 0.0;
            for (int j = 0; j < m; ++j) energy += sim.expectation(tr.state, j);
            if (energy < settled_energy) {
                tr.steps = max_steps;
                break;
            }
        }
    }
    tr.log.total_steps = tr.steps;
    return tr;
}

ConvergerResult run_converger(const QlllInstance& inst, std::uint64_t seed, std::uint64_t t, std::size_t samples,
                              int jobs) {
    StateSimulator sim(inst);
    const int m = inst.m();
    const bool commuting = inst.commutation == Commutation::commuting;
    Mat p0;
    if (!commuting) p0 = ground_projector(inst);
    std::vector<std::vector<double>> per(samples, std::vector<double>(m + 1, 0.0));
    parallel_for(samples, jobs, [&](std::size_t s) {
        Rng pick(seed, 0x7a00000000000000ULL ^ s);
        const std::uint64_t tau = pick.below(t + 1);
        SolverOptions opt;
        opt.max_steps = tau;
        Trajectory tr = tau == 0 ? Trajectory{} : run_quantum_solver(sim, seed, opt, s);
        if (tau == 0) {
            Rng rng(seed, s);
            tr.state = sim.random_basis_state(rng);
        }
        for (int i = 0; i < m; ++i) per[s][i] = sim.expectation(tr.state, i);
        per[s][m] = commuting ? sim.ground_component(tr.state).squaredNorm()
                              : (tr.state.adjoint() * p0 * tr.state)(0, 0).real();
    });
    ConvergerResult r;
    r.samples = samples;
    r.t = t;
    std::vector<MeanEstimate> est(m + 1);
    for (const auto& row : per)
        for (int i = 0; i <= m; ++i) est[i].add(row[i]);
    for (int i = 0; i < m; ++i) {
        r.mean_violation_prob.push_back(est[i].mean());
        r.violation_std_error.push_back(est[i].std_error());
    }
    r.ground_overlap = est[m].mean();
    r.ground_std_error = est[m].std_error();
    return r;
}

std::uint64_t ExactSolverConfig::iteration_cap(int m) const {
    if (p <= 1) throw std::invalid_argument("exact solver needs p > 1");
    if (m_prime < 0.0) throw std::invalid_argument("m' must be non-negative");
    return static_cast<std::uint64_t>(std::ceil((m + 1) * (p * m_prime + 1.0)));
}

ExactSolverResult run_exact_solver(const QlllInstance& inst, const ExactSolverConfig& cfg, std::uint64_t seed,
                                   std::uint64_t stream) {
    if (inst.commutation != Commutation::commuting)
        throw std::invalid_argument("exact solver needs a verified-commuting instance");
    StateSimulator sim(inst);
    const int m = inst.m();
    std::vector<int> order = cfg.fixed_order;
    if (order.empty())
        for (int i = 0; i < m; ++i) order.push_back(i);
    {
        std::vector<int> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        bool perm = static_cast<int>(sorted.size()) == m;
        for (int i = 0; perm && i < m; ++i) perm = sorted[i] == i;
        if (!perm)
            throw std::invalid_argument("fixed order must be a permutation of the projector ids");
    }
    const std::uint64_t cap = cfg.iteration_cap(m);
    Rng rng(seed, stream);
    ExactSolverResult res;
    res.trajectory.seed = seed;
    res.trajectory.stream = stream;
    res.trajectory.log.seed = seed;
    res.trajectory.state = sim.random_basis_state(rng);
    int c = 0;
    std::uint64_t it = 0;
    while (c < m && it < cap) {
        const int i = order[it % static_cast<std::uint64_t>(m)];
        if (sim.measure(res.trajectory.state, i, rng)) {
            c = 0;
            res.trajectory.log.append(it, i);
            sim.resample(res.trajectory.state, i, rng);
        } else {
            ++c;
        }
        ++it;
    }
    res.iterations = it;
    res.trajectory.steps = it;
    res.trajectory.log.total_steps = it;
    res.success = c == m;
    res.ground_overlap = sim.ground_component(res.trajectory.state).squaredNorm();
    return res;
}

TauCheckResult tau_check(const WitnessTree& tree, const QlllInstance& inst, std::uint64_t seed, std::size_t samples,
                         int jobs, const std::vector<int>& order) {
    for (const auto& v : tree.vertices)
        if (v.label < 0 || v.label >= inst.m())
            throw std::out_of_range("tau-check: unknown label " + std::to_string(v.label));
    std::vector<int> visit = order;
    if (visit.empty()) {
        visit = tree.bfs_order();
        std::reverse(visit.begin(), visit.end());
    }
    TauCheckResult r;
    r.samples = samples;
    r.expected = 1.0;
    for (const auto& v : tree.vertices) r.expected *= relative_dimension(inst.projectors[v.label], inst.shape);
    std::vector<std::uint8_t> pass(samples, 0);
    const int d = inst.shape.d;
    parallel_for(samples, jobs, [&](std::size_t s) {
        Rng rng(seed, s);
        for (int v : visit) {
            const auto& p = inst.projectors[tree.vertices[v].label];
            std::size_t b = 0;
            for (std::size_t t = 0; t < p.qudits.size(); ++t) b = b * d + rng.below(d);
            // <b|Π^T|b> equals the diagonal entry Π(b,b).
            if (rng.uniform() >= p.local(b, b).real()) return;
        }
        pass[s] = 1;
    });
    MeanEstimate est;
    for (auto p : pass) est.add(p);
    r.pass_frequency = est.mean();
    r.std_error = est.std_error();
    return r;
}

std::vector<double> first_violation_frequencies(const QlllInstance& inst, std::uint64_t seed,
                                                std::size_t trajectories, std::uint64_t max_steps, int jobs) {
    StateSimulator sim(inst);
    std::vector<int> first(trajectories, -1);
    parallel_for(trajectories, jobs, [&](std::size_t s) {
        SolverOptions opt;
        opt.max_steps = max_steps;
        opt.stop_after_violations = 1;
        auto tr = run_quantum_solver(sim, seed, opt, s);
        if (!tr.log.entries.empty()) first[s] = tr.log.entries.front().label;
    });
    std::vector<double> freq(inst.m() + 1, 0.0);
    for (int f : first) freq[f < 0 ? inst.m() : f] += 1.0;
    for (double& v : freq) v /= static_cast<double>(trajectories);
    return freq;
}

}  // namespace qlll
