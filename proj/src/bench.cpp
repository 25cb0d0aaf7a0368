#include "qlll/bench.hpp"

#include "qlll/generators.hpp"
#include "qlll/parallel.hpp"
#include "qlll/quantum_process.hpp"
#include "qlll/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace qlll {

namespace {

constexpr double monotone_tol = 1e-10;

double product_of_ranks(const QlllInstance& inst, const std::vector<int>& labels) {
    double p = 1.0;
    for (int l : labels) {
        if (l < 0 || l >= inst.m()) throw std::out_of_range("label " + std::to_string(l) + " is not a projector id");
        p *= relative_dimension(inst.projectors[l], inst.shape);
    }
    return p;
}

// Sum of tr X_s over length-t sequences accepted by `keep`, sharing prefixes.
double exact_first_violations(const QlllInstance& inst, int t,
                              const std::function<bool(const std::vector<int>&)>& keep) {
    ChannelAlgebra alg(inst);
    const std::size_t D = inst.shape.dim();
    std::vector<int> seq;
    auto walk = [&](auto&& self, const Mat& x) -> double {
        if (static_cast<int>(seq.size()) == t) return keep(seq) ? trace_real(x) : 0.0;
        double total = 0.0;
        for (int a = 0; a < inst.m(); ++a) {
            seq.push_back(a);
            total += self(self, alg.reset(a, alg.halt_on(a, x)));
            seq.pop_back();
        }
        return total;
    };
    return walk(walk, identity(D) / static_cast<double>(D));
}

void finish_report(ConjectureReport& r, const QlllInstance& inst, const std::vector<int>& labels) {
    r.product = product_of_ranks(inst, labels);
    r.ratio = r.product > 0.0 ? r.probability / r.product : 0.0;
    auto spec = spectral_report(inst);
    r.delta = spec.delta;
    if (spec.delta > 0.0) {
        r.gap_bound = r.product * std::pow(inst.m() * spec.delta, -static_cast<double>(labels.size()));
        r.gap_ratio = r.probability / r.gap_bound;
    }
}

template <class Match>
void monte_carlo_frequency(ConjectureReport& r, const QlllInstance& inst, std::size_t budget, std::uint64_t seed,
                           int jobs, const SolverOptions& opt, Match match) {
    StateSimulator sim(inst);
    std::vector<std::uint8_t> hit(budget, 0);
    parallel_for(budget, jobs, [&](std::size_t s) {
        auto tr = run_quantum_solver(sim, seed, opt, s);
        hit[s] = match(tr.log.labels()) ? 1 : 0;
    });
    MeanEstimate est;
    for (auto h : hit) est.add(h);
    r.probability = est.mean();
    r.std_error = est.std_error();
    r.samples = budget;
}

}  // namespace

Mat cp_map_step(const ChannelAlgebra& alg, const Mat& rho) {
    Mat out = Mat::Zero(alg.dim(), alg.dim());
    for (int i = 0; i < alg.m(); ++i) out += alg.transfer(i, rho);
    return out / static_cast<double>(alg.m());
}

double ConvergenceRecord::worst_violation() const {
    return violation.empty() ? 0.0 : *std::max_element(violation.begin(), violation.end());
}

ConvergenceSeries cp_map_iterate(const QlllInstance& inst, const Mat& rho0, std::uint64_t t_max) {
    if (inst.m() == 0) throw std::invalid_argument("CP-map iteration needs at least one projector");
    ChannelAlgebra alg(inst);
    if (static_cast<std::size_t>(rho0.rows()) != alg.dim() || rho0.cols() != rho0.rows())
        throw std::invalid_argument("initial state has the wrong dimension");
    require_hermitian(rho0, "cp_map_iterate");
    if (std::abs(trace_real(rho0) - 1.0) > 1e-9) throw std::invalid_argument("initial state must have unit trace");
    ConvergenceSeries series;
    Mat rho = rho0;
    for (std::uint64_t t = 0;; ++t) {
        ConvergenceRecord rec;
        rec.t = t;
        rec.ground_overlap = trace_real(alg.ground() * rho);
        for (int i = 0; i < inst.m(); ++i) rec.violation.push_back(trace_real(alg.projector(i) * rho));
        if (!series.records.empty())
            series.worst_drop = std::max(series.worst_drop, series.records.back().ground_overlap - rec.ground_overlap);
        series.records.push_back(std::move(rec));
        if (t == t_max) break;
        rho = cp_map_step(alg, rho);
    }
    series.monotone = series.worst_drop <= monotone_tol;
    return series;
}

ViolationAudit violation_audit(const QlllInstance& inst, const LovaszCertificate& cert, std::size_t trajectories,
                               const std::vector<std::uint64_t>& horizons, std::uint64_t seed, int jobs) {
    const int m = inst.m();
    ViolationAudit audit;
    audit.bound = expected_violations_bound(cert);
    audit.trajectories = trajectories;
    audit.seed = seed;
    StateSimulator sim(inst);
    for (std::uint64_t h : horizons) {
        std::vector<std::vector<double>> counts(trajectories, std::vector<double>(m, 0.0));
        parallel_for(trajectories, jobs, [&](std::size_t s) {
            SolverOptions opt;
            opt.max_steps = h;
            opt.skip_when_settled = true;
            auto tr = run_quantum_solver(sim, seed, opt, s);
            for (const auto& e : tr.log.entries) counts[s][e.label] += 1.0;
        });
        HorizonResult hr;
        hr.max_steps = h;
        MeanEstimate total;
        std::vector<MeanEstimate> per(m);
        for (const auto& row : counts) {
            double sum = 0.0;
            for (int i = 0; i < m; ++i) {
                per[i].add(row[i]);
                sum += row[i];
            }
            total.add(sum);
        }
        hr.mean = total.mean();
        hr.std_error = total.std_error();
        for (const auto& p : per) hr.per_projector.push_back(p.mean());
        if (hr.mean > audit.bound + 3.0 * hr.std_error) audit.within_bound = false;
        if (!audit.horizons.empty()) {
            const auto& prev = audit.horizons.back();
            double sigma = std::hypot(prev.std_error, hr.std_error);
            if (std::abs(prev.mean - hr.mean) > 3.0 * sigma + 1e-12) audit.horizon_independent = false;
        }
        audit.horizons.push_back(std::move(hr));
    }
    return audit;
}

CounterexampleAnalytic counterexample_analytic(double a) {
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("counter-example parameter a must lie in (0,1]");
    CounterexampleAnalytic r;
    r.a = a;
    const double b = 1.0 - a;
    r.threshold = 0.15 * (std::sqrt(41.0) - 1.0);
    r.limit = 37.0 / 144.0;
    if (a == 1.0)
        r.pr_tau = 1.0 / 9.0;
    else
        r.pr_tau = 1.0 / 9.0 + 7.0 * a / (24.0 * (1.0 + a)) + b * (11.0 + 12.0 * a) / (144.0 * (1.0 + a) * (1.0 + a));
    r.violates = r.pr_tau > r.bound;
    return r;
}

double counterexample_exact(double a) {
    const QlllInstance inst = counterexample_instance(a);
    ChannelAlgebra alg(inst);
    return sequence_operator(alg, {0, 1}).probability + sequence_operator(alg, {1, 0}).probability;
}

CounterexampleAudit counterexample_audit(double a, std::size_t trajectories, std::uint64_t seed, int jobs) {
    CounterexampleAudit r;
    r.analytic = counterexample_analytic(a);
    r.exact = counterexample_exact(a);
    r.trajectories = trajectories;
    const QlllInstance inst = counterexample_instance(a);
    StateSimulator sim(inst);
    std::vector<std::uint8_t> hit(trajectories, 0);
    parallel_for(trajectories, jobs, [&](std::size_t s) {
        SolverOptions opt;
        opt.max_steps = 10000ULL * static_cast<std::uint64_t>(inst.m());
        opt.stop_after_violations = 2;
        opt.skip_when_settled = true;
        auto labels = run_quantum_solver(sim, seed, opt, s).log.labels();
        hit[s] = labels.size() == 2 && labels[0] + labels[1] == 1 && labels[0] != labels[1];
    });
    MeanEstimate est;
    for (auto h : hit) est.add(h);
    r.monte_carlo = est.mean();
    r.mc_sigma = binomial_sigma(r.exact, trajectories);
    r.exact_matches_analytic = std::abs(r.exact - r.analytic.pr_tau) <= 1e-8;
    r.mc_matches_analytic =
        std::abs(r.monte_carlo - r.analytic.pr_tau) <= 3.0 * binomial_sigma(r.analytic.pr_tau, trajectories);
    r.mc_matches_exact = std::abs(r.monte_carlo - r.exact) <= 3.0 * r.mc_sigma;
    r.exact_violates_bound = r.exact > r.analytic.bound;
    return r;
}

ConjectureReport conjecture_test(const QlllInstance& inst, const WitnessTree& tree, ConjectureMode mode,
                                 std::size_t budget, std::uint64_t seed, int jobs, std::uint64_t max_steps) {
    if (tree.size() == 0) throw std::invalid_argument("conjecture test needs a nonempty tree");
    const auto g = intersection_graph(inst);
    const std::string want = tree.canonical();
    ConjectureReport r;
    r.structure = want;
    r.size = tree.size();
    if (mode == ConjectureMode::exact) {
        if (tree.size() > conjecture_exact_cap)
            throw std::length_error("exact conjecture mode is limited to " + std::to_string(conjecture_exact_cap) +
                                    " vertices");
        r.sense = "first-violations";
        r.probability = exact_first_violations(inst, tree.size(), [&](const std::vector<int>& seq) {
            return build_witness_tree(seq, seq.size() - 1, g).canonical() == want;
        });
    } else {
        r.sense = "witness-tree";
        SolverOptions opt;
        opt.max_steps = max_steps ? max_steps : 100ULL * static_cast<std::uint64_t>(inst.m());
        opt.skip_when_settled = true;
        monte_carlo_frequency(r, inst, budget, seed, jobs, opt,
                              [&](const std::vector<int>& labels) { return occurs_in_log(tree, labels, g); });
    }
    finish_report(r, inst, tree.labels());
    return r;
}

ConjectureReport conjecture_test(const QlllInstance& inst, const ResampleDag& dag, ConjectureMode mode,
                                 std::size_t budget, std::uint64_t seed, int jobs, std::uint64_t max_steps) {
    if (dag.size() == 0) throw std::invalid_argument("conjecture test needs a nonempty DAG");
    if (dag.partial) throw std::invalid_argument("conjecture test takes full resample DAGs");
    const auto g = intersection_graph(inst);
    const std::string want = dag.canonical();
    ConjectureReport r;
    r.structure = want;
    r.size = dag.size();
    const std::size_t t = static_cast<std::size_t>(dag.size());
    auto match = [&](const std::vector<int>& seq) {
        return seq.size() >= t && build_resample_dag({seq.begin(), seq.begin() + static_cast<long>(t)}, g).canonical() == want;
    };
    if (mode == ConjectureMode::exact) {
        if (dag.size() > conjecture_exact_cap)
            throw std::length_error("exact conjecture mode is limited to " + std::to_string(conjecture_exact_cap) +
                                    " vertices");
        r.sense = "first-violations";
        r.probability = exact_first_violations(inst, dag.size(), match);
    } else {
        r.sense = "full-dag";
        SolverOptions opt;
        opt.max_steps = max_steps ? max_steps : 100ULL * static_cast<std::uint64_t>(inst.m());
        opt.stop_after_violations = t;
        opt.skip_when_settled = true;
        monte_carlo_frequency(r, inst, budget, seed, jobs, opt, match);
    }
    finish_report(r, inst, dag.labels);
    return r;
}

ConvergenceMetrics convergence_metrics(const Mat& rho, const QlllInstance& inst) {
    require_hermitian(rho, "convergence_metrics");
    if (std::abs(trace_real(rho) - 1.0) > 1e-9) throw std::invalid_argument("state must have unit trace");
    if (inst.m() == 0) throw std::invalid_argument("convergence metrics need at least one projector");
    auto spec = spectral_report(inst);
    ConvergenceMetrics r;
    double sum = 0.0;
    for (int i = 0; i < inst.m(); ++i) {
        double v = trace_real(inst.embedded(i) * rho);
        r.weak = std::max(r.weak, v);
        sum += v;
    }
    r.energy = sum / inst.m();
    r.strong = 1.0 - trace_real(spec.p0 * rho);
    r.delta = spec.delta;
    r.relation_applicable = spec.frustration_free && spec.delta > 1e-10;
    if (r.relation_applicable)
        r.relation_holds = r.strong <= r.energy / r.delta + 1e-10 && r.energy <= r.weak + 1e-12;
    return r;
}

WeakStrongExample weak_strong_example(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("overlap parameter must lie in (0,1)");
    WeakStrongExample ex;
    ex.instance.shape = {1, 3};
    Vec psi = Vec::Zero(3);
    psi(0) = 1.0;
    Vec psi2 = Vec::Zero(3);
    psi2(0) = std::sqrt(1.0 - delta);
    psi2(1) = std::sqrt(delta);
    ex.instance.projectors.push_back({0, {0}, psi * psi.adjoint()});
    ex.instance.projectors.push_back({1, {0}, psi2 * psi2.adjoint()});
    validate(ex.instance);
    mark_commutation(ex.instance);
    // The normalized part of psi2 orthogonal to psi.
    Vec perp = psi2 - psi * psi.dot(psi2);
    perp.normalize();
    ex.rho = perp * perp.adjoint();
    ex.metrics = convergence_metrics(ex.rho, ex.instance);
    return ex;
}

}  // namespace qlll
