#include "qlll/generators.hpp"
#include "qlll/instance_io.hpp"
#include "qlll/oracles.hpp"
#include "qlll/quantum_process.hpp"
#include "qlll/stats.hpp"
#include "support.hpp"

#include <doctest.h>

#include <map>

using namespace qlll;
using namespace qlll::test;

namespace {

Vec random_vector(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed, 3);
    Vec v(dim);
    for (std::size_t i = 0; i < dim; ++i) v(i) = Cx(rng.normal(), rng.normal());
    return v.normalized();
}

QlllInstance qutrit_instance() {
    RandomInstanceOptions opt;
    opt.n = 3;
    opt.m = 4;
    opt.d = 3;
    opt.max_arity = 2;
    return random_instance(21, opt);
}

}  // namespace

TEST_CASE("local application agrees with the embedded matrix") {
    for (const auto& inst : {load_instance(data("noncommuting.json")), qutrit_instance()}) {
        StateSimulator sim(inst);
        Vec psi = random_vector(sim.dim(), 5);
        for (int i = 0; i < inst.m(); ++i) {
            Mat full = embed_by_elements(inst.projectors[i].local, inst.projectors[i].qudits, inst.shape);
            Vec want = full * psi;
            CHECK((sim.apply(psi, i) - want).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(sim.expectation(psi, i) == doctest::Approx((psi.adjoint() * want)(0, 0).real()).epsilon(1e-12));
        }
    }
}

TEST_CASE("ground component of a commuting instance is the kernel projection") {
    auto inst = load_instance(data("chain.json"));
    StateSimulator sim(inst);
    Vec psi = random_vector(sim.dim(), 8);
    Vec want = ground_projector(inst) * psi;
    CHECK((sim.ground_component(psi) - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("measurement follows the Born rule and collapses") {
    auto inst = load_instance(data("noncommuting.json"));
    StateSimulator sim(inst);
    const Vec psi = random_vector(sim.dim(), 2);
    const double p = sim.expectation(psi, 1);
    Rng rng(1, 0);
    const int n = 40000;
    int hits = 0;
    for (int k = 0; k < n; ++k) {
        Vec v = psi;
        bool hit = sim.measure(v, 1, rng);
        hits += hit;
        CHECK(std::abs(v.norm() - 1.0) < 1e-12);
        // Collapsed state lies in the range of Π or of I - Π.
        CHECK(std::abs(sim.expectation(v, 1) - (hit ? 1.0 : 0.0)) < 1e-10);
    }
    CHECK(std::abs(hits / double(n) - p) < 5 * binomial_sigma(p, n));
}

TEST_CASE("averaged resample equals the reset channel") {
    // E|ψ'><ψ'| = tr_[i](ρ) ⊗ I/d^|[i]| for ρ = |ψ><ψ|.
    auto inst = qutrit_instance();
    StateSimulator sim(inst);
    const Vec psi = random_vector(sim.dim(), 4);
    const Mat rho = psi * psi.adjoint();
    for (int i : {0, 2}) {
        Mat avg = Mat::Zero(sim.dim(), sim.dim());
        Rng rng(7, i);
        const int n = 20000;
        for (int k = 0; k < n; ++k) {
            Vec v = psi;
            sim.resample(v, i, rng);
            CHECK(std::abs(v.norm() - 1.0) < 1e-12);
            avg += v * v.adjoint();
        }
        avg /= double(n);
        CHECK(max_abs(avg - reset_qudits(rho, inst.projectors[i].qudits, inst.shape)) < 0.02);
    }
}

TEST_CASE("violation sequences of a diagonal instance match the Markov chain") {
    auto inst = load_instance(data("chain.json"));
    DiagonalChain chain{inst};
    const std::size_t n = 40000;
    std::map<std::vector<int>, int> counts;
    StateSimulator sim(inst);
    SolverOptions opt;
    opt.max_steps = 100000;
    opt.stop_after_violations = 2;
    opt.skip_when_settled = true;
    for (std::size_t s = 0; s < n; ++s) {
        auto tr = run_quantum_solver(sim, 17, opt, s);
        counts[tr.log.labels()]++;
    }
    double total = 0.0;
    for (const auto& seq : all_sequences(inst.m(), 2)) {
        double p = chain.sequence(seq);
        total += p;
        double f = counts[seq] / double(n);
        CHECK(std::abs(f - p) < 5 * binomial_sigma(p, n) + 1e-12);
    }
    CHECK(total <= 1.0 + 1e-12);
}

TEST_CASE("first-violation frequencies match the halting operators") {
    auto inst = load_instance(data("noncommuting.json"));
    const std::size_t n = 20000;
    auto freq = first_violation_frequencies(inst, 3, n, 3000, 2);
    REQUIRE(freq.size() == 4);
    double none = 1.0;
    for (int a = 0; a < inst.m(); ++a) {
        double p = halting_operator(inst, a).probability;
        none -= p;
        CHECK(std::abs(freq[a] - p) < 5 * binomial_sigma(p, n));
    }
    CHECK(std::abs(freq[3] - none) < 5 * binomial_sigma(std::max(none, 1e-4), n));
}

TEST_CASE("trajectories are reproducible and job-count independent") {
    auto inst = load_instance(data("noncommuting.json"));
    SolverOptions opt;
    opt.keep_trace = true;
    opt.max_steps = 50;
    auto a = run_quantum_solver(inst, 11, opt, 4);
    auto b = run_quantum_solver(inst, 11, opt, 4);
    CHECK(a.log.labels() == b.log.labels());
    CHECK((a.state - b.state).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.outcome_trace.size() == a.steps);
    int violations = 0;
    for (const auto& o : a.outcome_trace) violations += o.violated;
    CHECK(static_cast<std::size_t>(violations) == a.log.size());
    CHECK(first_violation_frequencies(inst, 2, 500, 100, 1) == first_violation_frequencies(inst, 2, 500, 100, 3));
    auto c1 = run_converger(inst, 6, 10, 300, 1);
    auto c3 = run_converger(inst, 6, 10, 300, 3);
    CHECK(c1.mean_violation_prob == c3.mean_violation_prob);
    CHECK(c1.ground_overlap == c3.ground_overlap);
}

TEST_CASE("settled skipping leaves the violation log unchanged") {
    auto inst = load_instance(data("chain.json"));
    StateSimulator sim(inst);
    SolverOptions plain;
    plain.max_steps = 400;
    SolverOptions skip = plain;
    skip.skip_when_settled = true;
    for (std::uint64_t s = 0; s < 200; ++s) {
        auto a = run_quantum_solver(sim, 5, plain, s);
        auto b = run_quantum_solver(sim, 5, skip, s);
        CHECK(a.log.labels() == b.log.labels());
        CHECK(b.steps == 400);
    }
}

TEST_CASE("converger on one qubit matches the closed form") {
    // Π = |1><1|. After τ steps Pr[|1>] = 2^-(τ+1); τ is uniform on 0..t.
    auto inst = load_instance(data("single.json"));
    for (std::uint64_t t : {0, 1, 3, 8}) {
        auto r = run_converger(inst, 12, t, 40000, 2);
        const double want = (1.0 - std::pow(2.0, -double(t + 1))) / double(t + 1);
        CHECK(std::abs(r.mean_violation_prob[0] - want) < 5 * binomial_sigma(want, r.samples));
        CHECK(r.ground_overlap == doctest::Approx(1.0 - r.mean_violation_prob[0]).epsilon(1e-12));
    }
}

TEST_CASE("exact solver") {
    auto inst = load_instance(data("chain.json"));
    ExactSolverConfig cfg;
    cfg.p = 2;
    cfg.m_prime = 10.0;
    CHECK(cfg.iteration_cap(3) == 4 * 21);
    int successes = 0;
    for (std::uint64_t s = 0; s < 500; ++s) {
        auto r = run_exact_solver(inst, cfg, 9, s);
        if (!r.success) continue;
        ++successes;
        CHECK(r.ground_overlap == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.iterations <= cfg.iteration_cap(3));
    }
    CHECK(successes > 400);
    cfg.fixed_order = {2, 0, 1};
    CHECK(run_exact_solver(inst, cfg, 1).iterations >= 3);
    cfg.fixed_order = {0, 0, 1};
    CHECK_THROWS_AS(run_exact_solver(inst, cfg, 1), std::invalid_argument);
    cfg.fixed_order.clear();
    cfg.p = 1;
    CHECK_THROWS_AS(run_exact_solver(inst, cfg, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_exact_solver(load_instance(data("noncommuting.json")), ExactSolverConfig{}, 1),
                    std::invalid_argument);
}

TEST_CASE("tau-check frequency matches the product of relative dimensions") {
    auto inst = load_instance(data("noncommuting.json"));
    WitnessTree tree = WitnessTree::single(1);
    tree.add_child(0, 0);
    tree.add_child(0, 2);
    double product = 1.0;
    for (int label : {1, 0, 2})
        product *= inst.projectors[label].local.trace().real() / double(inst.projectors[label].local.rows());
    const std::size_t n = 100000;
    auto r = tau_check(tree, inst, 4, n, 2);
    CHECK(r.expected == doctest::Approx(product).epsilon(1e-12));
    CHECK(std::abs(r.pass_frequency - product) < 5 * binomial_sigma(product, n));
    CHECK_THROWS_AS(tau_check(WitnessTree::single(9), inst, 1, 10), std::out_of_range);
}
