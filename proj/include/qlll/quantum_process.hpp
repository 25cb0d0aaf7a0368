#pragma once
// Pure-state trajectory simulation of the quantum solver, the converger, the
// exact commuting solver and the standalone tau-check.

#include "qlll/combinatorics.hpp"
#include "qlll/instance.hpp"
#include "qlll/log.hpp"
#include "qlll/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qlll {

// Applies local projectors to state vectors by gathering the d^|[i]|
// amplitudes of each complement basis state; never forms D x D matrices.
class StateSimulator {
public:
    explicit StateSimulator(const QlllInstance& inst);

    const QlllInstance& instance() const { return *inst_; }
    std::size_t dim() const { return dim_; }

    Vec apply(const Vec& psi, int i) const;               // Π_i ψ
    double expectation(const Vec& psi, int i) const;      // <ψ|Π_i|ψ>
    // ∏ (I - Π_i) ψ; only meaningful for commuting instances.
    Vec ground_component(const Vec& psi) const;

    Vec random_basis_state(Rng& rng) const;
    // Two-outcome measurement {Π_i, I - Π_i}; returns true on the Π_i outcome.
    bool measure(Vec& psi, int i, Rng& rng) const;
    // Measures [i] in the computational basis, discards the outcome and writes
    // fresh uniform basis digits in id order.
    void resample(Vec& psi, int i, Rng& rng) const;

private:
    const QlllInstance* inst_;
    std::size_t dim_;
    std::vector<std::vector<std::size_t>> offsets_;
    std::vector<std::vector<std::size_t>> bases_;
};

struct Outcome {
    int projector = 0;
    bool violated = false;
};

struct Trajectory {
    Vec state;
    ExecutionLog log;
    std::vector<Outcome> outcome_trace;  // filled only when requested
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t steps = 0;
};

struct SolverOptions {
    std::uint64_t max_steps = 0;          // 0 selects 1000·m
    bool keep_trace = false;
    std::size_t stop_after_violations = 0;  // 0 disables
    // Skip the remaining steps once every projector has zero expectation;
    // no further violation can occur from such a state.
    bool skip_when_settled = false;
};

Trajectory run_quantum_solver(const QlllInstance& inst, std::uint64_t seed, const SolverOptions& opt = {},
                              std::uint64_t stream = 0);
Trajectory run_quantum_solver(const StateSimulator& sim, std::uint64_t seed, const SolverOptions& opt,
                              std::uint64_t stream);

struct ConvergerResult {
    std::vector<double> mean_violation_prob;
    std::vector<double> violation_std_error;
    double ground_overlap = 0.0;
    double ground_std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t t = 0;
};

ConvergerResult run_converger(const QlllInstance& inst, std::uint64_t seed, std::uint64_t t, std::size_t samples,
                              int jobs = 1);

struct ExactSolverConfig {
    int p = 2;
    double m_prime = 0.0;
    std::vector<int> fixed_order;  // empty selects 0..m-1

    std::uint64_t iteration_cap(int m) const;
};

struct ExactSolverResult {
    bool success = false;
    Trajectory trajectory;
    std::uint64_t iterations = 0;
    double ground_overlap = 0.0;
};

ExactSolverResult run_exact_solver(const QlllInstance& inst, const ExactSolverConfig& cfg, std::uint64_t seed,
                                   std::uint64_t stream = 0);

struct TauCheckResult {
    double pass_frequency = 0.0;
    double std_error = 0.0;
    double expected = 0.0;  // ∏ tr[Π(v)]/D
    std::size_t samples = 0;
};

// `order` overrides the reverse breadth-first vertex order.
TauCheckResult tau_check(const WitnessTree& tree, const QlllInstance& inst, std::uint64_t seed, std::size_t samples,
                         int jobs = 1, const std::vector<int>& order = {});

// Frequency of each projector being the first violation; the last slot counts
// trajectories without a violation within max_steps.
std::vector<double> first_violation_frequencies(const QlllInstance& inst, std::uint64_t seed,
                                                std::size_t trajectories, std::uint64_t max_steps, int jobs = 1);

}  // namespace qlll
