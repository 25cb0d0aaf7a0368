#pragma once
// Experiment harness: violation audits, CP-map convergence, the two-qubit
// counter-example family, conjecture evidence and convergence metrics.

#include "qlll/combinatorics.hpp"
#include "qlll/instance.hpp"
#include "qlll/oracles.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qlll {

// ρ -> (1/m) Σ_i [(I-Π_i)ρ(I-Π_i) + E_i(Π_i ρ Π_i)]
Mat cp_map_step(const ChannelAlgebra& alg, const Mat& rho);

struct ConvergenceRecord {
    std::uint64_t t = 0;
    double ground_overlap = 0.0;        // tr[P0 ρ_t]
    std::vector<double> violation;      // tr[Π_i ρ_t]
    double worst_violation() const;
};

struct ConvergenceSeries {
    std::vector<ConvergenceRecord> records;  // t = 0..t_max
    double worst_drop = 0.0;                 // largest decrease of tr[P0 ρ_t]
    bool monotone = true;                    // worst_drop <= 1e-10
};

ConvergenceSeries cp_map_iterate(const QlllInstance& inst, const Mat& rho0, std::uint64_t t_max);

struct HorizonResult {
    std::uint64_t max_steps = 0;
    double mean = 0.0;
    double std_error = 0.0;
    std::vector<double> per_projector;
};

struct ViolationAudit {
    double bound = 0.0;  // Σ x_i/(1-x_i)
    std::vector<HorizonResult> horizons;
    std::size_t trajectories = 0;
    std::uint64_t seed = 0;
    bool within_bound = true;           // every horizon mean <= bound + 3σ
    bool horizon_independent = true;    // consecutive horizons agree within 3σ
};

// Runs the same seeded trajectories at each horizon.
ViolationAudit violation_audit(const QlllInstance& inst, const LovaszCertificate& cert, std::size_t trajectories,
                               const std::vector<std::uint64_t>& horizons, std::uint64_t seed, int jobs = 1);

struct CounterexampleAnalytic {
    double a = 0.0;
    double pr_tau = 0.0;
    double bound = 0.25;
    double threshold = 0.0;  // (3/20)(√41 - 1)
    double limit = 0.0;      // value as a -> 1 from below
    bool violates = false;
};

CounterexampleAnalytic counterexample_analytic(double a);
// tr X_(1,2) + tr X_(2,1) on the example instance.
double counterexample_exact(double a);

struct CounterexampleAudit {
    CounterexampleAnalytic analytic;
    double exact = 0.0;
    double monte_carlo = 0.0;
    double mc_sigma = 0.0;
    std::size_t trajectories = 0;
    bool exact_matches_analytic = false;  // 1e-8
    bool mc_matches_analytic = false;     // 3σ
    bool mc_matches_exact = false;        // 3σ
    bool exact_violates_bound = false;
};

CounterexampleAudit counterexample_audit(double a, std::size_t trajectories, std::uint64_t seed, int jobs = 1);

enum class ConjectureMode { exact, monte_carlo };

struct ConjectureReport {
    std::string structure;  // canonical form
    std::string sense;      // "first-violations" or "witness-tree" / "full-dag"
    int size = 0;
    double probability = 0.0;
    double std_error = 0.0;  // zero in exact mode
    std::size_t samples = 0;
    double product = 0.0;    // ∏ R(Π_v)
    double ratio = 0.0;
    double delta = 0.0;
    double gap_bound = 0.0;  // (mδ)^{-|τ|} ∏ R(Π_v)
    double gap_ratio = 0.0;
};

constexpr int conjecture_exact_cap = 3;

// Exact mode sums sequence operators over the first-|τ|-violation orders that
// produce the structure; Monte Carlo mode counts trajectories (budget = count,
// horizon max_steps, 0 selects 100·m) whose log contains it.
ConjectureReport conjecture_test(const QlllInstance& inst, const WitnessTree& tree, ConjectureMode mode,
                                 std::size_t budget, std::uint64_t seed, int jobs = 1, std::uint64_t max_steps = 0);
ConjectureReport conjecture_test(const QlllInstance& inst, const ResampleDag& dag, ConjectureMode mode,
                                 std::size_t budget, std::uint64_t seed, int jobs = 1, std::uint64_t max_steps = 0);

struct ConvergenceMetrics {
    double weak = 0.0;    // max_i tr[Π_i ρ]
    double strong = 0.0;  // 1 - tr[P0 ρ]
    double energy = 0.0;  // (1/m) Σ_i tr[Π_i ρ]
    double delta = 0.0;
    bool relation_applicable = false;  // frustration-free with a positive gap
    bool relation_holds = true;        // strong <= energy/δ <= weak/δ
};

ConvergenceMetrics convergence_metrics(const Mat& rho, const QlllInstance& inst);

struct WeakStrongExample {
    QlllInstance instance;  // two rank-1 projectors on one qutrit with overlap 1-δ
    Mat rho;
    ConvergenceMetrics metrics;
};

WeakStrongExample weak_strong_example(double delta);

}  // namespace qlll
