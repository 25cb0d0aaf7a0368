#pragma once
// Exact outcome operators of the iterated measurement process and checks of
// the operator inequalities they satisfy. Dense superoperators are D^2 x D^2,
// so every route here is limited to D <= 64.

#include "qlll/instance.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qlll {

constexpr std::size_t superoperator_dim_cap = 64;
void require_superoperator_budget(const Shape& shape);

struct Superoperator {
    Shape shape;
    Mat matrix;  // acts on column-stacked vectors

    Mat apply(const Mat& x) const;
};

// Σ_k conj(K) ⊗ K, i.e. X -> Σ_k K X K†.
Superoperator superoperator_from_kraus(const std::vector<Mat>& kraus, const Shape& shape);

struct ChannelSet {
    std::vector<Superoperator> measure;   // M_a(ρ) = Π_a ρ Π_a
    std::vector<Superoperator> reset;     // E_a(ρ) = tr_[a](ρ) ⊗ I/d_[a]
    std::vector<Superoperator> transfer;  // T_a(σ) = (I-Π_a)σ(I-Π_a) + E_a(Π_a σ Π_a)
    Superoperator cont;                   // M_cont(ρ) = (1/m) Σ (I-Π_i) ρ (I-Π_i)
};

ChannelSet build_channels(const QlllInstance& inst);

struct SeriesStats {
    std::uint64_t iterations = 0;
    double remainder = 0.0;  // bound on the trace still missing from the sum
};

// Kraus-form evaluation of the maps; never builds superoperators.
class ChannelAlgebra {
public:
    explicit ChannelAlgebra(const QlllInstance& inst);

    const QlllInstance& instance() const { return *inst_; }
    int m() const { return inst_->m(); }
    std::size_t dim() const { return dim_; }
    const Mat& projector(int a) const { return proj_[a]; }
    const Mat& ground() const { return p0_; }

    Mat measure(int a, const Mat& x) const;
    Mat reset(int a, const Mat& x) const;
    Mat reset_set(const std::vector<int>& qudits, const Mat& x) const;
    Mat transfer(int a, const Mat& x) const;
    Mat cont(const Mat& x) const;
    // Continuation in which outcomes of `irrelevant` projectors are resampled
    // and the process goes on.
    Mat cont_partial(const std::vector<int>& irrelevant, const Mat& x) const;

    // Σ_t S M_cont^t(x) S† for a sandwich S with S P0 = 0 (a product of
    // commuting projectors). Stops when the mass outside the common kernel is
    // below 1e-13.
    Mat sandwiched_sum(const Mat& sandwich, const Mat& x, SeriesStats* stats = nullptr) const;
    // (1/m) M_a(M_Σ(x)): the branch in which the next violation is a.
    Mat halt_on(int a, const Mat& x, SeriesStats* stats = nullptr) const;
    // Same with the partial continuation; stops once the total violation
    // weight (1/m) Σ tr[Π_j s] of the running term is below 1e-15.
    Mat halt_on_partial(int a, const std::vector<int>& irrelevant, const Mat& x,
                        SeriesStats* stats = nullptr) const;
    Mat sum_partial(const Mat& sandwich, const std::vector<int>& irrelevant, const Mat& x,
                    SeriesStats* stats = nullptr) const;

private:
    const QlllInstance* inst_;
    std::size_t dim_;
    std::vector<Mat> proj_;
    std::vector<Mat> comp_;  // I - Π_i
    Mat p0_;
};

constexpr std::uint64_t series_iteration_cap = 100000;

struct OutcomeOperator {
    Mat op;
    double probability = 0.0;
    std::string provenance;
};

OutcomeOperator halting_operator(const QlllInstance& inst, int a);
// (1/m)(conj(Π_a) ⊗ Π_a)(I - T)^+ vec(I/D) with T the M_cont superoperator.
Mat halting_operator_resolvent(const QlllInstance& inst, int a);

OutcomeOperator sequence_operator(const QlllInstance& inst, const std::vector<int>& ids);
OutcomeOperator sequence_operator(const ChannelAlgebra& alg, const std::vector<int>& ids);

// Σ_{|s|=t} tr X_s + Σ_{j<t} Σ_{|s|=j} tr[P0 X_s]; equals 1.
double outcome_completeness(const QlllInstance& inst, int t);

struct PartResult {
    std::string part;
    std::string status;  // "passed", "failed" or "skipped"
    double residual = 0.0;
    double slack_min = 0.0;
    std::string note;
};

struct SuiteReport {
    std::string lemma;
    std::vector<PartResult> parts;
    bool pass() const;  // no part failed
};

// {"lemma", "pass", "residual", "slack_min", "seeds", "parts"}
nlohmann::json suite_to_json(const SuiteReport& r, const std::vector<std::uint64_t>& seeds);

SuiteReport verify_cp_identities(const QlllInstance& inst, std::uint64_t seed = 1);

struct GapBoundReport {
    int a = 0;
    double probability = 0.0;
    PsdCheck plain;  // X_a <= Π_a / D
    bool gap_applicable = false;
    std::string gap_note;
    PsdCheck gap;  // X_a <= Π_a / (m δ D)
    double delta = 0.0;
};

GapBoundReport first_violation_gap_bound(const QlllInstance& inst, int a);

SuiteReport shortclaim_suite(const QlllInstance& inst, const std::vector<int>& product_ids, int max_power = 4);

struct SequenceBoundReport {
    double probability = 0.0;
    double dag_probability = 0.0;
    double product = 0.0;  // ∏ tr[Π_{a_i}/D]
    double slack = 0.0;    // bound - probability
    bool holds = true;
};

// tr X_seq <= p_G(seq) ∏ tr[Π/D] for the full resample DAG of seq.
SequenceBoundReport sequence_bound(const QlllInstance& inst, const std::vector<int>& ids);

// Relevant sequence a_1..a_t with gap sets X_1..X_t; X_i holds projectors that
// may occur between a_{i-1} and a_i without becoming relevant.
SequenceBoundReport partial_dag_channel_bound(const QlllInstance& inst, const std::vector<int>& relevant_ids,
                                              const std::vector<std::vector<int>>& irrelevant_sets);

struct TracedLemmaReport {
    PsdCheck check;
    double slack = 0.0;
};

// tr_[X][(1/m) M_P ∘ M_Σ^(X)(I/D)] <= (1/k) tr_[X][M_P(I/D)] for P the product
// of the disjoint projectors `product_ids`, all disjoint from `irrelevant`.
TracedLemmaReport traced_partial_lemma(const QlllInstance& inst, const std::vector<int>& product_ids,
                                       const std::vector<int>& irrelevant);

}  // namespace qlll
