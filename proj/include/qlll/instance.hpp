#pragma once
// Quantum LLL instances, their intersection structure and Lovász conditions.

#include "qlll/linalg.hpp"

#include <optional>
#include <vector>

namespace qlll {

struct Projector {
    int id = 0;
    std::vector<int> qudits;  // ordered; first listed qudit is the most significant local factor
    Mat local;                // d^|qudits| square
};

enum class Commutation { unchecked, commuting, noncommuting };

struct QlllInstance {
    Shape shape;
    std::vector<Projector> projectors;
    Commutation commutation = Commutation::unchecked;

    int m() const { return static_cast<int>(projectors.size()); }
    Mat embedded(int i) const;
    std::vector<Mat> embedded_all() const;
};

// Checks shape, qudit subsets, ids 0..m-1, Hermiticity, idempotence and
// integral trace. Throws std::invalid_argument with the offending id.
void validate(const QlllInstance& inst);

// Pairwise commutation of intersecting projectors, evaluated on the union
// of their subsets. Disjoint pairs commute trivially.
Commutation check_commutation(const QlllInstance& inst, double tolerance = tol::projector);
QlllInstance& mark_commutation(QlllInstance& inst);

double relative_dimension(const Projector& p, const Shape& shape);
std::vector<double> relative_dimensions(const QlllInstance& inst);
int projector_rank(const Projector& p);

struct IntersectionGraph {
    std::vector<std::vector<int>> adjacency;  // sorted, self excluded

    int size() const { return static_cast<int>(adjacency.size()); }
    bool intersects(int i, int j) const;  // true for i == j
    std::vector<int> inclusive(int i) const;  // Γ⁺(i), sorted
};

IntersectionGraph graph_from_subsets(const std::vector<std::vector<int>>& subsets);
IntersectionGraph intersection_graph(const QlllInstance& inst);

struct LovaszCertificate {
    std::vector<double> x;
    double epsilon = 0.0;
    std::vector<double> x_prime;  // x_i ∏_{j∈Γ(i)} (1 - x_j)
};

LovaszCertificate make_certificate(std::vector<double> x, double epsilon, const IntersectionGraph& g);
// Throws if x is out of [0,1] or x_prime disagrees with x.
void validate_certificate(const LovaszCertificate& cert, const IntersectionGraph& g);

struct LovaszCheck {
    bool holds = true;
    std::vector<double> slack;  // (1-ε) x'_i - R_i
};

// Generic form over event probabilities; used by both the quantum and classical sides.
LovaszCheck check_lovasz(const std::vector<double>& probabilities, const IntersectionGraph& g,
                         const LovaszCertificate& cert);
LovaszCheck check_lovasz(const QlllInstance& inst, const LovaszCertificate& cert);

// Monotone fixed-point search; std::nullopt means infeasible.
std::optional<LovaszCertificate> find_certificate(const std::vector<double>& probabilities,
                                                  const IntersectionGraph& g, double epsilon);
std::optional<LovaszCertificate> find_certificate(const QlllInstance& inst, double epsilon);

bool symmetric_condition(int k, int r, int max_occurrence);

struct SpectralReport {
    std::vector<double> eigenvalues;  // of H = (1/m) Σ Π_i, ascending
    double delta = 0.0;
    int ground_dim = 0;  // dimension of the zero eigenspace
    Mat p0;
    bool frustration_free = false;  // smallest eigenvalue is 0
};

SpectralReport spectral_report(const QlllInstance& inst);

// Σ_i Π_i embedded.
Mat projector_sum(const QlllInstance& inst);
Mat ground_projector(const QlllInstance& inst);

}  // namespace qlll
