#pragma once
// Dense complex linear algebra on multi-qudit spaces.
// Qudit 0 is the most significant tensor factor. Vectorization stacks
// columns, so vec(A X B) = (B^T kron A) vec(X).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace qlll {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

namespace tol {
constexpr double psd = 1e-9;        // relative eigenvalue tolerance
constexpr double pinv = 1e-12;      // relative singular-value cutoff
constexpr double distinct = 1e-9;   // eigenvalue distinctness
constexpr double hermitian = 1e-12; // relative, entrywise
constexpr double projector = 1e-10;
}  // namespace tol

struct Shape {
    int n = 0;
    int d = 2;
    std::size_t dim() const;
};

// Dense dimension cap. Default 2^13; QLLL_BUDGET_D overrides.
std::size_t dense_budget();
void require_dense_budget(const Shape& shape);

// Digit of qudit q in basis index i.
int digit(std::size_t i, int q, const Shape& shape);
std::size_t qudit_weight(int q, const Shape& shape);

// Basis-index offsets of the local states of `qudits` (local index order:
// first listed qudit most significant) and the base indices of the complement.
std::vector<std::size_t> subset_offsets(const std::vector<int>& qudits, const Shape& shape);
std::vector<std::size_t> complement_bases(const std::vector<int>& qudits, const Shape& shape);

void validate_subset(const std::vector<int>& qudits, const Shape& shape);

Mat identity(std::size_t dim);
Mat kron(const Mat& a, const Mat& b);

Mat embed(const Mat& local, const std::vector<int>& qudits, const Shape& shape);

// Reduced operator on the remaining qudits (kept in increasing order).
Mat partial_trace(const Mat& m, const std::vector<int>& traced, const Shape& shape);

// Inverse of partial_trace up to normalization: reduced ⊗ I_traced / d^|traced|,
// with the traced qudits restored to their original positions.
Mat extend_identity(const Mat& reduced, const std::vector<int>& traced, const Shape& shape);

// tr_S(m) ⊗ I_S / d^|S|, computed in one pass.
Mat reset_qudits(const Mat& m, const std::vector<int>& qudits, const Shape& shape);

bool is_hermitian(const Mat& m, double rel_tol = tol::hermitian);
void require_hermitian(const Mat& m, const char* what);

struct HermitianEig {
    RealVec values;  // ascending
    Mat vectors;
};
HermitianEig hermitian_eig(const Mat& m);

Mat pseudoinverse(const Mat& m);

struct PsdCheck {
    bool holds = true;
    double lambda_min = 0.0;  // smallest eigenvalue of Y - X
    double threshold = 0.0;   // -tol * max(1, ||Y||)
    Vec witness;              // eigenvector for lambda_min when the check fails
};
// X <= Y in the Loewner order.
PsdCheck psd_leq(const Mat& x, const Mat& y, double rel_tol = tol::psd);

Mat kernel_projector(const Mat& m, double threshold = tol::psd);

Vec vectorize(const Mat& m);
Mat devectorize(const Vec& v);

double trace_real(const Mat& m);
double trace_norm_hermitian(const Mat& m);

}  // namespace qlll
