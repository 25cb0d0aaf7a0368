#include "qlll/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qlll {

std::size_t Shape::dim() const {
    std::size_t out = 1;
    for (int i = 0; i < n; ++i) out *= static_cast<std::size_t>(d);
    return out;
}

std::size_t dense_budget() {
    if (const char* env = std::getenv("QLLL_BUDGET_D")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        throw std::invalid_argument(std::string("QLLL_BUDGET_D is not a positive integer: ") + env);
    }
    return std::size_t{1} << 13;
}

void require_dense_budget(const Shape& shape) {
    if (shape.d < 2) throw std::invalid_argument("local dimension must be at least 2");
    if (shape.n < 0) throw std::invalid_argument("negative qudit count");
    // Guard against overflow before comparing against the budget.
    double logd = shape.n * std::log2(static_cast<double>(shape.d));
    if (logd > 40.0 || shape.dim() > dense_budget())
        throw std::length_error("dimension " + std::to_string(shape.d) + "^" +
                                std::to_string(shape.n) + " exceeds dense budget " +
                                std::to_string(dense_budget()));
}

std::size_t qudit_weight(int q, const Shape& shape) {
    std::size_t w = 1;
    for (int k = q + 1; k < shape.n; ++k) w *= static_cast<std::size_t>(shape.d);
    return w;
}

int digit(std::size_t i, int q, const Shape& shape) {
    return static_cast<int>((i / qudit_weight(q, shape)) % static_cast<std::size_t>(shape.d));
}

void validate_subset(const std::vector<int>& qudits, const Shape& shape) {
    std::vector<int> s = qudits;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= shape.n)
            throw std::out_of_range("qudit index " + std::to_string(s[i]) + " out of range");
        if (i > 0 && s[i] == s[i - 1])
            throw std::invalid_argument("duplicate qudit index " + std::to_string(s[i]));
    }
}

std::vector<std::size_t> subset_offsets(const std::vector<int>& qudits, const Shape& shape) {
    std::size_t k = 1;
    for (std::size_t i = 0; i < qudits.size(); ++i) k *= static_cast<std::size_t>(shape.d);
    std::vector<std::size_t> out(k, 0);
    for (std::size_t local = 0; local < k; ++local) {
        std::size_t rem = local, off = 0;
        for (std::size_t t = qudits.size(); t-- > 0;) {
            off += (rem % shape.d) * qudit_weight(qudits[t], shape);
            rem /= shape.d;
        }
        out[local] = off;
    }
    return out;
}

std::vector<std::size_t> complement_bases(const std::vector<int>& qudits, const Shape& shape) {
    std::vector<int> rest;
    for (int q = 0; q < shape.n; ++q)
        if (std::find(qudits.begin(), qudits.end(), q) == qudits.end()) rest.push_back(q);
    return subset_offsets(rest, shape);
}

Mat identity(std::size_t dim) {
    return Mat::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Mat embed(const Mat& local, const std::vector<int>& qudits, const Shape& shape) {
    validate_subset(qudits, shape);
    auto offs = subset_offsets(qudits, shape);
    if (local.rows() != local.cols() || static_cast<std::size_t>(local.rows()) != offs.size())
        throw std::invalid_argument("local operator dimension does not match d^|subset|");
    auto bases = complement_bases(qudits, shape);
    const std::size_t D = shape.dim();
    Mat out = Mat::Zero(D, D);
    for (std::size_t b : bases)
        for (std::size_t i = 0; i < offs.size(); ++i)
            for (std::size_t j = 0; j < offs.size(); ++j)
                out(b + offs[i], b + offs[j]) = local(i, j);
    return out;
}

Mat partial_trace(const Mat& m, const std::vector<int>& traced, const Shape& shape) {
    validate_subset(traced, shape);
    const std::size_t D = shape.dim();
    if (static_cast<std::size_t>(m.rows()) != D || m.cols() != m.rows())
        throw std::invalid_argument("partial_trace: operator is not D x D");
    auto toffs = subset_offsets(traced, shape);
    auto kept = complement_bases(traced, shape);  // kept basis states, in local order
    const std::size_t K = kept.size();
    Mat out = Mat::Zero(K, K);
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
            Cx acc = 0;
            for (std::size_t t : toffs) acc += m(kept[i] + t, kept[j] + t);
            out(i, j) = acc;
        }
    return out;
}

Mat extend_identity(const Mat& reduced, const std::vector<int>& traced, const Shape& shape) {
    validate_subset(traced, shape);
    auto toffs = subset_offsets(traced, shape);
    auto kept = complement_bases(traced, shape);
    if (static_cast<std::size_t>(reduced.rows()) != kept.size() || reduced.cols() != reduced.rows())
        throw std::invalid_argument("extend_identity: reduced operator has the wrong dimension");
    const double scale = 1.0 / static_cast<double>(toffs.size());
    Mat out = Mat::Zero(shape.dim(), shape.dim());
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = 0; j < kept.size(); ++j)
            for (std::size_t t : toffs) out(kept[i] + t, kept[j] + t) = reduced(i, j) * scale;
    return out;
}

Mat reset_qudits(const Mat& m, const std::vector<int>& qudits, const Shape& shape) {
    return extend_identity(partial_trace(m, qudits, shape), qudits, shape);
}

bool is_hermitian(const Mat& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

void require_hermitian(const Mat& m, const char* what) {
    if (!is_hermitian(m, 1e-10)) throw std::invalid_argument(std::string(what) + ": input is not Hermitian");
}

HermitianEig hermitian_eig(const Mat& m) {
    Mat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Mat pseudoinverse(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("pseudoinverse: matrix is not square");
    if (m.size() == 0) return m;
    if (is_hermitian(m)) {
        auto eig = hermitian_eig(m);
        double smax = eig.values.cwiseAbs().maxCoeff();
        double cut = tol::pinv * smax;
        RealVec inv(eig.values.size());
        for (Eigen::Index i = 0; i < inv.size(); ++i)
            inv(i) = std::abs(eig.values(i)) > cut ? 1.0 / eig.values(i) : 0.0;
        return eig.vectors * inv.asDiagonal() * eig.vectors.adjoint();
    }
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVec& s = svd.singularValues();
    double cut = tol::pinv * (s.size() ? s(0) : 0.0);
    RealVec inv(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) inv(i) = s(i) > cut ? 1.0 / s(i) : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

PsdCheck psd_leq(const Mat& x, const Mat& y, double rel_tol) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) throw std::invalid_argument("psd_leq: dimension mismatch");
    require_hermitian(x, "psd_leq");
    require_hermitian(y, "psd_leq");
    PsdCheck out;
    if (x.size() == 0) return out;
    auto eig = hermitian_eig(y - x);
    double ynorm = hermitian_eig(y).values.cwiseAbs().maxCoeff();
    out.lambda_min = eig.values(0);
    out.threshold = -rel_tol * std::max(1.0, ynorm);
    out.holds = out.lambda_min >= out.threshold;
    if (!out.holds) out.witness = eig.vectors.col(0);
    return out;
}

Mat kernel_projector(const Mat& m, double threshold) {
    require_hermitian(m, "kernel_projector");
    auto eig = hermitian_eig(m);
    Mat p = Mat::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        if (eig.values(i) < threshold) p += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
    return p;
}

Vec vectorize(const Mat& m) {
    return Eigen::Map<const Vec>(m.data(), m.size());
}

Mat devectorize(const Vec& v) {
    auto side = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (side * side != v.size()) throw std::invalid_argument("devectorize: length is not a perfect square");
    return Eigen::Map<const Mat>(v.data(), side, side);
}

double trace_real(const Mat& m) { return m.trace().real(); }

double trace_norm_hermitian(const Mat& m) {
    if (m.size() == 0) return 0.0;
    return hermitian_eig(m).values.cwiseAbs().sum();
}

}  // namespace qlll
