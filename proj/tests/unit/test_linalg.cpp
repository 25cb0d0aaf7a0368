#include "qlll/linalg.hpp"
#include "qlll/rng.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <set>

using namespace qlll;
using namespace qlll::test;

TEST_CASE("kron matches the index formula") {
    Mat a = random_matrix(2, 1);
    Mat b = random_matrix(3, 2);
    Mat k = kron(a, b);
    REQUIRE(k.rows() == 6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) CHECK(std::abs(k(i * 3 + r, j * 3 + c) - a(i, j) * b(r, c)) < 1e-14);
}

TEST_CASE("embed agrees with the matrix-element definition") {
    Shape s{3, 2};
    Mat local = random_matrix(4, 3);
    for (std::vector<int> qs : {std::vector<int>{0, 1}, {2, 0}, {1, 2}}) {
        CHECK(max_abs(embed(local, qs, s) - embed_by_elements(local, qs, s)) < 1e-14);
    }
    Shape t{2, 3};
    Mat q3 = random_matrix(3, 4);
    CHECK(max_abs(embed(q3, {1}, t) - kron(identity(3), q3)) < 1e-14);
    CHECK(max_abs(embed(q3, {0}, t) - kron(q3, identity(3))) < 1e-14);
}

TEST_CASE("partial trace matches index contraction") {
    Shape s{3, 2};
    Mat m = random_matrix(8, 5);
    m = m + m.adjoint().eval();
    for (std::vector<int> tr : {std::vector<int>{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}}) {
        Mat got = partial_trace(m, tr, s);
        CHECK(max_abs(got - partial_trace_by_contraction(m, tr, s)) < 1e-12);
        CHECK(std::abs(got.trace() - m.trace()) < 1e-12);
    }
    Shape q{2, 3};
    Mat m9 = random_matrix(9, 6);
    CHECK(max_abs(partial_trace(m9, {1}, q) - partial_trace_by_contraction(m9, {1}, q)) < 1e-12);
}

TEST_CASE("partial trace of an embedded operator times M") {
    Shape s{3, 2};
    Mat p = random_matrix(2, 8);
    Mat m = random_matrix(8, 9);
    Mat prod = embed(p, {1}, s) * m;
    CHECK(max_abs(partial_trace(prod, {0, 2}, s) - partial_trace_by_contraction(prod, {0, 2}, s)) < 1e-12);
}

TEST_CASE("reset keeps trace, is idempotent and maximally mixes the subset") {
    Shape s{3, 2};
    Mat rho = random_state(8, 10);
    Mat r = reset_qudits(rho, {1}, s);
    CHECK(std::abs(r.trace().real() - 1.0) < 1e-12);
    CHECK(max_abs(reset_qudits(r, {1}, s) - r) < 1e-14);
    Mat reduced = partial_trace(r, {0, 2}, s);
    CHECK(max_abs(reduced - identity(2) / 2.0) < 1e-12);
    // Untouched qudits keep their reduced state.
    CHECK(max_abs(partial_trace(r, {1}, s) - partial_trace(rho, {1}, s)) < 1e-12);
    CHECK(max_abs(extend_identity(partial_trace(rho, {0, 1}, s), {0, 1}, s) - reset_qudits(rho, {0, 1}, s)) < 1e-14);
}

TEST_CASE("vec(A X B) = (B^T kron A) vec(X)") {
    Mat a = random_matrix(3, 11), x = random_matrix(3, 12), b = random_matrix(3, 13);
    Vec lhs = vectorize(a * x * b);
    Vec rhs = kron(b.transpose(), a) * vectorize(x);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(max_abs(devectorize(vectorize(x)) - x) == 0.0);
    CHECK_THROWS_AS(devectorize(Vec::Zero(5)), std::invalid_argument);
}

TEST_CASE("pseudoinverse satisfies the Moore-Penrose conditions") {
    Mat g = random_matrix(5, 14).leftCols(3);
    Mat h = g * g.adjoint();  // Hermitian, rank 3
    Mat n = random_matrix(4, 15).leftCols(2) * random_matrix(4, 18).topRows(2);  // non-Hermitian, rank 2
    for (const Mat& a : {h, n}) {
        Mat p = pseudoinverse(a);
        CHECK(max_abs(a * p * a - a) < 1e-9 * max_abs(a));
        CHECK(max_abs(p * a * p - p) < 1e-9 * std::max(1.0, max_abs(p)));
        CHECK(max_abs((a * p).adjoint() - a * p) < 1e-9);
        CHECK(max_abs((p * a).adjoint() - p * a) < 1e-9);
    }
    Mat zero = Mat::Zero(3, 3);
    CHECK(max_abs(pseudoinverse(zero)) == 0.0);
}

TEST_CASE("hermitian eigenvalues ascend and reconstruct") {
    Mat m = random_matrix(6, 19);
    m = (m + m.adjoint()).eval();
    auto e = hermitian_eig(m);
    for (Eigen::Index i = 1; i < e.values.size(); ++i) CHECK(e.values(i - 1) <= e.values(i));
    CHECK(max_abs(e.vectors * e.values.cast<Cx>().asDiagonal() * e.vectors.adjoint() - m) < 1e-12);
}

TEST_CASE("psd_leq") {
    Mat pi = Mat::Zero(2, 2);
    pi(0, 0) = 1.0;
    auto eq = psd_leq(pi / 2.0, pi / 2.0);
    CHECK(eq.holds);
    CHECK(std::abs(eq.lambda_min) < 1e-15);
    auto bad = psd_leq(pi, pi / 2.0);
    CHECK_FALSE(bad.holds);
    CHECK(bad.lambda_min == doctest::Approx(-0.5));
    CHECK(bad.witness.size() == 2);
    CHECK(std::abs(std::abs(bad.witness(0)) - 1.0) < 1e-12);
    // Tolerance scales with the norm of the larger side.
    CHECK(psd_leq(identity(2) * (1.0 + 5e-10), identity(2)).holds);
    CHECK_FALSE(psd_leq(identity(2) * (1.0 + 5e-9), identity(2)).holds);
    Mat nh = Mat::Zero(2, 2);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(psd_leq(nh, pi), std::invalid_argument);
}

TEST_CASE("kernel projector") {
    Mat q = Mat::Zero(3, 3);
    q(0, 0) = 1.0;
    q(1, 1) = 2.0;
    Mat k = kernel_projector(q);
    CHECK(std::abs(k(2, 2) - 1.0) < 1e-12);
    CHECK(std::abs(k.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("dense budget honours the environment override") {
    Shape s{3, 2};
    CHECK_NOTHROW(require_dense_budget(s));
    ::setenv("QLLL_BUDGET_D", "4", 1);
    CHECK(dense_budget() == 4);
    CHECK_THROWS_AS(require_dense_budget(s), std::length_error);
    ::setenv("QLLL_BUDGET_D", "lots", 1);
    CHECK_THROWS_AS(dense_budget(), std::invalid_argument);
    ::unsetenv("QLLL_BUDGET_D");
    CHECK(dense_budget() == 8192);
    CHECK_THROWS_AS(require_dense_budget(Shape{14, 2}), std::length_error);
}

TEST_CASE("subset validation") {
    Shape s{3, 2};
    CHECK_THROWS(validate_subset({0, 0}, s));
    CHECK_THROWS(validate_subset({3}, s));
    CHECK_NOTHROW(validate_subset({2, 0}, s));
}

TEST_CASE("rng is deterministic per (seed, stream) and streams differ") {
    Rng a(5, 1), b(5, 1), c(5, 2), d(6, 1);
    std::set<std::uint64_t> firsts;
    for (int i = 0; i < 100; ++i) {
        auto x = a.next_u64();
        CHECK(x == b.next_u64());
        firsts.insert(x);
    }
    CHECK(firsts.size() == 100);
    CHECK(c.next_u64() != Rng(5, 1).next_u64());
    CHECK(d.next_u64() != Rng(5, 1).next_u64());
}

TEST_CASE("rng distributions") {
    Rng r(42, 0);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    std::vector<int> counts(3, 0);
    for (int i = 0; i < n; ++i) {
        double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        counts[r.below(3)]++;
        double z = r.normal();
        sq += z * z;
    }
    CHECK(std::abs(sum / n - 0.5) < 5 * std::sqrt(1.0 / 12.0 / n));
    for (int c : counts) CHECK(std::abs(c / double(n) - 1.0 / 3) < 5 * std::sqrt(2.0 / 9 / n));
    CHECK(std::abs(sq / n - 1.0) < 5 * std::sqrt(2.0 / n));
}
