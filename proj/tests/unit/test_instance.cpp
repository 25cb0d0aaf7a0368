#include "qlll/generators.hpp"
#include "qlll/instance.hpp"
#include "qlll/instance_io.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numbers>

using namespace qlll;
using namespace qlll::test;
using nlohmann::json;

namespace {

QlllInstance from_text(const std::string& text) { return instance_from_json(parse_json_text(text, "<test>")); }

std::string parse_message(const std::string& text) {
    try {
        from_text(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("instance JSON kinds") {
    auto inst = from_text(R"({"n":2,"d":2,"projectors":[
        {"qudits":[1],"matrix":[[0,0],[0,1]]},
        {"qudits":[0,1],"kind":"basis","states":[0,3]},
        {"qudits":[0],"matrix":[[[0.5,0],[0,-0.5]],[[0,0.5],[0.5,0]]]},
        {"qudits":[1,0],"kind":"rank_random","rank":2,"seed":4}]})");
    REQUIRE(inst.m() == 4);
    CHECK(inst.projectors[0].local(1, 1) == Cx(1.0, 0.0));
    CHECK(projector_rank(inst.projectors[1]) == 2);
    CHECK(inst.projectors[2].local(0, 1) == Cx(0.0, -0.5));
    CHECK(projector_rank(inst.projectors[3]) == 2);
    CHECK(relative_dimension(inst.projectors[3], inst.shape) == doctest::Approx(0.5));
    CHECK(inst.commutation == Commutation::noncommuting);
}

TEST_CASE("rank_random projectors are seeded projectors") {
    Mat p = random_projector(4, 2, 9);
    CHECK(max_abs(p * p - p) < 1e-12);
    CHECK(max_abs(p - p.adjoint()) < 1e-14);
    CHECK(std::abs(p.trace().real() - 2.0) < 1e-12);
    CHECK(max_abs(p - random_projector(4, 2, 9)) == 0.0);
    CHECK(max_abs(p - random_projector(4, 2, 10)) > 1e-3);
}

TEST_CASE("parse errors carry a location") {
    CHECK(parse_message("{\"n\": 2,\n \"d\": }").find("line 2, column") != std::string::npos);
    CHECK(parse_message(R"({"n":2,"d":2,"projectors":[{"qudits":[5],"kind":"basis","states":[0]}]})")
              .find("/projectors/0/qudits") != std::string::npos);
    CHECK(parse_message(R"({"n":2,"d":2,"projectors":[{"qudits":[0],"matrix":[[1,0],[0,"x"]]}]})")
              .find("/projectors/0/matrix/1/1") != std::string::npos);
    CHECK(parse_message(R"({"n":2,"d":2,"projectors":[{"qudits":[0],"kind":"basis","states":[2]}]})")
              .find("/projectors/0/states") != std::string::npos);
    CHECK(parse_message(R"({"n":2,"d":2,"projectors":[{"qudits":[0],"matrix":[[1,1],[0,0]]}]})")
              .find("not Hermitian") != std::string::npos);
    CHECK(parse_message(R"({"n":2,"d":2,"projectors":[{"qudits":[0],"matrix":[[0.5,0],[0,0.5]]}]})")
              .find("idempotent") != std::string::npos);
    CHECK(parse_message(R"({"n":2,"projectors":[]})").find("missing key \"d\"") != std::string::npos);
    CHECK(parse_message(R"({"n":2,"d":2,"projectors":[{"qudits":[0],"kind":"magic"}]})")
              .find("unknown projector kind") != std::string::npos);
    CHECK_THROWS_AS(load_instance(data("bad_syntax.json")), ParseError);
}

TEST_CASE("canonical serialization round trips and hashes stably") {
    auto inst = load_instance(data("noncommuting.json"));
    auto again = instance_from_json(parse_json_text(instance_to_json(inst).dump(), "<rt>"));
    REQUIRE(again.m() == inst.m());
    for (int i = 0; i < inst.m(); ++i) CHECK(max_abs(again.projectors[i].local - inst.projectors[i].local) == 0.0);
    CHECK(instance_hash(again) == instance_hash(inst));
    CHECK(instance_hash(inst) != instance_hash(load_instance(data("chain.json"))));
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("commutation check") {
    CHECK(load_instance(data("chain.json")).commutation == Commutation::commuting);
    CHECK(counterexample_instance(1.0).commutation == Commutation::commuting);
    CHECK(counterexample_instance(0.5).commutation == Commutation::noncommuting);
    // X and Z on the same qubit.
    auto xz = from_text(R"({"n":1,"d":2,"projectors":[
        {"qudits":[0],"matrix":[[0.5,0.5],[0.5,0.5]]},{"qudits":[0],"kind":"basis","states":[0]}]})");
    CHECK(xz.commutation == Commutation::noncommuting);
}

TEST_CASE("intersection graph") {
    auto g = intersection_graph(load_instance(data("chain.json")));
    CHECK(g.adjacency == std::vector<std::vector<int>>{{1}, {0, 2}, {1}});
    CHECK(g.intersects(0, 0));
    CHECK_FALSE(g.intersects(0, 2));
    CHECK(g.inclusive(1) == std::vector<int>{0, 1, 2});
}

TEST_CASE("certificate for two disjoint projectors is the fixed point x = 1/2") {
    auto inst = load_instance(data("two_disjoint.json"));
    auto cert = find_certificate(inst, 0.0);
    REQUIRE(cert);
    CHECK(cert->x[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cert->x[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(check_lovasz(inst, *cert).holds);
}

TEST_CASE("certificate search agrees with a grid search") {
    // Grid oracle: any x on a fine grid satisfying R_i <= x_i prod_{j~i}(1 - x_j).
    auto grid_feasible = [](const std::vector<double>& r, const IntersectionGraph& g) {
        const int steps = 100;
        std::vector<int> idx(r.size(), 0);
        while (true) {
            std::vector<double> x(r.size());
            for (std::size_t i = 0; i < r.size(); ++i) x[i] = idx[i] / double(steps);
            bool ok = true;
            for (int i = 0; i < g.size() && ok; ++i) {
                double v = x[i];
                for (int j : g.adjacency[i]) v *= 1.0 - x[j];
                ok = v >= r[i];
            }
            if (ok) return true;
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == steps) idx[k++] = 0;
            if (k == idx.size()) return false;
        }
    };
    // Path 0-1-2 with R = (1/4, 1/4, 1/2) has no certificate.
    auto chain = load_instance(data("chain.json"));
    CHECK_FALSE(find_certificate(chain, 0.0).has_value());
    CHECK_FALSE(grid_feasible(relative_dimensions(chain), intersection_graph(chain)));
    auto g = graph_from_subsets({{0, 1}, {1, 2}, {2, 3}});
    for (std::vector<double> r : {std::vector<double>{0.1, 0.1, 0.1}, {0.2, 0.2, 0.2}, {0.05, 0.3, 0.05}}) {
        auto cert = find_certificate(r, g, 0.0);
        // The grid is coarse, so only a grid hit forces a certificate.
        if (grid_feasible(r, g)) CHECK(cert.has_value());
        if (cert) {
            CHECK(check_lovasz(r, g, *cert).holds);
            for (int i = 0; i < 3; ++i) CHECK(cert->x_prime[i] >= r[i] - 1e-12);
        }
    }
    CHECK(find_certificate({0.1, 0.1, 0.1}, g, 0.0).has_value());
    // A projector with R = 1 can never be certified.
    auto full = from_text(R"({"n":1,"d":2,"projectors":[{"qudits":[0],"kind":"basis","states":[0,1]}]})");
    CHECK_FALSE(find_certificate(full, 0.0).has_value());
}

TEST_CASE("epsilon strengthening shrinks the feasible set") {
    // Single isolated projector with R = 1/2: feasible iff (1-ε) x >= 1/2 for some x < 1.
    auto inst = load_instance(data("single.json"));
    CHECK(find_certificate(inst, 0.0).has_value());
    CHECK(find_certificate(inst, 0.4).has_value());
    CHECK_FALSE(find_certificate(inst, 0.5).has_value());
    auto cert = make_certificate({0.9}, 0.4, intersection_graph(inst));
    auto chk = check_lovasz(inst, cert);
    CHECK(chk.holds);
    CHECK(chk.slack[0] == doctest::Approx(0.6 * 0.9 - 0.5));
    CHECK_FALSE(check_lovasz(inst, make_certificate({0.8}, 0.4, intersection_graph(inst))).holds);
}

TEST_CASE("certificate validation") {
    auto g = graph_from_subsets({{0}, {0}});
    auto c = make_certificate({0.3, 0.4}, 0.0, g);
    CHECK(c.x_prime[0] == doctest::Approx(0.3 * 0.6));
    c.x_prime[1] = 0.2;
    CHECK_THROWS_AS(validate_certificate(c, g), std::invalid_argument);
    CHECK_THROWS_AS(make_certificate({0.3}, 0.0, g), std::invalid_argument);
    CHECK_THROWS_AS(validate_certificate(make_certificate({1.2, 0.1}, 0.0, g), g), std::invalid_argument);
}

TEST_CASE("symmetric condition") {
    // 2^k/(e r k) with k = 3, r = 1: 8/(3e) ≈ 0.98.
    CHECK_FALSE(symmetric_condition(3, 1, 1));
    CHECK(symmetric_condition(6, 1, 3));   // 64/(6e) ≈ 3.92
    CHECK_FALSE(symmetric_condition(6, 1, 4));
    CHECK(symmetric_condition(10, 2, 18));  // 1024/(20e) ≈ 18.8
    CHECK(symmetric_condition(3, 1, 0));
}

TEST_CASE("spectral report of the counter-example at a = 1/2") {
    auto inst = counterexample_instance(0.5);
    auto rep = spectral_report(inst);
    // Independent route: general (non-Hermitian) eigen solver on H.
    Mat h = (inst.embedded(0) + inst.embedded(1) + inst.embedded(2)) / 3.0;
    Eigen::ComplexEigenSolver<Mat> es(h);
    std::vector<double> ev;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i).real());
    std::sort(ev.begin(), ev.end());
    REQUIRE(rep.eigenvalues.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(rep.eigenvalues[i] == doctest::Approx(ev[i]).epsilon(1e-10));
    double second = 0.0;
    for (double e : ev)
        if (e - ev[0] > 1e-9) {
            second = e;
            break;
        }
    CHECK(rep.delta == doctest::Approx(second - ev[0]).epsilon(1e-10));
    CHECK_FALSE(rep.frustration_free);
    CHECK(rep.ground_dim == 0);
}

TEST_CASE("spectral report of a frustration-free commuting instance") {
    auto inst = load_instance(data("two_disjoint.json"));
    auto rep = spectral_report(inst);
    CHECK(rep.frustration_free);
    CHECK(rep.ground_dim == 1);
    CHECK(rep.delta == doctest::Approx(0.5));
    CHECK(std::abs(rep.p0(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("property: H has spectrum in [0, 1] and planted instances are frustration-free") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        RandomInstanceOptions opt;
        opt.n = 3;
        opt.m = 4;
        opt.commuting = seed % 2 == 0;
        auto inst = random_instance(seed, opt);
        auto rep = spectral_report(inst);
        CHECK(rep.eigenvalues.front() > -1e-12);
        CHECK(rep.eigenvalues.back() < 1.0 + 1e-12);
        CHECK(rep.frustration_free);
        CHECK(rep.ground_dim >= 1);
        Mat q = projector_sum(inst);
        CHECK(max_abs(q * rep.p0) < 1e-9);
        if (opt.commuting) CHECK(inst.commutation == Commutation::commuting);
    }
}

TEST_CASE("certified commuting generator returns certified instances") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto inst = random_certified_commuting(seed, 4, 4);
        CHECK(inst.commutation == Commutation::commuting);
        CHECK(find_certificate(inst, 0.0).has_value());
    }
}

TEST_CASE("validation rejects bad ids and sizes") {
    QlllInstance inst;
    inst.shape = {2, 2};
    inst.projectors.push_back(basis_projector(1, {0}, {0}, 2));
    CHECK_THROWS_AS(validate(inst), std::invalid_argument);
    inst.projectors[0].id = 0;
    inst.projectors[0].local = Mat::Identity(4, 4);
    CHECK_THROWS_AS(validate(inst), std::invalid_argument);
}
