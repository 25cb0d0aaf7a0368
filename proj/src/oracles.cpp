#include "qlll/oracles.hpp"

#include "qlll/combinatorics.hpp"
#include "qlll/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qlll {

namespace {

constexpr double equality_tol = 1e-10;
constexpr double kernel_mass_stop = 1e-13;
constexpr double violation_weight_stop = 1e-15;

double rel_residual(const Mat& got, const Mat& want) {
    return (got - want).norm() / std::max(1.0, want.norm());
}

Mat random_operator(std::size_t dim, Rng& rng) {
    Mat x(dim, dim);
    for (std::size_t c = 0; c < dim; ++c)
        for (std::size_t r = 0; r < dim; ++r) x(r, c) = Cx(rng.normal(), rng.normal());
    return x;
}

Mat random_density(std::size_t dim, Rng& rng) {
    Mat g = random_operator(dim, rng);
    Mat rho = g * g.adjoint();
    return rho / rho.trace().real();
}

bool disjoint(const Projector& a, const Projector& b) {
    for (int q : a.qudits)
        if (std::find(b.qudits.begin(), b.qudits.end(), q) != b.qudits.end()) return false;
    return true;
}

std::vector<int> qudit_union(const QlllInstance& inst, const std::vector<int>& ids) {
    std::vector<int> out;
    for (int i : ids)
        for (int q : inst.projectors.at(i).qudits)
            if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
    std::sort(out.begin(), out.end());
    return out;
}

void check_ids(const QlllInstance& inst, const std::vector<int>& ids, const char* what) {
    for (int i : ids)
        if (i < 0 || i >= inst.m())
            throw std::out_of_range(std::string(what) + ": unknown projector id " + std::to_string(i));
}

Mat product_of(const ChannelAlgebra& alg, const std::vector<int>& ids) {
    Mat p = identity(alg.dim());
    for (int i : ids) p = p * alg.projector(i);
    return p;
}

void require_commuting(const QlllInstance& inst, const char* what) {
    if (inst.commutation != Commutation::commuting)
        throw std::invalid_argument(std::string(what) + " needs a verified-commuting instance");
}

void fold(PartResult& part, double residual, double slack) {
    part.residual = std::max(part.residual, residual);
    part.slack_min = std::min(part.slack_min, slack);
}

std::string ids_text(const std::vector<int>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? "," : "") + std::to_string(ids[i]);
    return s;
}

}  // namespace

void require_superoperator_budget(const Shape& shape) {
    require_dense_budget(shape);
    if (shape.dim() > superoperator_dim_cap)
        throw std::length_error("dimension " + std::to_string(shape.dim()) + " exceeds the exact-route cap " +
                                std::to_string(superoperator_dim_cap));
}

Mat Superoperator::apply(const Mat& x) const { return devectorize(matrix * vectorize(x)); }

Superoperator superoperator_from_kraus(const std::vector<Mat>& kraus, const Shape& shape) {
    const auto D = static_cast<Eigen::Index>(shape.dim());
    Superoperator s{shape, Mat::Zero(D * D, D * D)};
    for (const auto& k : kraus) s.matrix += kron(k.conjugate(), k);
    return s;
}

ChannelSet build_channels(const QlllInstance& inst) {
    require_superoperator_budget(inst.shape);
    const std::size_t D = inst.shape.dim();
    const auto D2 = static_cast<Eigen::Index>(D * D);
    const Mat id = identity(D);
    ChannelSet cs;
    cs.cont = superoperator_from_kraus({}, inst.shape);
    for (int a = 0; a < inst.m(); ++a) {
        const Mat pi = inst.embedded(a);
        cs.measure.push_back(superoperator_from_kraus({pi}, inst.shape));
        Superoperator e{inst.shape, Mat::Zero(D2, D2)};
        for (Eigen::Index c = 0; c < D2; ++c) {
            Mat unit = Mat::Zero(D, D);
            unit(c % D, c / D) = 1.0;
            e.matrix.col(c) = vectorize(reset_qudits(unit, inst.projectors[a].qudits, inst.shape));
        }
        cs.reset.push_back(e);
        Superoperator t = superoperator_from_kraus({id - pi}, inst.shape);
        t.matrix += e.matrix * cs.measure.back().matrix;
        cs.transfer.push_back(std::move(t));
        cs.cont.matrix += superoperator_from_kraus({id - pi}, inst.shape).matrix;
    }
    if (inst.m() > 0) cs.cont.matrix /= static_cast<double>(inst.m());
    return cs;
}

ChannelAlgebra::ChannelAlgebra(const QlllInstance& inst) : inst_(&inst), dim_(inst.shape.dim()) {
    require_superoperator_budget(inst.shape);
    const Mat id = identity(dim_);
    for (int i = 0; i < inst.m(); ++i) {
        proj_.push_back(inst.embedded(i));
        comp_.push_back(id - proj_.back());
    }
    p0_ = inst.m() ? ground_projector(inst) : id;
}

Mat ChannelAlgebra::measure(int a, const Mat& x) const { return proj_[a] * x * proj_[a]; }

Mat ChannelAlgebra::reset(int a, const Mat& x) const {
    return reset_qudits(x, inst_->projectors[a].qudits, inst_->shape);
}

Mat ChannelAlgebra::reset_set(const std::vector<int>& qudits, const Mat& x) const {
    return reset_qudits(x, qudits, inst_->shape);
}

Mat ChannelAlgebra::transfer(int a, const Mat& x) const {
    return comp_[a] * x * comp_[a] + reset(a, measure(a, x));
}

Mat ChannelAlgebra::cont(const Mat& x) const {
    Mat out = Mat::Zero(dim_, dim_);
    for (int i = 0; i < m(); ++i) out += comp_[i] * x * comp_[i];
    return out / static_cast<double>(m());
}

Mat ChannelAlgebra::cont_partial(const std::vector<int>& irrelevant, const Mat& x) const {
    Mat out = Mat::Zero(dim_, dim_);
    for (int i = 0; i < m(); ++i) {
        if (std::find(irrelevant.begin(), irrelevant.end(), i) != irrelevant.end())
            out += transfer(i, x);
        else
            out += comp_[i] * x * comp_[i];
    }
    return out / static_cast<double>(m());
}

Mat ChannelAlgebra::sandwiched_sum(const Mat& sandwich, const Mat& x, SeriesStats* stats) const {
    Mat acc = Mat::Zero(dim_, dim_);
    Mat s = x;
    for (std::uint64_t k = 0; k < series_iteration_cap; ++k) {
        acc += sandwich * s * sandwich.adjoint();
        // Whatever is left either stays in the common kernel, which the
        // sandwich annihilates, or halts later.
        const double rest = trace_real(s) - trace_real(p0_ * s);
        if (std::abs(rest) < kernel_mass_stop) {
            if (stats) *stats = {k + 1, std::abs(rest)};
            return acc;
        }
        s = cont(s);
    }
    throw std::runtime_error("series did not converge within " + std::to_string(series_iteration_cap) +
                             " iterations (remaining non-kernel mass " +
                             std::to_string(trace_real(s) - trace_real(p0_ * s)) + ")");
}

Mat ChannelAlgebra::halt_on(int a, const Mat& x, SeriesStats* stats) const {
    return sandwiched_sum(proj_.at(a), x, stats) / static_cast<double>(m());
}

Mat ChannelAlgebra::sum_partial(const Mat& sandwich, const std::vector<int>& irrelevant, const Mat& x,
                                SeriesStats* stats) const {
    Mat acc = Mat::Zero(dim_, dim_);
    Mat s = x;
    for (std::uint64_t k = 0; k < series_iteration_cap; ++k) {
        acc += sandwich * s * sandwich.adjoint();
        double weight = 0.0;
        for (int j = 0; j < m(); ++j) weight += trace_real(proj_[j] * s);
        weight /= static_cast<double>(m());
        if (std::abs(weight) < violation_weight_stop) {
            if (stats) *stats = {k + 1, std::abs(weight)};
            return acc;
        }
        s = cont_partial(irrelevant, s);
    }
    throw std::runtime_error("partial series did not converge within " + std::to_string(series_iteration_cap) +
                             " iterations");
}

Mat ChannelAlgebra::halt_on_partial(int a, const std::vector<int>& irrelevant, const Mat& x,
                                    SeriesStats* stats) const {
    return sum_partial(proj_.at(a), irrelevant, x, stats) / static_cast<double>(m());
}

OutcomeOperator halting_operator(const QlllInstance& inst, int a) {
    check_ids(inst, {a}, "halting operator");
    ChannelAlgebra alg(inst);
    const std::size_t D = inst.shape.dim();
    OutcomeOperator out;
    out.op = alg.halt_on(a, identity(D) / static_cast<double>(D));
    out.probability = trace_real(out.op);
    out.provenance = "halt:" + std::to_string(a);
    return out;
}

Mat halting_operator_resolvent(const QlllInstance& inst, int a) {
    check_ids(inst, {a}, "halting operator");
    ChannelSet cs = build_channels(inst);
    const std::size_t D = inst.shape.dim();
    const Mat gap = identity(D * D) - cs.cont.matrix;
    Vec v = pseudoinverse(gap) * vectorize(identity(D) / static_cast<double>(D));
    return devectorize(cs.measure[a].matrix * v) / static_cast<double>(inst.m());
}

OutcomeOperator sequence_operator(const ChannelAlgebra& alg, const std::vector<int>& ids) {
    check_ids(alg.instance(), ids, "sequence operator");
    const std::size_t D = alg.dim();
    OutcomeOperator out;
    out.op = identity(D) / static_cast<double>(D);
    for (int a : ids) out.op = alg.reset(a, alg.halt_on(a, out.op));
    out.probability = trace_real(out.op);
    out.provenance = "seq:" + ids_text(ids);
    return out;
}

OutcomeOperator sequence_operator(const QlllInstance& inst, const std::vector<int>& ids) {
    ChannelAlgebra alg(inst);
    return sequence_operator(alg, ids);
}

double outcome_completeness(const QlllInstance& inst, int t) {
    if (t < 0) throw std::invalid_argument("sequence length must be non-negative");
    ChannelAlgebra alg(inst);
    const std::size_t D = inst.shape.dim();
    auto walk = [&](auto&& self, const Mat& x, int depth) -> double {
        if (depth == t) return trace_real(x);
        double total = trace_real(alg.ground() * x);
        for (int a = 0; a < inst.m(); ++a) total += self(self, alg.reset(a, alg.halt_on(a, x)), depth + 1);
        return total;
    };
    return walk(walk, identity(D) / static_cast<double>(D), 0);
}

bool SuiteReport::pass() const {
    return std::none_of(parts.begin(), parts.end(), [](const PartResult& p) { return p.status == "failed"; });
}

nlohmann::json suite_to_json(const SuiteReport& r, const std::vector<std::uint64_t>& seeds) {
    nlohmann::json j;
    j["lemma"] = r.lemma;
    j["pass"] = r.pass();
    double residual = 0.0;
    double slack = std::numeric_limits<double>::infinity();
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : r.parts) {
        if (p.status != "skipped") {
            residual = std::max(residual, p.residual);
            slack = std::min(slack, p.slack_min);
        }
        parts.push_back({{"part", p.part},
                         {"status", p.status},
                         {"residual", p.residual},
                         {"slack_min", p.slack_min},
                         {"note", p.note}});
    }
    j["residual"] = residual;
    j["slack_min"] = std::isfinite(slack) ? slack : 0.0;
    j["seeds"] = seeds;
    j["parts"] = parts;
    return j;
}

SuiteReport verify_cp_identities(const QlllInstance& inst, std::uint64_t seed) {
    ChannelAlgebra alg(inst);
    const int m = inst.m();
    const std::size_t D = inst.shape.dim();
    const Mat mixed = identity(D) / static_cast<double>(D);
    const bool commuting = inst.commutation == Commutation::commuting;
    constexpr int inputs = 10;
    std::vector<Mat> ops, states;
    for (int k = 0; k < inputs; ++k) {
        Rng rng(seed, static_cast<std::uint64_t>(k));
        ops.push_back(random_operator(D, rng));
        states.push_back(random_density(D, rng));
    }
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (disjoint(inst.projectors[a], inst.projectors[b])) pairs.emplace_back(a, b);

    SuiteReport rep;
    rep.lemma = "cp-identities";
    auto finish_eq = [&](PartResult& p) { p.status = p.residual < equality_tol ? "passed" : "failed"; };

    PartResult p1{"i", "passed", 0.0, std::numeric_limits<double>::infinity(), ""};
    if (!commuting) {
        p1.status = "skipped";
        p1.note = "instance is not commuting";
    } else {
        // Every nonempty family of pairwise disjoint projectors.
        int families = 0;
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            std::vector<int> ids;
            bool ok = true;
            for (int a = 0; a < m && ok; ++a) {
                if (!(mask >> a & 1u)) continue;
                for (int b : ids) ok = ok && disjoint(inst.projectors[a], inst.projectors[b]);
                ids.push_back(a);
            }
            if (!ok) continue;
            ++families;
            const Mat p = product_of(alg, ids);
            const Mat lhs = alg.sandwiched_sum(p, mixed) / static_cast<double>(m);
            const Mat rhs = p * mixed * p / static_cast<double>(ids.size());
            auto chk = psd_leq(lhs, rhs);
            fold(p1, 0.0, chk.lambda_min);
            if (!chk.holds) p1.status = "failed";
        }
        p1.note = std::to_string(families) + " disjoint families";
    }
    rep.parts.push_back(p1);

    PartResult p2{"ii", "", 0.0, 0.0, ""};
    for (int a = 0; a < m; ++a) {
        const double r = relative_dimension(inst.projectors[a], inst.shape);
        fold(p2, rel_residual(alg.reset(a, alg.measure(a, mixed)), r * mixed), 0.0);
    }
    finish_eq(p2);
    rep.parts.push_back(p2);

    PartResult p3{"iii", "", 0.0, 0.0, ""};
    for (int a = 0; a < m; ++a)
        for (const auto& x : ops) fold(p3, rel_residual(alg.measure(a, alg.measure(a, x)), alg.measure(a, x)), 0.0);
    finish_eq(p3);
    rep.parts.push_back(p3);

    PartResult p4{"iv", "", 0.0, 0.0, ""};
    PartResult p5{"v", "", 0.0, 0.0, ""};
    PartResult p6{"vi", "", 0.0, 0.0, ""};
    for (auto [a, b] : pairs) {
        const Mat pab = alg.projector(a) * alg.projector(b);
        const std::vector<int> both = qudit_union(inst, {a, b});
        for (const auto& x : ops) {
            const Mat ab = alg.measure(a, alg.measure(b, x));
            const Mat joint = pab * x * pab.adjoint();
            fold(p4, std::max(rel_residual(ab, joint), rel_residual(alg.measure(b, alg.measure(a, x)), joint)), 0.0);
            const Mat eu = alg.reset_set(both, x);
            fold(p5, std::max(rel_residual(alg.reset(a, alg.reset(b, x)), eu),
                              rel_residual(alg.reset(b, alg.reset(a, x)), eu)),
                 0.0);
            fold(p6, std::max(rel_residual(alg.measure(a, alg.reset(b, x)), alg.reset(b, alg.measure(a, x))),
                              rel_residual(alg.measure(b, alg.reset(a, x)), alg.reset(a, alg.measure(b, x)))),
                 0.0);
        }
    }
    for (PartResult* p : {&p4, &p5, &p6}) {
        if (pairs.empty()) {
            p->status = "skipped";
            p->note = "no disjoint pair";
        } else {
            finish_eq(*p);
            p->note = std::to_string(pairs.size()) + " disjoint pairs";
        }
        rep.parts.push_back(*p);
    }

    PartResult p7{"vii", "", 0.0, 0.0, ""};
    if (!commuting) {
        p7.status = "skipped";
        p7.note = "instance is not commuting";
    } else {
        const Mat id = identity(D);
        for (int a = 0; a < m; ++a) {
            for (const auto& x : ops)
                fold(p7, rel_residual(alg.measure(a, alg.cont(x)), alg.cont(alg.measure(a, x))), 0.0);
            for (const auto& rho : states) {
                const Mat lhs = alg.sandwiched_sum(alg.projector(a), rho);
                const Mat rhs = alg.sandwiched_sum(id, alg.measure(a, rho));
                fold(p7, rel_residual(lhs, rhs), 0.0);
            }
        }
        // The series stop leaves up to ~1e-13 per entry.
        p7.status = p7.residual < equality_tol ? "passed" : "failed";
    }
    rep.parts.push_back(p7);
    return rep;
}

GapBoundReport first_violation_gap_bound(const QlllInstance& inst, int a) {
    check_ids(inst, {a}, "gap bound");
    const std::size_t D = inst.shape.dim();
    auto spec = spectral_report(inst);
    auto x = halting_operator(inst, a);
    const Mat target = inst.embedded(a) / static_cast<double>(D);
    GapBoundReport r;
    r.a = a;
    r.probability = x.probability;
    r.delta = spec.delta;
    r.plain = psd_leq(x.op, target);
    if (spec.delta < 1e-10) {
        r.gap_note = "gap below 1e-10; bound is vacuous";
        return r;
    }
    r.gap = psd_leq(x.op, target / (inst.m() * spec.delta));
    if (!spec.frustration_free) {
        r.gap_note = "instance is frustrated; the gap bound is only claimed for frustration-free instances";
        return r;
    }
    r.gap_applicable = true;
    return r;
}

SuiteReport shortclaim_suite(const QlllInstance& inst, const std::vector<int>& product_ids, int max_power) {
    require_superoperator_budget(inst.shape);
    if (product_ids.empty()) throw std::invalid_argument("shortclaim: product needs at least one projector");
    check_ids(inst, product_ids, "shortclaim");
    {
        std::vector<int> s = product_ids;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end())
            throw std::invalid_argument("shortclaim: repeated projector id");
    }
    const std::size_t D = inst.shape.dim();
    const Mat id = identity(D);
    std::vector<Mat> pis = inst.embedded_all();
    for (std::size_t i = 0; i < product_ids.size(); ++i)
        for (std::size_t j = i + 1; j < product_ids.size(); ++j) {
            const Mat& x = pis[product_ids[i]];
            const Mat& y = pis[product_ids[j]];
            if ((x * y - y * x).cwiseAbs().maxCoeff() > tol::projector)
                throw std::invalid_argument("shortclaim: listed projectors do not commute");
        }
    const double k = static_cast<double>(product_ids.size());
    Mat p = id;
    for (int i : product_ids) p = p * pis[i];
    const Mat q = projector_sum(inst);
    const Mat qpinv = pseudoinverse(q);
    const Mat a_op = kron(q.conjugate(), id) + kron(id, q);
    Mat b_op = Mat::Zero(D * D, D * D);
    for (const auto& pi : pis) b_op += kron(pi.conjugate(), pi);
    const Mat bp = kron(p.conjugate(), p);
    const Mat a_pinv = pseudoinverse(a_op);
    const Vec vid = vectorize(id);
    auto herm = [](const Mat& x) -> Mat { return (x + x.adjoint()) / 2.0; };

    SuiteReport rep;
    rep.lemma = "shortclaim";
    auto ineq = [&](const std::string& name, const Mat& lhs, const Mat& rhs) {
        auto chk = psd_leq(herm(lhs), rhs);
        PartResult r{name, chk.holds ? "passed" : "failed", 0.0, chk.lambda_min, ""};
        // Hermiticity of the devectorized operator is part of the claim.
        r.residual = rel_residual(lhs, lhs.adjoint());
        if (r.residual > 1e-9) r.status = "failed";
        rep.parts.push_back(r);
    };
    auto equal = [&](const std::string& name, const Mat& lhs, const Mat& rhs) {
        double res = rel_residual(lhs, rhs);
        rep.parts.push_back({name, res < 1e-9 ? "passed" : "failed", res, 0.0, ""});
    };

    ineq("tian", p * qpinv * p, p / k);

    const Mat sigma = devectorize(a_pinv * vid);
    const Mat ker = kernel_projector(q);
    equal("A", sigma, qpinv / 2.0 + ker * sigma * ker);

    ineq("BA-product", devectorize(bp * a_pinv * vid), p / (2.0 * k));
    ineq("BA-sum", devectorize(b_op * a_pinv * vid), q / 2.0);

    const Vec b_id = b_op * vid;
    equal("BAB-product", devectorize(bp * a_pinv * b_id), p / 2.0);
    equal("BAB-sum", devectorize(b_op * a_pinv * b_id), q / 2.0);

    Vec v = vid;
    for (int t = 1; t <= max_power; ++t) {
        v = b_op * (a_pinv * v);
        ineq("BAt-" + std::to_string(t), devectorize(v), q / std::pow(2.0, t));
    }

    const Mat main_op = devectorize(bp * pseudoinverse(a_op - b_op) * vid);
    ineq("main", main_op, (0.5 + 0.5 / k) * p);

    if (product_ids.size() == 1) {
        const Mat series = halting_operator(inst, product_ids[0]).op;
        equal("route", main_op / static_cast<double>(D), series);
    }
    return rep;
}

SequenceBoundReport sequence_bound(const QlllInstance& inst, const std::vector<int>& ids) {
    require_commuting(inst, "sequence bound");
    check_ids(inst, ids, "sequence bound");
    SequenceBoundReport r;
    if (ids.empty()) {
        r.probability = r.dag_probability = r.product = 1.0;
        return r;
    }
    auto g = intersection_graph(inst);
    r.dag_probability = dag_probability(build_resample_dag(ids, g), ids).value;
    r.probability = sequence_operator(inst, ids).probability;
    r.product = 1.0;
    for (int a : ids) r.product *= relative_dimension(inst.projectors[a], inst.shape);
    r.slack = r.dag_probability * r.product - r.probability;
    r.holds = r.slack >= -1e-9;
    return r;
}

SequenceBoundReport partial_dag_channel_bound(const QlllInstance& inst, const std::vector<int>& relevant_ids,
                                              const std::vector<std::vector<int>>& irrelevant_sets) {
    require_commuting(inst, "partial DAG bound");
    check_ids(inst, relevant_ids, "partial DAG bound");
    if (relevant_ids.empty()) throw std::invalid_argument("partial DAG bound needs a nonempty relevant sequence");
    if (irrelevant_sets.size() != relevant_ids.size())
        throw std::invalid_argument("partial DAG bound needs one gap set per relevant id");
    for (std::size_t i = 0; i < irrelevant_sets.size(); ++i) {
        check_ids(inst, irrelevant_sets[i], "partial DAG bound");
        for (int x : irrelevant_sets[i])
            for (std::size_t j = i; j < relevant_ids.size(); ++j)
                if (!disjoint(inst.projectors[x], inst.projectors[relevant_ids[j]]))
                    throw std::invalid_argument("gap set " + std::to_string(i) + ": projector " + std::to_string(x) +
                                                " intersects later relevant projector " +
                                                std::to_string(relevant_ids[j]));
    }
    auto g = intersection_graph(inst);
    auto pd = build_partial_resample_dag(relevant_ids, g);
    if (pd.relevant_subsequence != relevant_ids)
        throw std::invalid_argument("relevant ids are not their own relevant subsequence");

    ChannelAlgebra alg(inst);
    const std::size_t D = inst.shape.dim();
    Mat x = identity(D) / static_cast<double>(D);
    for (std::size_t i = 0; i < relevant_ids.size(); ++i) {
        const int a = relevant_ids[i];
        x = alg.reset(a, alg.halt_on_partial(a, irrelevant_sets[i], x));
    }
    SequenceBoundReport r;
    r.probability = trace_real(x);
    r.dag_probability = dag_probability(pd.dag, relevant_ids).value;
    r.product = 1.0;
    for (int a : relevant_ids) r.product *= relative_dimension(inst.projectors[a], inst.shape);
    r.slack = r.dag_probability * r.product - r.probability;
    r.holds = r.slack >= -1e-9;
    return r;
}

TracedLemmaReport traced_partial_lemma(const QlllInstance& inst, const std::vector<int>& product_ids,
                                       const std::vector<int>& irrelevant) {
    require_commuting(inst, "traced lemma");
    check_ids(inst, product_ids, "traced lemma");
    check_ids(inst, irrelevant, "traced lemma");
    if (product_ids.empty()) throw std::invalid_argument("traced lemma needs at least one product projector");
    for (std::size_t i = 0; i < product_ids.size(); ++i) {
        for (std::size_t j = i + 1; j < product_ids.size(); ++j)
            if (!disjoint(inst.projectors[product_ids[i]], inst.projectors[product_ids[j]]))
                throw std::invalid_argument("traced lemma: product projectors must be disjoint");
        for (int x : irrelevant)
            if (!disjoint(inst.projectors[product_ids[i]], inst.projectors[x]))
                throw std::invalid_argument("traced lemma: irrelevant projector " + std::to_string(x) +
                                            " intersects the product");
    }
    ChannelAlgebra alg(inst);
    const std::size_t D = inst.shape.dim();
    const Mat mixed = identity(D) / static_cast<double>(D);
    const Mat p = product_of(alg, product_ids);
    const std::vector<int> traced = qudit_union(inst, irrelevant);
    const Mat lhs = alg.sum_partial(p, irrelevant, mixed) / static_cast<double>(inst.m());
    const Mat rhs = p * mixed * p / static_cast<double>(product_ids.size());
    TracedLemmaReport r;
    r.check = psd_leq(partial_trace(lhs, traced, inst.shape), partial_trace(rhs, traced, inst.shape));
    r.slack = r.check.lambda_min;
    return r;
}

}  // namespace qlll
