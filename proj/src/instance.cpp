#include "qlll/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qlll {

namespace {

std::string pname(int i) { return "projector " + std::to_string(i); }

}  // namespace

Mat QlllInstance::embedded(int i) const {
    const auto& p = projectors.at(static_cast<std::size_t>(i));
    return embed(p.local, p.qudits, shape);
}

std::vector<Mat> QlllInstance::embedded_all() const {
    std::vector<Mat> out;
    out.reserve(projectors.size());
    for (int i = 0; i < m(); ++i) out.push_back(embedded(i));
    return out;
}

void validate(const QlllInstance& inst) {
    if (inst.shape.d < 2) throw std::invalid_argument("local dimension d must be at least 2");
    if (inst.shape.n < 1) throw std::invalid_argument("instance needs at least one qudit");
    for (int i = 0; i < inst.m(); ++i) {
        const auto& p = inst.projectors[i];
        if (p.id != i) throw std::invalid_argument(pname(i) + ": ids must be 0..m-1 without gaps");
        if (p.qudits.empty()) throw std::invalid_argument(pname(i) + ": empty qudit subset");
        validate_subset(p.qudits, inst.shape);
        std::size_t k = 1;
        for (std::size_t t = 0; t < p.qudits.size(); ++t) k *= static_cast<std::size_t>(inst.shape.d);
        if (p.local.rows() != p.local.cols() || static_cast<std::size_t>(p.local.rows()) != k)
            throw std::invalid_argument(pname(i) + ": matrix must be d^|qudits| square");
        double scale = std::max(1.0, p.local.cwiseAbs().maxCoeff());
        if ((p.local - p.local.adjoint()).cwiseAbs().maxCoeff() > tol::projector * scale)
            throw std::invalid_argument(pname(i) + ": matrix is not Hermitian");
        if ((p.local * p.local - p.local).cwiseAbs().maxCoeff() > tol::projector * scale)
            throw std::invalid_argument(pname(i) + ": matrix is not idempotent");
        double tr = p.local.trace().real();
        if (std::abs(tr - std::round(tr)) > 1e-8)
            throw std::invalid_argument(pname(i) + ": trace is not an integer rank");
    }
}

Commutation check_commutation(const QlllInstance& inst, double tolerance) {
    for (int i = 0; i < inst.m(); ++i)
        for (int j = i + 1; j < inst.m(); ++j) {
            const auto& a = inst.projectors[i];
            const auto& b = inst.projectors[j];
            std::vector<int> uni = a.qudits;
            for (int q : b.qudits)
                if (std::find(uni.begin(), uni.end(), q) == uni.end()) uni.push_back(q);
            if (uni.size() == a.qudits.size() + b.qudits.size()) continue;
            // Embed both into the space of the union, relabelled 0..|union|-1.
            Shape s{static_cast<int>(uni.size()), inst.shape.d};
            auto relabel = [&](const std::vector<int>& qs) {
                std::vector<int> out;
                for (int q : qs) out.push_back(static_cast<int>(std::find(uni.begin(), uni.end(), q) - uni.begin()));
                return out;
            };
            Mat pa = embed(a.local, relabel(a.qudits), s);
            Mat pb = embed(b.local, relabel(b.qudits), s);
            if ((pa * pb - pb * pa).cwiseAbs().maxCoeff() > tolerance) return Commutation::noncommuting;
        }
    return Commutation::commuting;
}

QlllInstance& mark_commutation(QlllInstance& inst) {
    inst.commutation = check_commutation(inst);
    return inst;
}

int projector_rank(const Projector& p) { return static_cast<int>(std::lround(p.local.trace().real())); }

double relative_dimension(const Projector& p, const Shape&) {
    return p.local.trace().real() / static_cast<double>(p.local.rows());
}

std::vector<double> relative_dimensions(const QlllInstance& inst) {
    std::vector<double> out;
    for (const auto& p : inst.projectors) out.push_back(relative_dimension(p, inst.shape));
    return out;
}

bool IntersectionGraph::intersects(int i, int j) const {
    if (i == j) return true;
    const auto& a = adjacency.at(static_cast<std::size_t>(i));
    return std::binary_search(a.begin(), a.end(), j);
}

std::vector<int> IntersectionGraph::inclusive(int i) const {
    std::vector<int> out = adjacency.at(static_cast<std::size_t>(i));
    out.insert(std::lower_bound(out.begin(), out.end(), i), i);
    return out;
}

IntersectionGraph graph_from_subsets(const std::vector<std::vector<int>>& subsets) {
    IntersectionGraph g;
    const int m = static_cast<int>(subsets.size());
    g.adjacency.assign(m, {});
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            bool hit = false;
            for (int q : subsets[i])
                if (std::find(subsets[j].begin(), subsets[j].end(), q) != subsets[j].end()) hit = true;
            if (hit) {
                g.adjacency[i].push_back(j);
                g.adjacency[j].push_back(i);
            }
        }
    for (auto& a : g.adjacency) std::sort(a.begin(), a.end());
    return g;
}

IntersectionGraph intersection_graph(const QlllInstance& inst) {
    std::vector<std::vector<int>> subsets;
    for (const auto& p : inst.projectors) subsets.push_back(p.qudits);
    return graph_from_subsets(subsets);
}

LovaszCertificate make_certificate(std::vector<double> x, double epsilon, const IntersectionGraph& g) {
    if (static_cast<int>(x.size()) != g.size()) throw std::invalid_argument("certificate length does not match m");
    LovaszCertificate c;
    c.x = std::move(x);
    c.epsilon = epsilon;
    c.x_prime.resize(c.x.size());
    for (int i = 0; i < g.size(); ++i) {
        double v = c.x[i];
        for (int j : g.adjacency[i]) v *= 1.0 - c.x[j];
        c.x_prime[i] = v;
    }
    return c;
}

void validate_certificate(const LovaszCertificate& cert, const IntersectionGraph& g) {
    if (static_cast<int>(cert.x.size()) != g.size() || cert.x_prime.size() != cert.x.size())
        throw std::invalid_argument("certificate length does not match m");
    if (cert.epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
    for (double v : cert.x)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("certificate entry outside [0,1]");
    auto fresh = make_certificate(cert.x, cert.epsilon, g);
    for (std::size_t i = 0; i < cert.x.size(); ++i)
        if (std::abs(fresh.x_prime[i] - cert.x_prime[i]) > 1e-12)
            throw std::invalid_argument("certificate x' does not match x");
}

LovaszCheck check_lovasz(const std::vector<double>& probabilities, const IntersectionGraph& g,
                         const LovaszCertificate& cert) {
    if (probabilities.size() != cert.x.size() || static_cast<int>(cert.x.size()) != g.size())
        throw std::invalid_argument("certificate length does not match m");
    validate_certificate(cert, g);
    LovaszCheck out;
    for (std::size_t i = 0; i < cert.x.size(); ++i) {
        double s = (1.0 - cert.epsilon) * cert.x_prime[i] - probabilities[i];
        out.slack.push_back(s);
        // Ties at exactly zero slack count as satisfied up to rounding.
        if (s < -1e-12) out.holds = false;
    }
    return out;
}

LovaszCheck check_lovasz(const QlllInstance& inst, const LovaszCertificate& cert) {
    return check_lovasz(relative_dimensions(inst), intersection_graph(inst), cert);
}

std::optional<LovaszCertificate> find_certificate(const std::vector<double>& probabilities,
                                                  const IntersectionGraph& g, double epsilon) {
    const int m = g.size();
    if (static_cast<int>(probabilities.size()) != m) throw std::invalid_argument("probability count does not match m");
    if (epsilon < 0.0 || epsilon >= 1.0) throw std::invalid_argument("epsilon must lie in [0,1)");
    const double scale = 1.0 / (1.0 - epsilon);
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = probabilities[i] * scale;
    constexpr double upper = 1.0 - 1e-9;
    for (int sweep = 0; sweep < 10000; ++sweep) {
        double change = 0.0;
        std::vector<double> next(m);
        for (int i = 0; i < m; ++i) {
            double prod = 1.0;
            for (int j : g.adjacency[i]) prod *= 1.0 - x[j];
            next[i] = prod > 0.0 ? probabilities[i] * scale / prod : 2.0;
            if (next[i] > upper) return std::nullopt;
            change = std::max(change, std::abs(next[i] - x[i]));
        }
        x = std::move(next);
        if (change < 1e-12) {
            auto cert = make_certificate(x, epsilon, g);
            if (!check_lovasz(probabilities, g, cert).holds) return std::nullopt;
            return cert;
        }
    }
    return std::nullopt;
}

std::optional<LovaszCertificate> find_certificate(const QlllInstance& inst, double epsilon) {
    return find_certificate(relative_dimensions(inst), intersection_graph(inst), epsilon);
}

bool symmetric_condition(int k, int r, int max_occurrence) {
    if (k < 1 || r < 1) throw std::invalid_argument("k and r must be at least 1");
    if (max_occurrence <= 0) return true;
    return max_occurrence <= std::pow(2.0, k) / (std::numbers::e * r * k);
}

Mat projector_sum(const QlllInstance& inst) {
    const std::size_t D = inst.shape.dim();
    Mat q = Mat::Zero(D, D);
    for (int i = 0; i < inst.m(); ++i) q += inst.embedded(i);
    return q;
}

Mat ground_projector(const QlllInstance& inst) {
    require_dense_budget(inst.shape);
    return kernel_projector(projector_sum(inst));
}

SpectralReport spectral_report(const QlllInstance& inst) {
    require_dense_budget(inst.shape);
    SpectralReport r;
    const std::size_t D = inst.shape.dim();
    if (inst.m() == 0) {
        r.eigenvalues.assign(D, 0.0);
        r.ground_dim = static_cast<int>(D);
        r.p0 = identity(D);
        r.frustration_free = true;
        return r;
    }
    Mat q = projector_sum(inst);
    auto eig = hermitian_eig(q / static_cast<double>(inst.m()));
    r.eigenvalues.assign(eig.values.data(), eig.values.data() + eig.values.size());
    const double lo = r.eigenvalues.front();
    r.delta = 0.0;
    for (double e : r.eigenvalues)
        if (e - lo > tol::distinct) {
            r.delta = e - lo;
            break;
        }
    r.frustration_free = std::abs(lo) < tol::distinct;
    r.p0 = Mat::Zero(D, D);
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        if (std::abs(eig.values(i)) < tol::distinct) {
            r.p0 += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
            ++r.ground_dim;
        }
    if (inst.commutation == Commutation::commuting && r.frustration_free) {
        // Commuting spectra are violation counts over m; a single-violation
        // eigenstate pins the gap to 1/m.
        const double one = 1.0 / inst.m();
        bool single = std::any_of(r.eigenvalues.begin(), r.eigenvalues.end(),
                                  [&](double e) { return std::abs(e - one) < tol::distinct; });
        if (single && std::abs(r.delta - one) > tol::distinct)
            throw std::logic_error("commuting instance with a single-violation eigenstate has gap != 1/m");
    }
    return r;
}

}  // namespace qlll
