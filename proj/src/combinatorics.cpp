#include "qlll/combinatorics.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace qlll {

WitnessTree WitnessTree::single(int label) {
    WitnessTree t;
    t.vertices.push_back({label, -1, 0, {}});
    return t;
}

int WitnessTree::add_child(int parent, int label) {
    if (parent < 0 || parent >= size()) throw std::out_of_range("add_child: bad parent index");
    int idx = size();
    vertices.push_back({label, parent, vertices[parent].depth + 1, {}});
    vertices[parent].children.push_back(idx);
    return idx;
}

bool WitnessTree::proper() const {
    for (const auto& v : vertices) {
        std::vector<int> ls;
        for (int c : v.children) ls.push_back(vertices[c].label);
        std::sort(ls.begin(), ls.end());
        if (std::adjacent_find(ls.begin(), ls.end()) != ls.end()) return false;
    }
    return true;
}

std::vector<int> WitnessTree::bfs_order() const {
    std::vector<int> order;
    if (vertices.empty()) return order;
    std::deque<int> q{0};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        order.push_back(v);
        for (int c : vertices[v].children) q.push_back(c);
    }
    return order;
}

std::string WitnessTree::canonical() const {
    if (vertices.empty()) return "()";
    std::function<std::string(int)> form = [&](int v) {
        std::vector<std::string> kids;
        for (int c : vertices[v].children) kids.push_back(form(c));
        std::sort(kids.begin(), kids.end());
        std::string s = "(" + std::to_string(vertices[v].label);
        for (auto& k : kids) s += k;
        return s + ")";
    };
    return form(0);
}

std::vector<int> WitnessTree::labels() const {
    std::vector<int> out;
    for (const auto& v : vertices) out.push_back(v.label);
    return out;
}

WitnessTree build_witness_tree(const std::vector<int>& log_labels, std::size_t entry_index,
                               const IntersectionGraph& g) {
    if (entry_index >= log_labels.size()) throw std::out_of_range("build_witness_tree: entry index past the log");
    WitnessTree t = WitnessTree::single(log_labels[entry_index]);
    for (std::size_t k = entry_index; k-- > 0;) {
        const int label = log_labels[k];
        int best = -1;
        for (int v = 0; v < t.size(); ++v) {
            if (!g.intersects(t.vertices[v].label, label)) continue;
            // Strictly deeper wins, so ties keep the smallest creation index.
            if (best < 0 || t.vertices[v].depth > t.vertices[best].depth) best = v;
        }
        if (best >= 0) t.add_child(best, label);
    }
    return t;
}

bool levels_independent(const WitnessTree& tree, const IntersectionGraph& g) {
    for (int a = 0; a < tree.size(); ++a)
        for (int b = a + 1; b < tree.size(); ++b)
            if (tree.vertices[a].depth == tree.vertices[b].depth &&
                g.intersects(tree.vertices[a].label, tree.vertices[b].label))
                return false;
    return true;
}

bool occurs_in_log(const WitnessTree& tree, const std::vector<int>& log_labels, const IntersectionGraph& g) {
    if (tree.vertices.empty()) return true;
    const std::string want = tree.canonical();
    for (std::size_t k = 0; k < log_labels.size(); ++k) {
        if (log_labels[k] != tree.vertices[0].label) continue;
        if (build_witness_tree(log_labels, k, g).canonical() == want) return true;
    }
    return false;
}

ResampleDag build_resample_dag(const std::vector<int>& seq, const IntersectionGraph& g) {
    ResampleDag dag;
    dag.labels = seq;
    dag.out.assign(seq.size(), {});
    for (std::size_t j = 0; j < seq.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (g.intersects(seq[i], seq[j])) dag.out[j].push_back(static_cast<int>(i));
    return dag;
}

PartialDag build_partial_resample_dag(const std::vector<int>& seq, const IntersectionGraph& g) {
    if (seq.empty()) throw std::invalid_argument("partial resample DAG needs a nonempty sequence");
    PartialDag pd;
    std::vector<int> kept{static_cast<int>(seq.size()) - 1};
    for (std::size_t k = seq.size() - 1; k-- > 0;) {
        bool hit = false;
        for (int v : kept)
            if (g.intersects(seq[v], seq[k])) hit = true;
        if (hit) kept.push_back(static_cast<int>(k));
    }
    std::reverse(kept.begin(), kept.end());
    pd.relevant_positions = kept;
    for (int p : kept) pd.relevant_subsequence.push_back(seq[p]);
    pd.dag = build_resample_dag(pd.relevant_subsequence, g);
    pd.dag.partial = true;
    return pd;
}

std::vector<int> ResampleDag::smallest_extension() const {
    const int n = size();
    std::vector<int> remaining_out(n);
    std::vector<std::vector<int>> in(n);
    for (int v = 0; v < n; ++v) {
        remaining_out[v] = static_cast<int>(out[v].size());
        for (int u : out[v]) in[u].push_back(v);
    }
    std::vector<bool> removed(n, false);
    std::vector<int> seq;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (!removed[v] && remaining_out[v] == 0 && (best < 0 || labels[v] < labels[best])) best = v;
        removed[best] = true;
        seq.push_back(labels[best]);
        for (int w : in[best]) --remaining_out[w];
    }
    return seq;
}

std::string ResampleDag::canonical() const {
    std::string s = partial ? "partial:" : "full:";
    for (int l : smallest_extension()) s += std::to_string(l) + ",";
    return s;
}

bool occurs_in_log(const ResampleDag& dag, const std::vector<int>& log_labels, const IntersectionGraph& g) {
    if (dag.labels.empty()) return true;
    const std::string want = dag.canonical();
    for (std::size_t l = 0; l < log_labels.size(); ++l) {
        std::vector<int> prefix(log_labels.begin(), log_labels.begin() + static_cast<long>(l) + 1);
        std::string got = dag.partial ? build_partial_resample_dag(prefix, g).dag.canonical()
                                      : build_resample_dag(prefix, g).canonical();
        if (got == want) return true;
    }
    return false;
}

namespace {

struct LeafRemoval {
    const ResampleDag& dag;
    std::vector<std::uint32_t> out_mask;  // bitmask of out-neighbours per vertex

    explicit LeafRemoval(const ResampleDag& d) : dag(d), out_mask(d.labels.size(), 0) {
        for (int v = 0; v < d.size(); ++v)
            for (int u : d.out[v]) out_mask[v] |= std::uint32_t{1} << u;
    }
    std::vector<int> leaves(std::uint32_t removed) const {
        std::vector<int> out;
        for (int v = 0; v < dag.size(); ++v)
            if (!(removed >> v & 1U) && (out_mask[v] & ~removed) == 0) out.push_back(v);
        return out;
    }
};

template <class Num>
Num sequence_probability(const LeafRemoval& lr, const std::vector<int>& seq) {
    std::unordered_map<std::uint32_t, Num> memo;
    std::function<Num(std::uint32_t, std::size_t)> go = [&](std::uint32_t removed, std::size_t k) -> Num {
        if (k == seq.size()) return Num(1);
        if (auto it = memo.find(removed); it != memo.end()) return it->second;
        auto ls = lr.leaves(removed);
        Num total(0);
        for (int v : ls)
            if (lr.dag.labels[v] == seq[k]) total += go(removed | (std::uint32_t{1} << v), k + 1);
        total /= Num(static_cast<int>(ls.size()));
        memo.emplace(removed, total);
        return total;
    };
    return go(0, 0);
}

void require_cap(const ResampleDag& dag) {
    if (dag.size() > dag_vertex_cap)
        throw std::length_error("resample DAG has " + std::to_string(dag.size()) + " vertices; cap is " +
                                std::to_string(dag_vertex_cap));
}

}  // namespace

DagProbability dag_probability(const ResampleDag& dag, const std::vector<int>& seq) {
    require_cap(dag);
    DagProbability out;
    out.exact = dag.size() <= dag_exact_cap;
    std::vector<int> a = dag.labels, b = seq;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return out;
    LeafRemoval lr(dag);
    if (out.exact) {
        out.rational = sequence_probability<Rational>(lr, seq);
        out.value = static_cast<double>(out.rational);
    } else {
        out.value = sequence_probability<double>(lr, seq);
    }
    return out;
}

std::map<std::vector<int>, DagProbability> dag_sequence_distribution(const ResampleDag& dag) {
    require_cap(dag);
    LeafRemoval lr(dag);
    const bool exact = dag.size() <= dag_exact_cap;
    std::map<std::vector<int>, DagProbability> dist;
    std::vector<int> seq;
    std::function<void(std::uint32_t, Rational, double)> walk = [&](std::uint32_t removed, Rational pr, double pd) {
        if (static_cast<int>(seq.size()) == dag.size()) {
            auto& slot = dist[seq];
            slot.exact = exact;
            if (exact) slot.rational += pr;
            slot.value += pd;
            return;
        }
        auto ls = lr.leaves(removed);
        const int k = static_cast<int>(ls.size());
        for (int v : ls) {
            seq.push_back(dag.labels[v]);
            walk(removed | (std::uint32_t{1} << v), exact ? Rational(pr / k) : Rational(0), pd / k);
            seq.pop_back();
        }
    };
    walk(0, Rational(1), 1.0);
    if (exact)
        for (auto& [s, p] : dist) p.value = static_cast<double>(p.rational);
    return dist;
}

double galton_watson_probability(const WitnessTree& tree, const LovaszCertificate& cert, const IntersectionGraph& g) {
    if (!tree.proper()) throw std::invalid_argument("Galton-Watson probability needs a proper tree");
    if (tree.vertices.empty()) return 0.0;
    for (const auto& v : tree.vertices)
        if (v.label < 0 || v.label >= static_cast<int>(cert.x.size()))
            throw std::out_of_range("tree label outside the certificate");
    for (const auto& v : tree.vertices)
        for (int c : v.children)
            if (!g.intersects(v.label, tree.vertices[c].label)) return 0.0;
    const int root = tree.vertices[0].label;
    const double xa = cert.x[root];
    if (xa <= 0.0) {
        // Only the bare root is possible; its children all fail to appear.
        if (tree.size() > 1) return 0.0;
        double p = 1.0;
        for (int j : g.inclusive(root)) p *= 1.0 - cert.x[j];
        return p;
    }
    double p = (1.0 - xa) / xa;
    for (const auto& v : tree.vertices) p *= cert.x_prime[v.label];
    return p;
}

GaltonWatsonSample simulate_galton_watson(int root_label, const LovaszCertificate& cert, const IntersectionGraph& g,
                                          Rng& rng) {
    GaltonWatsonSample s;
    s.tree = WitnessTree::single(root_label);
    for (int v = 0; v < s.tree.size(); ++v) {
        const int label = s.tree.vertices[v].label;
        for (int j : g.inclusive(label)) {
            if (rng.uniform() < cert.x[j]) {
                if (s.tree.size() >= galton_watson_cap) {
                    s.diverged = true;
                    return s;
                }
                s.tree.add_child(v, j);
            }
        }
    }
    return s;
}

std::vector<WitnessTree> enumerate_proper_trees(int root_label, const IntersectionGraph& g, int max_vertices) {
    std::vector<WitnessTree> out;
    std::vector<std::string> seen;
    // Grow trees vertex by vertex; a canonical-form check removes duplicates.
    std::function<void(const WitnessTree&)> grow = [&](const WitnessTree& t) {
        std::string c = t.canonical();
        if (std::find(seen.begin(), seen.end(), c) != seen.end()) return;
        seen.push_back(c);
        out.push_back(t);
        if (t.size() >= max_vertices) return;
        for (int v = 0; v < t.size(); ++v)
            for (int j : g.inclusive(t.vertices[v].label)) {
                bool taken = false;
                for (int c2 : t.vertices[v].children)
                    if (t.vertices[c2].label == j) taken = true;
                if (taken) continue;
                WitnessTree next = t;
                next.add_child(v, j);
                grow(next);
            }
    };
    if (max_vertices >= 1) grow(WitnessTree::single(root_label));
    return out;
}

double expected_violations_bound(const LovaszCertificate& cert) {
    double s = 0.0;
    for (double x : cert.x) {
        if (x >= 1.0) throw std::invalid_argument("certificate entry equal to 1 gives an unbounded bound");
        s += x / (1.0 - x);
    }
    return s;
}

nlohmann::json tree_to_json(const WitnessTree& tree) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& v : tree.vertices)
        j.push_back({{"label", v.label}, {"parent", v.parent}, {"depth", v.depth}, {"children", v.children}});
    return j;
}

WitnessTree tree_from_json(const nlohmann::json& j) {
    // Accepts [{"label":..,"parent":..}, ...] with parents listed before children.
    if (!j.is_array() || j.empty()) throw std::invalid_argument("tree must be a nonempty array of vertices");
    WitnessTree t;
    for (std::size_t i = 0; i < j.size(); ++i) {
        int label = j[i].at("label").get<int>();
        int parent = j[i].value("parent", -1);
        if (i == 0) {
            if (parent != -1) throw std::invalid_argument("first vertex must be the root");
            t = WitnessTree::single(label);
        } else {
            if (parent < 0 || parent >= static_cast<int>(i))
                throw std::invalid_argument("vertex " + std::to_string(i) + ": parent must precede it");
            t.add_child(parent, label);
        }
    }
    return t;
}

nlohmann::json dag_to_json(const ResampleDag& dag) {
    nlohmann::json j;
    j["partial"] = dag.partial;
    j["labels"] = dag.labels;
    j["edges"] = dag.out;
    return j;
}

}  // namespace qlll
