#pragma once
// Witness trees, resample DAGs and Galton–Watson tree probabilities over
// abstract labels. Two labels intersect when the graph says so; a label
// always intersects itself.

#include "qlll/instance.hpp"
#include "qlll/rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace qlll {

using Rational = boost::multiprecision::cpp_rational;

struct WitnessTree {
    struct Vertex {
        int label = 0;
        int parent = -1;
        int depth = 0;
        std::vector<int> children;  // vertex indices in creation order
    };
    std::vector<Vertex> vertices;  // index = creation index; 0 is the root

    static WitnessTree single(int label);
    int add_child(int parent, int label);
    int size() const { return static_cast<int>(vertices.size()); }
    bool proper() const;  // siblings carry distinct labels
    // Vertices in breadth-first order, children in creation order.
    std::vector<int> bfs_order() const;
    // Label plus sorted child forms, recursively; equal iff label-isomorphic.
    std::string canonical() const;
    std::vector<int> labels() const;
};

WitnessTree build_witness_tree(const std::vector<int>& log_labels, std::size_t entry_index,
                               const IntersectionGraph& g);
// Same-depth vertices never carry intersecting labels.
bool levels_independent(const WitnessTree& tree, const IntersectionGraph& g);
bool occurs_in_log(const WitnessTree& tree, const std::vector<int>& log_labels, const IntersectionGraph& g);

// Edges point from the later element to the earlier one, so a leaf (no
// outgoing edge) is time-minimal.
struct ResampleDag {
    std::vector<int> labels;               // in sequence order
    std::vector<std::vector<int>> out;     // later -> earlier
    bool partial = false;

    int size() const { return static_cast<int>(labels.size()); }
    // Lexicographically smallest linear extension, prefixed by the kind.
    std::string canonical() const;
    std::vector<int> smallest_extension() const;
};

ResampleDag build_resample_dag(const std::vector<int>& seq, const IntersectionGraph& g);

struct PartialDag {
    ResampleDag dag;
    std::vector<int> relevant_positions;    // indices into the input sequence
    std::vector<int> relevant_subsequence;  // labels, original order
};

PartialDag build_partial_resample_dag(const std::vector<int>& seq, const IntersectionGraph& g);
// Full-DAG structures match the DAG of a log prefix; partial ones match the
// partial DAG ending at some entry.
bool occurs_in_log(const ResampleDag& dag, const std::vector<int>& log_labels, const IntersectionGraph& g);

struct DagProbability {
    bool exact = false;  // true when `rational` holds the value
    Rational rational = 0;
    double value = 0.0;
};

constexpr int dag_vertex_cap = 20;
constexpr int dag_exact_cap = 12;

// Probability that uniform leaf removal emits `seq`.
DagProbability dag_probability(const ResampleDag& dag, const std::vector<int>& seq);
std::map<std::vector<int>, DagProbability> dag_sequence_distribution(const ResampleDag& dag);

double galton_watson_probability(const WitnessTree& tree, const LovaszCertificate& cert, const IntersectionGraph& g);

struct GaltonWatsonSample {
    WitnessTree tree;
    bool diverged = false;
};

constexpr int galton_watson_cap = 10000;

GaltonWatsonSample simulate_galton_watson(int root_label, const LovaszCertificate& cert, const IntersectionGraph& g,
                                          Rng& rng);

// Every tree rooted at `root_label` whose children come from Γ⁺ of the parent
// with distinct sibling labels, up to `max_vertices` vertices.
std::vector<WitnessTree> enumerate_proper_trees(int root_label, const IntersectionGraph& g, int max_vertices);

double expected_violations_bound(const LovaszCertificate& cert);

nlohmann::json tree_to_json(const WitnessTree& tree);
WitnessTree tree_from_json(const nlohmann::json& j);
nlohmann::json dag_to_json(const ResampleDag& dag);

}  // namespace qlll
