#pragma once
// Moser–Tardos resampling over discrete independent variables.

#include "qlll/instance.hpp"
#include "qlll/log.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qlll {

struct ClassicalEvent {
    std::vector<int> vars;               // distinct variable ids
    std::vector<std::uint8_t> violated;  // truth table, mixed radix, first var most significant
};

struct ClassicalInstance {
    std::vector<int> domains;  // per-variable domain size
    std::vector<ClassicalEvent> events;

    int n() const { return static_cast<int>(domains.size()); }
    int m() const { return static_cast<int>(events.size()); }
};

void validate(const ClassicalInstance& inst);

bool event_violated(const ClassicalEvent& e, const std::vector<int>& assignment, const std::vector<int>& domains);
// Probability of the event under the uniform product distribution.
double event_probability(const ClassicalEvent& e, const std::vector<int>& domains);
std::vector<double> event_probabilities(const ClassicalInstance& inst);
IntersectionGraph intersection_graph(const ClassicalInstance& inst);

struct ClassicalResult {
    bool success = false;  // false means the resample budget ran out
    std::vector<int> assignment;
    ExecutionLog log;
    std::uint64_t resamples = 0;
};

constexpr std::uint64_t default_resample_budget = 1000000;

// Lowest-id violated event is resampled first. Variables are drawn in id order.
ClassicalResult solve_classical(const ClassicalInstance& inst, std::uint64_t seed,
                                std::uint64_t max_resamples = default_resample_budget, std::uint64_t stream = 0);

// Σ x_i/(1-x_i) after validating the certificate against event probabilities.
double expected_resamples_bound(const ClassicalInstance& inst, const LovaszCertificate& cert);

// DIMACS CNF: each clause becomes the event "all literals false".
ClassicalInstance parse_dimacs(const std::string& text, const std::string& source = "<cnf>");
ClassicalInstance load_classical(const std::string& path);
ClassicalInstance classical_from_json(const nlohmann::json& j);
nlohmann::json classical_to_json(const ClassicalInstance& inst);

// Random k-SAT over n boolean variables with m clauses of distinct variables.
ClassicalInstance random_ksat(std::uint64_t seed, int n, int m, int k);

}  // namespace qlll
