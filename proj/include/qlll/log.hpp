#pragma once
// Execution logs shared by the classical and quantum solvers.

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qlll {

struct LogEntry {
    std::uint64_t step = 0;
    int label = 0;
};

struct ExecutionLog {
    std::vector<LogEntry> entries;
    std::uint64_t total_steps = 0;
    std::uint64_t seed = 0;

    std::vector<int> labels() const;
    std::size_t size() const { return entries.size(); }
    void append(std::uint64_t step, int label);
};

nlohmann::json log_to_json(const ExecutionLog& log);
// Accepts the object form written by log_to_json or a bare array of labels.
ExecutionLog log_from_json(const nlohmann::json& j);

}  // namespace qlll
