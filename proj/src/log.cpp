#include "qlll/log.hpp"

#include "qlll/instance_io.hpp"

namespace qlll {

std::vector<int> ExecutionLog::labels() const {
    std::vector<int> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.label);
    return out;
}

void ExecutionLog::append(std::uint64_t step, int label) {
    if (!entries.empty() && step <= entries.back().step)
        throw std::logic_error("log steps must be strictly increasing");
    entries.push_back({step, label});
}

nlohmann::json log_to_json(const ExecutionLog& log) {
    nlohmann::json j;
    j["seed"] = log.seed;
    j["total_steps"] = log.total_steps;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : log.entries) j["entries"].push_back({{"step", e.step}, {"label", e.label}});
    return j;
}

ExecutionLog log_from_json(const nlohmann::json& j) {
    ExecutionLog log;
    if (j.is_array()) {
        std::uint64_t step = 0;
        for (const auto& v : j) {
            if (!v.is_number_integer()) throw ParseError("log: labels must be integers");
            log.append(step++, v.get<int>());
        }
        log.total_steps = step;
        return log;
    }
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
        throw ParseError("log: expected an object with an \"entries\" array");
    log.seed = j.value("seed", std::uint64_t{0});
    log.total_steps = j.value("total_steps", std::uint64_t{0});
    std::size_t idx = 0;
    for (const auto& e : j["entries"]) {
        if (!e.is_object() || !e.contains("step") || !e.contains("label"))
            throw ParseError("log: entry " + std::to_string(idx) + " needs \"step\" and \"label\"");
        try {
            log.append(e["step"].get<std::uint64_t>(), e["label"].get<int>());
        } catch (const std::logic_error& ex) {
            throw ParseError("log: entry " + std::to_string(idx) + ": " + ex.what());
        }
        ++idx;
    }
    return log;
}

}  // namespace qlll
