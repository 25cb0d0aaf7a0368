#include "qlll/classical.hpp"

#include "qlll/instance_io.hpp"
#include "qlll/rng.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qlll {

namespace {

std::size_t table_size(const ClassicalEvent& e, const std::vector<int>& domains) {
    std::size_t k = 1;
    for (int v : e.vars) k *= static_cast<std::size_t>(domains[v]);
    return k;
}

std::size_t table_index(const ClassicalEvent& e, const std::vector<int>& assignment, const std::vector<int>& domains) {
    std::size_t idx = 0;
    for (int v : e.vars) idx = idx * domains[v] + assignment[v];
    return idx;
}

}  // namespace

void validate(const ClassicalInstance& inst) {
    for (int v = 0; v < inst.n(); ++v)
        if (inst.domains[v] < 1) throw std::invalid_argument("variable " + std::to_string(v) + ": empty domain");
    for (int i = 0; i < inst.m(); ++i) {
        const auto& e = inst.events[i];
        std::vector<int> s = e.vars;
        std::sort(s.begin(), s.end());
        for (std::size_t t = 0; t < s.size(); ++t) {
            if (s[t] < 0 || s[t] >= inst.n())
                throw std::invalid_argument("event " + std::to_string(i) + ": variable out of range");
            if (t > 0 && s[t] == s[t - 1])
                throw std::invalid_argument("event " + std::to_string(i) + ": duplicate variable");
        }
        if (e.violated.size() != table_size(e, inst.domains))
            throw std::invalid_argument("event " + std::to_string(i) + ": truth table has the wrong size");
    }
}

bool event_violated(const ClassicalEvent& e, const std::vector<int>& assignment, const std::vector<int>& domains) {
    return e.violated[table_index(e, assignment, domains)] != 0;
}

double event_probability(const ClassicalEvent& e, const std::vector<int>&) {
    std::size_t hits = 0;
    for (auto b : e.violated) hits += b ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(e.violated.size());
}

std::vector<double> event_probabilities(const ClassicalInstance& inst) {
    std::vector<double> out;
    for (const auto& e : inst.events) out.push_back(event_probability(e, inst.domains));
    return out;
}

IntersectionGraph intersection_graph(const ClassicalInstance& inst) {
    std::vector<std::vector<int>> subsets;
    for (const auto& e : inst.events) subsets.push_back(e.vars);
    return graph_from_subsets(subsets);
}

ClassicalResult solve_classical(const ClassicalInstance& inst, std::uint64_t seed, std::uint64_t max_resamples,
                                std::uint64_t stream) {
    validate(inst);
    Rng rng(seed, stream);
    ClassicalResult res;
    res.log.seed = seed;
    res.assignment.resize(inst.n());
    for (int v = 0; v < inst.n(); ++v) res.assignment[v] = static_cast<int>(rng.below(inst.domains[v]));

    std::vector<std::vector<int>> touching(inst.n());
    for (int i = 0; i < inst.m(); ++i)
        for (int v : inst.events[i].vars) touching[v].push_back(i);
    std::set<int> violated;
    for (int i = 0; i < inst.m(); ++i)
        if (event_violated(inst.events[i], res.assignment, inst.domains)) violated.insert(i);

    std::vector<int> order;
    while (!violated.empty()) {
        if (res.resamples >= max_resamples) {
            res.log.total_steps = res.resamples;
            return res;
        }
        int j = *violated.begin();
        res.log.append(res.resamples, j);
        ++res.resamples;
        order = inst.events[j].vars;
        std::sort(order.begin(), order.end());
        for (int v : order) res.assignment[v] = static_cast<int>(rng.below(inst.domains[v]));
        for (int v : order)
            for (int i : touching[v]) {
                if (event_violated(inst.events[i], res.assignment, inst.domains))
                    violated.insert(i);
                else
                    violated.erase(i);
            }
    }
    res.success = true;
    res.log.total_steps = res.resamples;
    return res;
}

double expected_resamples_bound(const ClassicalInstance& inst, const LovaszCertificate& cert) {
    auto check = check_lovasz(event_probabilities(inst), intersection_graph(inst), cert);
    if (!check.holds) throw std::invalid_argument("certificate does not satisfy the Lovász conditions");
    double s = 0.0;
    for (double x : cert.x) {
        if (x >= 1.0) throw std::invalid_argument("certificate entry equal to 1 gives an unbounded estimate");
        s += x / (1.0 - x);
    }
    return s;
}

ClassicalInstance parse_dimacs(const std::string& text, const std::string& source) {
    ClassicalInstance inst;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    long long declared_vars = -1, declared_clauses = -1;
    std::vector<int> clause;
    auto fail = [&](std::size_t col, const std::string& what) {
        throw ParseError(source + ": line " + std::to_string(lineno) + ", column " + std::to_string(col) + ": " + what);
    };
    auto finish_clause = [&]() {
        // Event = all literals false. Literals on the same variable merge;
        // a tautology is never violated.
        std::vector<int> vars;
        std::vector<int> falsifying;  // value of each var that falsifies its literal
        bool tautology = false;
        for (int lit : clause) {
            int v = std::abs(lit) - 1;
            int fv = lit > 0 ? 0 : 1;
            auto it = std::find(vars.begin(), vars.end(), v);
            if (it == vars.end()) {
                vars.push_back(v);
                falsifying.push_back(fv);
            } else if (falsifying[it - vars.begin()] != fv) {
                tautology = true;
            }
        }
        ClassicalEvent e;
        e.vars = vars;
        e.violated.assign(std::size_t{1} << vars.size(), 0);
        if (!tautology) {
            std::size_t idx = 0;
            for (int fv : falsifying) idx = idx * 2 + fv;
            e.violated[idx] = 1;
        }
        inst.events.push_back(std::move(e));
        clause.clear();
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == 'c' || line[pos] == '%') continue;
        if (line[pos] == 'p') {
            if (declared_vars >= 0) fail(pos + 1, "duplicate problem line");
            std::istringstream ps(line.substr(pos));
            std::string p, fmt;
            ps >> p >> fmt >> declared_vars >> declared_clauses;
            if (!ps || fmt != "cnf" || declared_vars < 0 || declared_clauses < 0)
                fail(pos + 1, "expected \"p cnf <vars> <clauses>\"");
            inst.domains.assign(static_cast<std::size_t>(declared_vars), 2);
            continue;
        }
        if (declared_vars < 0) fail(pos + 1, "clause before the problem line");
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            if (i >= line.size()) break;
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
            std::string tok = line.substr(start, i - start);
            long long lit;
            try {
                std::size_t used = 0;
                lit = std::stoll(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                fail(start + 1, "invalid literal \"" + tok + "\"");
            }
            if (lit == 0) {
                finish_clause();
            } else {
                if (std::llabs(lit) > declared_vars) fail(start + 1, "variable " + tok + " exceeds declared count");
                clause.push_back(static_cast<int>(lit));
            }
        }
    }
    if (declared_vars < 0) throw ParseError(source + ": missing problem line");
    if (!clause.empty()) finish_clause();
    if (static_cast<long long>(inst.events.size()) != declared_clauses)
        throw ParseError(source + ": declared " + std::to_string(declared_clauses) + " clauses, found " +
                         std::to_string(inst.events.size()));
    return inst;
}

ClassicalInstance classical_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("domains") || !j.contains("events"))
        throw ParseError("classical instance needs \"domains\" and \"events\"");
    ClassicalInstance inst;
    for (const auto& v : j["domains"]) inst.domains.push_back(v.get<int>());
    std::size_t idx = 0;
    for (const auto& ej : j["events"]) {
        ClassicalEvent e;
        if (!ej.contains("vars") || !ej.contains("table"))
            throw ParseError("at /events/" + std::to_string(idx) + ": needs \"vars\" and \"table\"");
        for (const auto& v : ej["vars"]) e.vars.push_back(v.get<int>());
        for (const auto& b : ej["table"]) e.violated.push_back(b.get<int>() != 0 ? 1 : 0);
        inst.events.push_back(std::move(e));
        ++idx;
    }
    try {
        validate(inst);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid classical instance: ") + e.what());
    }
    return inst;
}

nlohmann::json classical_to_json(const ClassicalInstance& inst) {
    nlohmann::json j;
    j["domains"] = inst.domains;
    j["events"] = nlohmann::json::array();
    for (const auto& e : inst.events) {
        std::vector<int> table(e.violated.begin(), e.violated.end());
        j["events"].push_back({{"vars", e.vars}, {"table", table}});
    }
    return j;
}

ClassicalInstance load_classical(const std::string& path) {
    std::string text = read_file(path);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return classical_from_json(parse_json_text(text, path));
    auto inst = parse_dimacs(text, path);
    validate(inst);
    return inst;
}

ClassicalInstance random_ksat(std::uint64_t seed, int n, int m, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("random_ksat: need 1 <= k <= n");
    Rng rng(seed, 0xc1a5);
    ClassicalInstance inst;
    inst.domains.assign(n, 2);
    for (int c = 0; c < m; ++c) {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        for (int i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
        ClassicalEvent e;
        e.vars.assign(all.begin(), all.begin() + k);
        std::sort(e.vars.begin(), e.vars.end());
        e.violated.assign(std::size_t{1} << k, 0);
        e.violated[rng.below(std::size_t{1} << k)] = 1;
        inst.events.push_back(std::move(e));
    }
    return inst;
}

}  // namespace qlll
