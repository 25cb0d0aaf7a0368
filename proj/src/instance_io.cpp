#include "qlll/instance_io.hpp"

#include "qlll/rng.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qlll {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
    throw ParseError("at " + path + ": " + what);
}

Cx parse_entry(const json& e, const std::string& path) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return {e[0].get<double>(), e[1].get<double>()};
    fail_at(path, "matrix entry must be a number or [re, im]");
}

int get_int(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail_at(path, std::string("missing key \"") + key + "\"");
    if (!j[key].is_number_integer()) fail_at(path + "/" + key, "expected an integer");
    return j[key].get<int>();
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Mat random_projector(std::size_t dim, int rank, std::uint64_t seed) {
    if (rank < 0 || static_cast<std::size_t>(rank) > dim) throw std::invalid_argument("rank out of range");
    if (rank == 0) return Mat::Zero(dim, dim);
    Rng rng(seed, 0x5eed);
    Mat g(dim, rank);
    for (Eigen::Index c = 0; c < g.cols(); ++c)
        for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = Cx(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(dim, rank);
    Mat p = q * q.adjoint();
    return 0.5 * (p + p.adjoint());
}

QlllInstance instance_from_json(const json& j) {
    if (!j.is_object()) fail_at("/", "instance must be an object");
    QlllInstance inst;
    inst.shape.n = get_int(j, "n", "/");
    inst.shape.d = get_int(j, "d", "/");
    if (inst.shape.n < 1) fail_at("/n", "need at least one qudit");
    if (inst.shape.d < 2) fail_at("/d", "local dimension must be at least 2");
    if (!j.contains("projectors") || !j["projectors"].is_array()) fail_at("/", "missing array \"projectors\"");
    const auto& arr = j["projectors"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "/projectors/" + std::to_string(i);
        const json& pj = arr[i];
        if (!pj.is_object() || !pj.contains("qudits") || !pj["qudits"].is_array())
            fail_at(path, "projector needs a \"qudits\" array");
        Projector p;
        p.id = static_cast<int>(i);
        for (const auto& q : pj["qudits"]) {
            if (!q.is_number_integer()) fail_at(path + "/qudits", "qudit indices must be integers");
            p.qudits.push_back(q.get<int>());
        }
        try {
            validate_subset(p.qudits, inst.shape);
        } catch (const std::exception& e) {
            fail_at(path + "/qudits", e.what());
        }
        if (p.qudits.empty()) fail_at(path + "/qudits", "empty qudit subset");
        std::size_t k = 1;
        for (std::size_t t = 0; t < p.qudits.size(); ++t) k *= static_cast<std::size_t>(inst.shape.d);
        const std::string kind = pj.value("kind", std::string(pj.contains("matrix") ? "matrix" : ""));
        if (kind == "matrix") {
            const json& mj = pj.at("matrix");
            if (!mj.is_array() || mj.size() != k) fail_at(path + "/matrix", "expected " + std::to_string(k) + " rows");
            p.local = Mat::Zero(k, k);
            for (std::size_t r = 0; r < k; ++r) {
                if (!mj[r].is_array() || mj[r].size() != k)
                    fail_at(path + "/matrix/" + std::to_string(r), "expected " + std::to_string(k) + " entries");
                for (std::size_t c = 0; c < k; ++c)
                    p.local(r, c) = parse_entry(mj[r][c], path + "/matrix/" + std::to_string(r) + "/" + std::to_string(c));
            }
        } else if (kind == "basis") {
            if (!pj.contains("states") || !pj["states"].is_array()) fail_at(path, "basis projector needs \"states\"");
            p.local = Mat::Zero(k, k);
            for (const auto& s : pj["states"]) {
                if (!s.is_number_integer() || s.get<long long>() < 0 || s.get<std::size_t>() >= k)
                    fail_at(path + "/states", "basis state out of range");
                p.local(s.get<std::size_t>(), s.get<std::size_t>()) = 1.0;
            }
        } else if (kind == "rank_random") {
            int rank = get_int(pj, "rank", path);
            if (rank < 0 || static_cast<std::size_t>(rank) > k) fail_at(path + "/rank", "rank out of range");
            if (!pj.contains("seed") || !pj["seed"].is_number_unsigned())
                fail_at(path, "rank_random projector needs a non-negative integer \"seed\"");
            p.local = random_projector(k, rank, pj["seed"].get<std::uint64_t>());
        } else {
            fail_at(path, "unknown projector kind \"" + kind + "\"");
        }
        inst.projectors.push_back(std::move(p));
    }
    try {
        validate(inst);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("invalid instance: ") + e.what());
    }
    mark_commutation(inst);
    return inst;
}

QlllInstance load_instance(const std::string& path) {
    return instance_from_json(parse_json_text(read_file(path), path));
}

json instance_to_json(const QlllInstance& inst) {
    json j;
    j["n"] = inst.shape.n;
    j["d"] = inst.shape.d;
    j["projectors"] = json::array();
    for (const auto& p : inst.projectors) {
        json pj;
        pj["qudits"] = p.qudits;
        json rows = json::array();
        for (Eigen::Index r = 0; r < p.local.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < p.local.cols(); ++c)
                row.push_back(json::array({p.local(r, c).real(), p.local(r, c).imag()}));
            rows.push_back(row);
        }
        pj["matrix"] = rows;
        j["projectors"].push_back(pj);
    }
    return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string instance_hash(const QlllInstance& inst) { return hex64(fnv1a64(instance_to_json(inst).dump())); }

}  // namespace qlll
