#include "qlll/cli.hpp"

#include "qlll/bench.hpp"
#include "qlll/classical.hpp"
#include "qlll/combinatorics.hpp"
#include "qlll/generators.hpp"
#include "qlll/instance_io.hpp"
#include "qlll/oracles.hpp"
#include "qlll/parallel.hpp"
#include "qlll/quantum_process.hpp"
#include "qlll/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qlll::cli {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string subcommand;
    std::string instance;
    std::optional<std::uint64_t> seed;
    std::size_t trajectories = 0;
    std::uint64_t max_steps = 0;
    std::optional<std::uint64_t> t;
    double epsilon = 0.0;
    double p = 2.0;
    std::optional<double> m_prime;
    std::string output;
    std::string format = "json";
    int jobs = 1;
    std::string save_log;
    double a = 1.0;
    std::string log_path;
    std::optional<std::size_t> entry;
    std::string tree_path;
    std::string seq;
    std::string ids;
    std::string gaps;
    std::string order;
    std::string mode = "exact";
    std::string suite = "all";
    bool classical = false;
    std::uint64_t max_resamples = default_resample_budget;
};

// Errors from the user's input that are not JSON syntax.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<int> parse_ids(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) throw UsageError("not an integer list: '" + text + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::vector<int>> parse_gaps(const std::string& text, std::size_t count) {
    std::vector<std::vector<int>> out;
    std::string cur;
    for (char c : text + "/") {
        if (c == '/') {
            out.push_back(parse_ids(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (text.empty()) out.assign(count, {});
    if (out.size() != count)
        throw UsageError("--gaps needs one '/'-separated set per relevant id (" + std::to_string(count) + ")");
    return out;
}

json tolerances() {
    return {{"psd", tol::psd},
            {"pinv", tol::pinv},
            {"distinct", tol::distinct},
            {"hermitian", tol::hermitian},
            {"projector", tol::projector}};
}

json run_block(const RunConfig& cfg, std::uint64_t seed, const std::string& hash) {
    json r{{"subcommand", cfg.subcommand}, {"seed", seed}, {"tolerances", tolerances()}};
    r["instance_hash"] = hash.empty() ? json(nullptr) : json(hash);
    return r;
}

json certificate_json(const LovaszCertificate& c) {
    return {{"x", c.x}, {"x_prime", c.x_prime}, {"epsilon", c.epsilon}};
}

std::string classical_hash(const ClassicalInstance& inst) { return hex64(fnv1a64(classical_to_json(inst).dump())); }

json psd_json(const PsdCheck& c) {
    return {{"holds", c.holds}, {"lambda_min", c.lambda_min}, {"threshold", c.threshold}};
}

class Context {
public:
    Context(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {
        seed_ = cfg.seed ? *cfg.seed : std::random_device{}();
    }

    std::uint64_t seed() const { return seed_; }

    const QlllInstance& instance() {
        if (!inst_) {
            if (cfg_.instance.empty()) throw UsageError(cfg_.subcommand + ": an instance file is required");
            inst_ = load_instance(cfg_.instance);
            hash_ = instance_hash(*inst_);
        }
        return *inst_;
    }

    void set_hash(std::string h) { hash_ = std::move(h); }

    void emit(json body) {
        if (cfg_.format != "json") throw UsageError("--format csv is only available for cpmap");
        body["run"] = run_block(cfg_, seed_, hash_);
        write(body.dump(2) + "\n");
    }

    void write(const std::string& text) {
        if (cfg_.output.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(cfg_.output);
        if (!f) throw std::runtime_error("cannot write " + cfg_.output);
        f << text;
    }

    void save_log(const ExecutionLog& log) {
        if (cfg_.save_log.empty()) return;
        std::ofstream f(cfg_.save_log);
        if (!f) throw std::runtime_error("cannot write " + cfg_.save_log);
        f << log_to_json(log).dump(2) << "\n";
    }

private:
    const RunConfig& cfg_;
    std::ostream& out_;
    std::uint64_t seed_ = 0;
    std::optional<QlllInstance> inst_;
    std::string hash_;
};

int cmd_check(const RunConfig& cfg, Context& ctx) {
    std::vector<double> probs;
    IntersectionGraph g;
    if (cfg.classical) {
        auto inst = load_classical(cfg.instance);
        ctx.set_hash(classical_hash(inst));
        probs = event_probabilities(inst);
        g = intersection_graph(inst);
    } else {
        const auto& inst = ctx.instance();
        probs = relative_dimensions(inst);
        g = intersection_graph(inst);
    }
    auto cert = find_certificate(probs, g, cfg.epsilon);
    json body{{"feasible", cert.has_value()}, {"epsilon", cfg.epsilon}, {"probabilities", probs},
              {"neighbours", g.adjacency}};
    if (cert) {
        body["certificate"] = certificate_json(*cert);
        body["slack"] = check_lovasz(probs, g, *cert).slack;
        body["expected_violations_bound"] = expected_violations_bound(*cert);
    } else {
        body["certificate"] = nullptr;
    }
    ctx.emit(body);
    return cert ? ok : failed;
}

int cmd_gap(Context& ctx) {
    const auto& inst = ctx.instance();
    auto rep = spectral_report(inst);
    ctx.emit({{"eigenvalues", rep.eigenvalues},
              {"delta", rep.delta},
              {"ground_dim", rep.ground_dim},
              {"frustration_free", rep.frustration_free},
              {"commuting", inst.commutation == Commutation::commuting}});
    return ok;
}

int cmd_solve_classical(const RunConfig& cfg, Context& ctx) {
    auto inst = load_classical(cfg.instance);
    ctx.set_hash(classical_hash(inst));
    const std::size_t runs = std::max<std::size_t>(1, cfg.trajectories);
    std::vector<ClassicalResult> res(runs);
    parallel_for(runs, cfg.jobs, [&](std::size_t s) { res[s] = solve_classical(inst, ctx.seed(), cfg.max_resamples, s); });
    MeanEstimate est;
    bool all_ok = true;
    bool all_satisfy = true;
    for (const auto& r : res) {
        est.add(static_cast<double>(r.resamples));
        all_ok = all_ok && r.success;
        if (r.success)
            for (const auto& e : inst.events)
                if (event_violated(e, r.assignment, inst.domains)) all_satisfy = false;
    }
    json body{{"trajectories", runs},
              {"seed", ctx.seed()},
              {"success", all_ok},
              {"assignments_satisfy", all_satisfy},
              {"mean_resamples", est.mean()},
              {"std_error", est.std_error()},
              {"assignment", res.front().assignment},
              {"log", res.front().log.labels()}};
    auto cert = find_certificate(event_probabilities(inst), intersection_graph(inst), 0.0);
    body["bound"] = cert ? json(expected_resamples_bound(inst, *cert)) : json(nullptr);
    ctx.save_log(res.front().log);
    ctx.emit(body);
    return all_ok && all_satisfy ? ok : failed;
}

int cmd_solve_quantum(const RunConfig& cfg, Context& ctx) {
    const auto& inst = ctx.instance();
    const std::size_t runs = std::max<std::size_t>(1, cfg.trajectories);
    StateSimulator sim(inst);
    std::vector<Trajectory> trs(runs);
    parallel_for(runs, cfg.jobs, [&](std::size_t s) {
        SolverOptions opt;
        opt.max_steps = cfg.max_steps;
        trs[s] = run_quantum_solver(sim, ctx.seed(), opt, s);
    });
    MeanEstimate total;
    std::vector<double> per(inst.m(), 0.0);
    for (const auto& tr : trs) {
        total.add(static_cast<double>(tr.log.size()));
        for (const auto& e : tr.log.entries) per[e.label] += 1.0;
    }
    for (double& v : per) v /= static_cast<double>(runs);
    json body{{"mean_violations", total.mean()},
              {"std_error", total.std_error()},
              {"per_projector", per},
              {"seed", ctx.seed()},
              {"trajectories", runs}};
    auto cert = find_certificate(inst, 0.0);
    body["bound"] = cert ? json(expected_violations_bound(*cert)) : json(nullptr);
    if (runs == 1) {
        body["log"] = log_to_json(trs.front().log);
        double energy = 0.0;
        for (int i = 0; i < inst.m(); ++i) energy += sim.expectation(trs.front().state, i);
        body["final_energy"] = energy;
    }
    ctx.save_log(trs.front().log);
    ctx.emit(body);
    return ok;
}

double expected_bound_or_throw(const QlllInstance& inst, double epsilon) {
    auto cert = find_certificate(inst, epsilon);
    if (!cert) throw UsageError("instance admits no Lovász certificate; pass the horizon explicitly");
    return expected_violations_bound(*cert);
}

int cmd_converge(const RunConfig& cfg, Context& ctx) {
    const auto& inst = ctx.instance();
    const double eps = cfg.epsilon > 0.0 ? cfg.epsilon : 0.1;
    std::uint64_t t = 0;
    if (cfg.t) {
        t = *cfg.t;
    } else {
        t = static_cast<std::uint64_t>(std::ceil(inst.m() * expected_bound_or_throw(inst, 0.0) / eps));
    }
    const std::size_t samples = cfg.trajectories ? cfg.trajectories : 1000;
    auto r = run_converger(inst, ctx.seed(), t, samples, cfg.jobs);
    ctx.emit({{"t", r.t},
              {"epsilon", eps},
              {"samples", r.samples},
              {"violation_prob", r.mean_violation_prob},
              {"violation_std_error", r.violation_std_error},
              {"ground_overlap", r.ground_overlap},
              {"ground_std_error", r.ground_std_error}});
    return ok;
}

int cmd_exact_solve(const RunConfig& cfg, Context& ctx) {
    const auto& inst = ctx.instance();
    ExactSolverConfig ec;
    ec.p = cfg.p;
    ec.m_prime = cfg.m_prime ? *cfg.m_prime : expected_bound_or_throw(inst, 0.0);
    ec.fixed_order = parse_ids(cfg.order);
    const std::size_t runs = std::max<std::size_t>(1, cfg.trajectories);
    std::vector<ExactSolverResult> res(runs);
    parallel_for(runs, cfg.jobs, [&](std::size_t s) { res[s] = run_exact_solver(inst, ec, ctx.seed(), s); });
    MeanEstimate succ;
    double worst = 1.0;
    for (const auto& r : res) {
        succ.add(r.success ? 1.0 : 0.0);
        if (r.success) worst = std::min(worst, r.ground_overlap);
    }
    ctx.save_log(res.front().trajectory.log);
    ctx.emit({{"p", ec.p},
              {"m_prime", ec.m_prime},
              {"iteration_cap", ec.iteration_cap(inst.m())},
              {"trajectories", runs},
              {"success_frequency", succ.mean()},
              {"success_std_error", succ.std_error()},
              {"guarantee", 1.0 - 1.0 / ec.p},
              {"min_success_ground_overlap", succ.mean() > 0.0 ? json(worst) : json(nullptr)}});
    return succ.mean() > 0.0 ? ok : failed;
}

int cmd_oracle(const RunConfig& cfg, Context& ctx) {
    const auto& inst = ctx.instance();
    const std::string& s = cfg.suite;
    const bool all = s == "all";
    bool pass = true;
    json body = json::object();
    const std::vector<std::uint64_t> seeds{ctx.seed()};
    if (all || s == "halting") {
        json h = json::array();
        for (int a = 0; a < inst.m(); ++a) {
            auto g = first_violation_gap_bound(inst, a);
            pass = pass && g.plain.holds && (!g.gap_applicable || g.gap.holds);
            h.push_back({{"projector", a},
                         {"probability", g.probability},
                         {"plain", psd_json(g.plain)},
                         {"gap", psd_json(g.gap)},
                         {"gap_applicable", g.gap_applicable},
                         {"gap_note", g.gap_note},
                         {"delta", g.delta}});
        }
        body["halting"] = h;
    }
    if (s == "sequence" || (all && !cfg.seq.empty())) {
        auto ids = parse_ids(cfg.seq);
        auto x = sequence_operator(inst, ids);
        json seq{{"ids", ids}, {"probability", x.probability}};
        if (inst.commutation == Commutation::commuting) {
            auto b = sequence_bound(inst, ids);
            pass = pass && b.holds;
            seq["dag_probability"] = b.dag_probability;
            seq["product"] = b.product;
            seq["slack"] = b.slack;
            seq["holds"] = b.holds;
        }
        body["sequence"] = seq;
    }
    if (all || s == "cp") {
        auto rep = verify_cp_identities(inst, ctx.seed());
        pass = pass && rep.pass();
        body["cp_identities"] = suite_to_json(rep, seeds);
    }
    if (all || s == "shortclaim") {
        json list = json::array();
        std::vector<std::vector<int>> products;
        if (!cfg.ids.empty())
            products.push_back(parse_ids(cfg.ids));
        else
            for (int a = 0; a < inst.m(); ++a) products.push_back({a});
        for (const auto& p : products) {
            auto rep = shortclaim_suite(inst, p);
            pass = pass && rep.pass();
            auto j = suite_to_json(rep, seeds);
            j["product"] = p;
            list.push_back(j);
        }
        body["shortclaim"] = list;
    }
    if (s == "partial") {
        auto rel = parse_ids(cfg.seq);
        auto r = partial_dag_channel_bound(inst, rel, parse_gaps(cfg.gaps, rel.size()));
        pass = pass && r.holds;
        body["partial"] = {{"relevant", rel},
                           {"probability", r.probability},
                           {"dag_probability", r.dag_probability},
                           {"product", r.product},
                           {"slack", r.slack},
                           {"holds", r.holds}};
    }
    if (s == "completeness") {
        const int t = cfg.t ? static_cast<int>(*cfg.t) : 2;
        const double total = outcome_completeness(inst, t);
        const bool holds = std::abs(total - 1.0) < 1e-8;
        pass = pass && holds;
        body["completeness"] = {{"t", t}, {"total", total}, {"holds", holds}};
    }
    if (body.empty()) throw UsageError("unknown oracle suite '" + s + "'");
    body["pass"] = pass;
    ctx.emit(body);
    return pass ? ok : failed;
}

int cmd_witness(const RunConfig& cfg, Context& ctx) {
    const auto& inst = ctx.instance();
    if (cfg.log_path.empty()) throw UsageError("witness: --log is required");
    auto log = log_from_json(parse_json_text(read_file(cfg.log_path), cfg.log_path));
    const auto labels = log.labels();
    for (int l : labels)
        if (l < 0 || l >= inst.m()) throw UsageError("log label " + std::to_string(l) + " is not a projector id");
    const auto g = intersection_graph(inst);
    auto cert = find_certificate(inst, cfg.epsilon);
    json trees = json::array();
    std::vector<std::size_t> entries;
    if (cfg.entry) {
        if (*cfg.entry >= labels.size()) throw UsageError("--entry is past the end of the log");
        entries.push_back(*cfg.entry);
    } else {
        for (std::size_t k = 0; k < labels.size(); ++k) entries.push_back(k);
    }
    for (std::size_t k : entries) {
        auto tree = build_witness_tree(labels, k, g);
        json t{{"entry", k},
               {"tree", tree_to_json(tree)},
               {"canonical", tree.canonical()},
               {"proper", tree.proper()},
               {"levels_independent", levels_independent(tree, g)}};
        t["galton_watson"] = cert ? json(galton_watson_probability(tree, *cert, g)) : json(nullptr);
        trees.push_back(t);
    }
    json body{{"log_length", labels.size()}, {"trees", trees}};
    body["certificate"] = cert ? certificate_json(*cert) : json(nullptr);
    if (!labels.empty()) {
        const std::size_t end = cfg.entry ? *cfg.entry + 1 : labels.size();
        std::vector<int> prefix(labels.begin(), labels.begin() + static_cast<long>(end));
        auto full = build_resample_dag(prefix, g);
        json fj = dag_to_json(full);
        fj["canonical"] = full.canonical();
        fj["probability"] = full.size() <= dag_vertex_cap ? json(dag_probability(full, prefix).value) : json(nullptr);
        body["dag"] = fj;
        auto part = build_partial_resample_dag(prefix, g);
        json pj = dag_to_json(part.dag);
        pj["canonical"] = part.dag.canonical();
        pj["relevant_subsequence"] = part.relevant_subsequence;
        pj["relevant_positions"] = part.relevant_positions;
        pj["probability"] = part.dag.size() <= dag_vertex_cap
                                ? json(dag_probability(part.dag, part.relevant_subsequence).value)
                                : json(nullptr);
        body["partial_dag"] = pj;
    }
    ctx.emit(body);
    return ok;
}

int cmd_counterexample(const RunConfig& cfg, Context& ctx) {
    auto an = counterexample_analytic(cfg.a);
    ctx.set_hash(instance_hash(counterexample_instance(cfg.a)));
    json body{{"a", cfg.a},
              {"pr_tau", an.pr_tau},
              {"bound", an.bound},
              {"threshold", an.threshold},
              {"limit", an.limit},
              {"violates", an.violates},
              {"exact", counterexample_exact(cfg.a)}};
    if (cfg.trajectories > 0) {
        auto au = counterexample_audit(cfg.a, cfg.trajectories, ctx.seed(), cfg.jobs);
        body["monte_carlo"] = {{"frequency", au.monte_carlo},
                               {"sigma", au.mc_sigma},
                               {"trajectories", au.trajectories},
                               {"matches_exact", au.mc_matches_exact},
                               {"matches_analytic", au.mc_matches_analytic}};
    }
    ctx.emit(body);
    return ok;
}

json conjecture_json(const ConjectureReport& r) {
    return {{"structure", r.structure}, {"sense", r.sense},         {"size", r.size},
            {"probability", r.probability}, {"std_error", r.std_error}, {"samples", r.samples},
            {"product", r.product},     {"ratio", r.ratio},         {"delta", r.delta},
            {"gap_bound", r.gap_bound}, {"gap_ratio", r.gap_ratio}};
}

int cmd_conjecture(const RunConfig& cfg, Context& ctx) {
    const auto& inst = ctx.instance();
    ConjectureMode mode;
    if (cfg.mode == "exact")
        mode = ConjectureMode::exact;
    else if (cfg.mode == "mc" || cfg.mode == "monte-carlo")
        mode = ConjectureMode::monte_carlo;
    else
        throw UsageError("--mode must be exact or mc");
    const std::size_t budget = cfg.trajectories ? cfg.trajectories : 10000;
    ConjectureReport r;
    if (!cfg.tree_path.empty()) {
        auto tree = tree_from_json(parse_json_text(read_file(cfg.tree_path), cfg.tree_path));
        r = conjecture_test(inst, tree, mode, budget, ctx.seed(), cfg.jobs, cfg.max_steps);
    } else if (!cfg.seq.empty()) {
        auto dag = build_resample_dag(parse_ids(cfg.seq), intersection_graph(inst));
        r = conjecture_test(inst, dag, mode, budget, ctx.seed(), cfg.jobs, cfg.max_steps);
    } else {
        throw UsageError("conjecture: pass --tree FILE or --seq IDS");
    }
    ctx.emit(conjecture_json(r));
    return ok;
}

int cmd_cpmap(const RunConfig& cfg, Context& ctx) {
    const auto& inst = ctx.instance();
    const std::size_t D = inst.shape.dim();
    const std::uint64_t t = cfg.t ? *cfg.t : 20;
    auto series = cp_map_iterate(inst, identity(D) / static_cast<double>(D), t);
    if (cfg.format == "csv") {
        std::ostringstream os;
        os.precision(17);
        os << "t,ground_overlap,worst_violation_prob\n";
        for (const auto& r : series.records) os << r.t << ',' << r.ground_overlap << ',' << r.worst_violation() << '\n';
        ctx.write(os.str());
    } else {
        json recs = json::array();
        for (const auto& r : series.records)
            recs.push_back({{"t", r.t}, {"ground_overlap", r.ground_overlap}, {"violation", r.violation}});
        ctx.emit({{"records", recs}, {"monotone", series.monotone}, {"worst_drop", series.worst_drop}});
    }
    return series.monotone ? ok : failed;
}

int run(const RunConfig& cfg, std::ostream& out) {
    if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be json or csv");
    Context ctx(cfg, out);
    const std::string& s = cfg.subcommand;
    if (s == "check") return cmd_check(cfg, ctx);
    if (s == "gap") return cmd_gap(ctx);
    if (s == "solve-classical") return cmd_solve_classical(cfg, ctx);
    if (s == "solve-quantum") return cmd_solve_quantum(cfg, ctx);
    if (s == "converge") return cmd_converge(cfg, ctx);
    if (s == "exact-solve") return cmd_exact_solve(cfg, ctx);
    if (s == "oracle") return cmd_oracle(cfg, ctx);
    if (s == "witness") return cmd_witness(cfg, ctx);
    if (s == "counterexample") return cmd_counterexample(cfg, ctx);
    if (s == "conjecture") return cmd_conjecture(cfg, ctx);
    if (s == "cpmap") return cmd_cpmap(cfg, ctx);
    throw UsageError("unknown subcommand " + s);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constructive quantum Lovász local lemma workbench", "qlll"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::uint64_t seed = 0;
    std::uint64_t t = 0;
    double m_prime = 0.0;
    std::size_t entry = 0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "RNG seed (random and recorded when omitted)");
        sub->add_option("--jobs", cfg.jobs, "worker threads for independent runs")->check(CLI::PositiveNumber);
        sub->add_option("--output", cfg.output, "write results here instead of stdout");
        sub->add_option("--format", cfg.format, "json or csv");
    };
    auto with_instance = [&](CLI::App* sub) { sub->add_option("instance", cfg.instance, "instance file")->required(); };

    auto* check = app.add_subcommand("check", "Lovász feasibility and certificate");
    with_instance(check);
    check->add_option("--epsilon", cfg.epsilon, "strengthening parameter");
    check->add_flag("--classical", cfg.classical, "read a CNF or classical JSON instance");

    auto* gap = app.add_subcommand("gap", "spectral report");
    with_instance(gap);

    auto* sc = app.add_subcommand("solve-classical", "resampling solver on a CNF or classical instance");
    with_instance(sc);
    sc->add_option("--trajectories", cfg.trajectories, "independent runs");
    sc->add_option("--max-resamples", cfg.max_resamples, "resample budget per run");
    sc->add_option("--save-log", cfg.save_log, "write the first run's log");

    auto* sq = app.add_subcommand("solve-quantum", "randomized measurement solver");
    with_instance(sq);
    sq->add_option("--trajectories", cfg.trajectories, "independent runs");
    sq->add_option("--max-steps", cfg.max_steps, "steps per run (default 1000 m)");
    sq->add_option("--save-log", cfg.save_log, "write the first run's log");

    auto* cv = app.add_subcommand("converge", "converger with a random stopping time");
    with_instance(cv);
    cv->add_option("--t", t, "maximum time (default m E / epsilon)");
    cv->add_option("--epsilon", cfg.epsilon, "target accuracy (default 0.1)");
    cv->add_option("--trajectories", cfg.trajectories, "samples (default 1000)");

    auto* es = app.add_subcommand("exact-solve", "fixed-order commuting solver");
    with_instance(es);
    es->add_option("--p", cfg.p, "confidence parameter p > 1");
    es->add_option("--m-prime", m_prime, "expected-violation bound (default from the certificate)");
    es->add_option("--order", cfg.order, "fixed measurement order, comma separated");
    es->add_option("--trajectories", cfg.trajectories, "independent runs");
    es->add_option("--save-log", cfg.save_log, "write the first run's log");

    auto* orc = app.add_subcommand("oracle", "exact outcome operators and inequality suites");
    with_instance(orc);
    orc->add_option("--suite", cfg.suite, "all|halting|sequence|cp|shortclaim|partial|completeness");
    orc->add_option("--seq", cfg.seq, "projector ids, comma separated");
    orc->add_option("--ids", cfg.ids, "commuting product for the shortclaim suite");
    orc->add_option("--gaps", cfg.gaps, "gap sets for the partial suite, '/' separated");
    orc->add_option("--t", t, "sequence length for the completeness suite");

    auto* wt = app.add_subcommand("witness", "witness trees and resample DAGs of a saved log");
    with_instance(wt);
    wt->add_option("--log", cfg.log_path, "log file written by --save-log")->required();
    wt->add_option("--entry", entry, "only this log entry");
    wt->add_option("--epsilon", cfg.epsilon, "certificate strengthening for Galton-Watson values");

    auto* ce = app.add_subcommand("counterexample", "two-qubit counter-example family");
    ce->add_option("--a", cfg.a, "parameter in (0,1]")->required();
    ce->add_option("--trajectories", cfg.trajectories, "Monte Carlo runs (0 skips)");

    auto* cj = app.add_subcommand("conjecture", "occurrence probability of a tree or DAG");
    with_instance(cj);
    cj->add_option("--tree", cfg.tree_path, "tree JSON");
    cj->add_option("--seq", cfg.seq, "sequence whose full resample DAG is tested");
    cj->add_option("--mode", cfg.mode, "exact or mc");
    cj->add_option("--trajectories", cfg.trajectories, "Monte Carlo budget");
    cj->add_option("--max-steps", cfg.max_steps, "Monte Carlo horizon");

    auto* cp = app.add_subcommand("cpmap", "exact iteration of the dissipative map from I/D");
    with_instance(cp);
    cp->add_option("--t", t, "iterations (default 20)");

    for (auto* sub : app.get_subcommands({})) common(sub);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "qlll: " << e.what() << "\n";
        return error;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->get_option_no_throw("--t") && sub->count("--t")) cfg.t = t;
    if (sub->get_option_no_throw("--m-prime") && sub->count("--m-prime")) cfg.m_prime = m_prime;
    if (sub->get_option_no_throw("--entry") && sub->count("--entry")) cfg.entry = entry;
    try {
        return run(cfg, out);
    } catch (const ParseError& e) {
        err << "qlll: " << e.what() << "\n";
    } catch (const nlohmann::json::exception& e) {
        err << "qlll: malformed input: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "qlll: " << e.what() << "\n";
    }
    return error;
}

}  // namespace qlll::cli
