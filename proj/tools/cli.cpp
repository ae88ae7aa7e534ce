#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "distopt/brs.hpp"
#include "distopt/dfd.hpp"
#include "distopt/oracle.hpp"
#include "distopt/selection.hpp"
#include "distopt/udg.hpp"
#include "json.hpp"

namespace distopt::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Options {
    std::string points;
    std::string a;
    std::string b;
    std::uint64_t k = 0;
    double lambda = 0.0;
    bool weighted = false;
    double L = 0.0;
    std::uint64_t seed = 0;
    bool json_stats = false;
    bool no_timing = false;
    PointId s = 0;
    PointId t = 1;
    double delta = 0.0;
    double lo = 0.0;
    double hi = kInfSq;
    std::string strategy = "grid";
    std::vector<std::size_t> ns;
    int seeds = 1;
    bool complete = false;
    bool verify = false;
    std::string target;
};

CountStrategy parse_strategy(const std::string& s) {
    if (s == "brute") return CountStrategy::Brute;
    if (s == "grid") return CountStrategy::Grid;
    if (s == "brs") return CountStrategy::Brs;
    throw InvalidInput("unknown counting strategy '" + s + "'");
}

double millis_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

json time_field(const Options& o, double ms) { return o.no_timing ? json(nullptr) : json(ms); }

json result_json(const Options& o, SqDist v, const RunStats& st, double ms) {
    json stats;
    stats["stages"] = st.stages;
    stats["decision_calls"] = st.decision_calls;
    stats["gamma_edges"] = st.gamma_edges;
    stats["pi_pairs"] = st.pi_pairs;
    stats["shrink_rounds"] = st.shrink_rounds ? json(*st.shrink_rounds) : json(nullptr);
    stats["time_ms"] = time_field(o, ms);
    if (o.json_stats) {
        stats["fallback"] = st.fallback;
        stats["low_confidence"] = st.low_confidence;
        json trace = json::array();
        for (const StageState& s : st.trace) {
            trace.push_back({{"stage", s.stage_index},
                             {"lo_sq", s.interval.lo},
                             {"hi_sq", s.interval.bounded() ? json(s.interval.hi) : json("inf")},
                             {"gamma_edges", s.gamma_edges},
                             {"pi_pairs", s.pi_pairs},
                             {"candidates", s.candidates},
                             {"decision_calls", s.decision_calls}});
        }
        stats["trace"] = std::move(trace);
    }
    json j;
    j["value"] = std::sqrt(v);
    j["value_sq"] = v;
    j["stats"] = std::move(stats);
    return j;
}

PointSet load_set(const std::string& path) { return PointSet(read_points(path)); }
PointSequence load_sequence(const std::string& path) { return PointSequence(read_points(path)); }

SqInterval interval_of(const Options& o) {
    if (!(o.lo >= 0.0) || !(o.hi >= o.lo)) throw InvalidInput("need 0 <= lo <= hi");
    return {o.lo * o.lo, std::isinf(o.hi) ? kInfSq : o.hi * o.hi};
}

RspInstance rsp_instance(const Options& o, std::ostream& err) {
    if (!o.weighted && o.lambda != std::floor(o.lambda)) {
        err << "warning: unweighted hop budget " << o.lambda << " is rounded down to "
            << std::floor(o.lambda) << "\n";
    }
    RspInstance inst{load_set(o.points), o.s, o.t, o.lambda, o.weighted};
    inst.validate();
    return inst;
}

PointSet random_set(std::size_t n, Rng& rng) {
    std::vector<Point> v(n);
    for (auto& p : v) p = {rng.unit(), rng.unit()};
    return PointSet(std::move(v));
}

int cmd_select(const Options& o, std::ostream& out) {
    const PointSet p = load_set(o.points);
    SelectionConfig cfg;
    cfg.strategy = parse_strategy(o.strategy);
    Rng rng(o.seed);
    RunStats st;
    const auto t0 = Clock::now();
    const SqDist v = select_distance(p, o.k, rng, cfg, &st);
    out << result_json(o, v, st, millis_since(t0)).dump(2) << "\n";
    return 0;
}

int cmd_select_bipartite(const Options& o, std::ostream& out) {
    const PointSet a = load_set(o.a);
    const PointSet b = load_set(o.b);
    SelectionConfig cfg;
    cfg.strategy = parse_strategy(o.strategy);
    Rng rng(o.seed);
    RunStats st;
    const auto t0 = Clock::now();
    const SqDist v = select_distance_bipartite(a, b, o.k, rng, cfg, &st);
    out << result_json(o, v, st, millis_since(t0)).dump(2) << "\n";
    return 0;
}

int cmd_count(const Options& o, std::ostream& out) {
    if (!(o.delta >= 0.0)) throw InvalidInput("--delta must be non-negative");
    const CountStrategy strategy = parse_strategy(o.strategy);
    const SqDist sq = o.delta * o.delta;
    const auto t0 = Clock::now();
    std::uint64_t count = 0;
    if (!o.points.empty()) {
        count = count_pairs_at_most(load_set(o.points), sq, strategy);
    } else {
        if (o.a.empty() || o.b.empty()) throw InvalidInput("count needs --points or both --a and --b");
        count = count_cross_pairs_at_most(load_set(o.a), load_set(o.b), sq, strategy);
    }
    json j;
    j["count"] = count;
    j["delta"] = o.delta;
    j["delta_sq"] = sq;
    j["strategy"] = o.strategy;
    j["stats"] = {{"time_ms", time_field(o, millis_since(t0))}};
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_brs(const Options& o, std::ostream& out, std::ostream& err) {
    const SqInterval iv = interval_of(o);
    const bool self = !o.points.empty();
    if (!self && (o.a.empty() || o.b.empty())) throw InvalidInput("brs needs --points or both --a and --b");
    const PointSet a = load_set(self ? o.points : o.a);
    const PointSet b = self ? a : load_set(o.b);
    Rng rng(o.seed);
    const auto t0 = Clock::now();
    BrsOutput res;
    std::string mode;
    if (o.complete) {
        res.gamma = complete_brs(a, b, iv, rng);
        res.refresh_stats();
        mode = "complete";
    } else if (o.L > 0.0) {
        res = brs_for_L(a, b, iv, o.L, rng);
        mode = "for_L";
    } else if (self) {
        res = partial_brs_selfjoin(a, iv, rng);
        mode = "selfjoin";
    } else {
        res = partial_brs_bipartite(a, b, iv, rng);
        mode = "bipartite";
    }
    const double ms = millis_since(t0);
    json j;
    j["mode"] = mode;
    j["gamma_count"] = res.stats.gamma_count;
    j["pi_count"] = res.stats.pi_count;
    j["gamma_edges"] = res.stats.gamma_edges;
    j["sum_sides"] = res.stats.gamma_a_sum + res.stats.gamma_b_sum;
    j["pi_pairs"] = res.stats.pi_pairs;
    int code = 0;
    if (o.verify) {
        const auto rep = oracle::brute_brs_check(a, b, iv, res);
        j["verified"] = rep.ok;
        j["in_range"] = rep.in_range;
        if (!rep.ok) {
            err << "cover check failed: " << rep.message << "\n";
            code = 1;
        }
    }
    j["stats"] = {{"time_ms", time_field(o, ms)}};
    out << j.dump(2) << "\n";
    return code;
}

DfdInstance load_dfd(const Options& o) { return {load_sequence(o.a), load_sequence(o.b)}; }

int cmd_dfd(const Options& o, bool two_sided, std::ostream& out) {
    const DfdInstance inst = load_dfd(o);
    Rng rng(o.seed);
    RunStats st;
    const auto t0 = Clock::now();
    const SqDist v = two_sided ? dfd2(inst, rng, {}, &st) : dfd1(inst, rng, {}, &st);
    out << result_json(o, v, st, millis_since(t0)).dump(2) << "\n";
    return 0;
}

int cmd_rsp(const Options& o, std::ostream& out, std::ostream& err) {
    const RspInstance inst = rsp_instance(o, err);
    Rng rng(o.seed);
    RunStats st;
    const auto t0 = Clock::now();
    const SqDist v = rsp(inst, rng, {}, &st);
    out << result_json(o, v, st, millis_since(t0)).dump(2) << "\n";
    return 0;
}

int cmd_bench(const Options& o, std::ostream& out) {
    if (o.ns.empty()) throw InvalidInput("bench needs --n");
    if (o.seeds < 1) throw InvalidInput("--seeds must be positive");
    auto ms_field = [&](double ms) {
        if (o.no_timing) return std::string();
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(3);
        s << ms;
        return s.str();
    };
    if (o.target == "brs") {
        out << "n,gamma_edges,sum_sides,pi_pairs,millis\n";
        for (std::size_t n : o.ns) {
            for (int s = 0; s < o.seeds; ++s) {
                Rng rng(o.seed + static_cast<std::uint64_t>(s));
                const PointSet a = random_set(n, rng);
                const PointSet b = random_set(n, rng);
                // Fixed density: about 16/pi partners per point at the outer radius.
                const double hi = 16.0 / (std::numbers::pi * static_cast<double>(n));
                const auto t0 = Clock::now();
                const CliqueCover cover = complete_brs(a, b, {hi / 4.0, hi}, rng);
                const double ms = millis_since(t0);
                std::uint64_t sides = 0;
                for (const Biclique& bc : cover.bicliques) sides += bc.a_side.size() + bc.b_side.size();
                out << n << "," << count_edges(cover) << "," << sides << ",0," << ms_field(ms) << "\n";
            }
        }
        return 0;
    }
    out << "n,k,stages,decision_calls,gamma_edges,pi_pairs,millis\n";
    for (std::size_t n : o.ns) {
        if (n < 2) throw InvalidInput("bench select needs n >= 2");
        for (int s = 0; s < o.seeds; ++s) {
            Rng rng(o.seed + static_cast<std::uint64_t>(s));
            const PointSet p = random_set(n, rng);
            const std::uint64_t k = o.k > 0 ? o.k : (pair_count(n) + 1) / 2;
            RunStats st;
            const auto t0 = Clock::now();
            select_distance(p, k, rng, {}, &st);
            out << n << "," << k << "," << st.stages << "," << st.decision_calls << "," << st.gamma_edges
                << "," << st.pi_pairs << "," << ms_field(millis_since(t0)) << "\n";
        }
    }
    return 0;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
    SqDist v = 0.0;
    const auto t0 = Clock::now();
    if (o.target == "kth") {
        v = oracle::brute_kth(load_set(o.points), o.k);
    } else if (o.target == "kth-bipartite") {
        v = oracle::brute_kth_bipartite(load_set(o.a), load_set(o.b), o.k);
    } else if (o.target == "dfd2") {
        v = oracle::brute_dfd2_optimum(load_dfd(o));
    } else if (o.target == "dfd1") {
        v = oracle::brute_dfd1_optimum(load_dfd(o));
    } else {
        v = oracle::brute_rsp(rsp_instance(o, err));
    }
    json j;
    j["value"] = std::sqrt(v);
    j["value_sq"] = v;
    j["stats"] = {{"time_ms", time_field(o, millis_since(t0))}};
    out << j.dump(2) << "\n";
    return 0;
}

}  // namespace

std::vector<Point> read_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open point file '" + path + "'");
    std::vector<Point> pts;
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        Point p;
        std::string extra;
        if (!(ls >> p.x >> p.y) || (ls >> extra)) {
            throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected two numbers");
        }
        pts.push_back(p);
    }
    return pts;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Interpoint distance optimization"};
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
        sub->add_flag("--no-timing", o.no_timing, "Report time_ms as null");
    };
    auto stats_flag = [&](CLI::App* sub) {
        sub->add_flag("--json-stats", o.json_stats, "Include the stage trace in the stats");
    };
    auto strategy = [&](CLI::App* sub) {
        sub->add_option("--strategy", o.strategy, "Counting strategy")
            ->check(CLI::IsMember({"brute", "grid", "brs"}))
            ->capture_default_str();
    };

    auto* select = app.add_subcommand("select", "k-th smallest pairwise distance");
    select->add_option("--points", o.points, "Point file")->required();
    select->add_option("--k", o.k, "Rank, 1-based")->required();
    strategy(select);
    common(select);
    stats_flag(select);

    auto* select_bi = app.add_subcommand("select-bipartite", "k-th smallest distance over A x B");
    select_bi->add_option("--a", o.a, "Point file for A")->required();
    select_bi->add_option("--b", o.b, "Point file for B")->required();
    select_bi->add_option("--k", o.k, "Rank, 1-based")->required();
    strategy(select_bi);
    common(select_bi);
    stats_flag(select_bi);

    auto* count = app.add_subcommand("count", "Number of pairs within a distance");
    count->add_option("--points", o.points, "Point file");
    count->add_option("--a", o.a, "Point file for A");
    count->add_option("--b", o.b, "Point file for B");
    count->add_option("--delta", o.delta, "Distance threshold")->required();
    strategy(count);
    common(count);

    auto* brs = app.add_subcommand("brs", "Batched range searching for lo < |ab| <= hi");
    brs->add_option("--points", o.points, "Point file (self-join)");
    brs->add_option("--a", o.a, "Point file for A");
    brs->add_option("--b", o.b, "Point file for B");
    brs->add_option("--lo", o.lo, "Lower distance (exclusive)")->capture_default_str();
    brs->add_option("--hi", o.hi, "Upper distance (inclusive)");
    brs->add_option("--L", o.L, "Target uncertain-pair budget");
    brs->add_flag("--complete", o.complete, "Full cover without uncertain pairs");
    brs->add_flag("--verify", o.verify, "Check the cover against all pairs");
    common(brs);

    auto* d2 = app.add_subcommand("dfd2", "Two-sided discrete Frechet distance with shortcuts");
    auto* d1 = app.add_subcommand("dfd1", "One-sided discrete Frechet distance with shortcuts");
    for (auto* sub : {d2, d1}) {
        sub->add_option("--a", o.a, "Sequence file for A")->required();
        sub->add_option("--b", o.b, "Sequence file for B")->required();
        common(sub);
        stats_flag(sub);
    }

    auto add_rsp_options = [&](CLI::App* sub) {
        sub->add_option("--s", o.s, "Source id")->capture_default_str();
        sub->add_option("--t", o.t, "Target id")->capture_default_str();
        sub->add_option("--lambda", o.lambda, "Hop or length budget");
        sub->add_flag("--weighted", o.weighted, "Budget bounds Euclidean path length");
    };
    auto* rsp_cmd = app.add_subcommand("rsp", "Reverse shortest path in unit-disk graphs");
    rsp_cmd->add_option("--points", o.points, "Point file")->required();
    add_rsp_options(rsp_cmd);
    rsp_cmd->get_option("--lambda")->required();
    common(rsp_cmd);
    stats_flag(rsp_cmd);

    auto* bench = app.add_subcommand("bench", "Scaling measurements as CSV");
    bench->add_option("target", o.target, "brs or select")->required()->check(CLI::IsMember({"brs", "select"}));
    bench->add_option("--n", o.ns, "Sizes")->delimiter(',')->required();
    bench->add_option("--seeds", o.seeds, "Seeds per size")->capture_default_str();
    bench->add_option("--k", o.k, "Rank for select (default: median)");
    common(bench);

    auto* orc = app.add_subcommand("oracle", "Brute-force reference answers");
    orc->add_option("problem", o.target, "kth, kth-bipartite, dfd2, dfd1 or rsp")
        ->required()
        ->check(CLI::IsMember({"kth", "kth-bipartite", "dfd2", "dfd1", "rsp"}));
    orc->add_option("--points", o.points, "Point file");
    orc->add_option("--a", o.a, "Point file for A");
    orc->add_option("--b", o.b, "Point file for B");
    orc->add_option("--k", o.k, "Rank, 1-based");
    add_rsp_options(orc);
    common(orc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (select->parsed()) return cmd_select(o, out);
        if (select_bi->parsed()) return cmd_select_bipartite(o, out);
        if (count->parsed()) return cmd_count(o, out);
        if (brs->parsed()) return cmd_brs(o, out, err);
        if (d2->parsed()) return cmd_dfd(o, true, out);
        if (d1->parsed()) return cmd_dfd(o, false, out);
        if (rsp_cmd->parsed()) return cmd_rsp(o, out, err);
        if (bench->parsed()) return cmd_bench(o, out);
        if (orc->parsed()) return cmd_oracle(o, out, err);
    } catch (const ConstructionFailure& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"distopt"};
    for (const auto& s : args) argv.push_back(s.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace distopt::cli
