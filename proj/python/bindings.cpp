#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "distopt/brs.hpp"
#include "distopt/dfd.hpp"
#include "distopt/oracle.hpp"
#include "distopt/selection.hpp"
#include "distopt/udg.hpp"

namespace py = pybind11;
using namespace distopt;

namespace {

using Coords = std::vector<std::pair<double, double>>;

std::vector<Point> to_points(const Coords& c) {
    std::vector<Point> v;
    v.reserve(c.size());
    for (const auto& [x, y] : c) v.push_back({x, y});
    return v;
}

CountStrategy strategy_of(const std::string& s) {
    if (s == "brute") return CountStrategy::Brute;
    if (s == "grid") return CountStrategy::Grid;
    if (s == "brs") return CountStrategy::Brs;
    throw InvalidInput("unknown counting strategy '" + s + "'");
}

py::dict stats_dict(const RunStats& st) {
    py::dict d;
    d["stages"] = st.stages;
    d["decision_calls"] = st.decision_calls;
    d["gamma_edges"] = st.gamma_edges;
    d["pi_pairs"] = st.pi_pairs;
    d["shrink_rounds"] = st.shrink_rounds ? py::cast(*st.shrink_rounds) : py::none();
    d["fallback"] = st.fallback;
    d["low_confidence"] = st.low_confidence;
    return d;
}

py::dict result(SqDist v, const RunStats& st) {
    py::dict d;
    d["value"] = std::sqrt(v);
    d["value_sq"] = v;
    d["stats"] = stats_dict(st);
    return d;
}

SqInterval interval(double lo, double hi) { return {lo * lo, std::isinf(hi) ? kInfSq : hi * hi}; }

using Sides = std::pair<std::vector<PointId>, std::vector<PointId>>;

std::vector<Sides> sides_of(const CliqueCover& c) {
    std::vector<Sides> out;
    for (const Biclique& b : c.bicliques) out.emplace_back(b.a_side, b.b_side);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Interpoint distance optimization";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<RankOutOfRange>(m, "RankOutOfRange", PyExc_IndexError);
    py::register_exception<NoFeasibleValue>(m, "NoFeasibleValue", PyExc_RuntimeError);
    py::register_exception<ConstructionFailure>(m, "ConstructionFailure", PyExc_RuntimeError);
    py::register_exception<EmptyCollection>(m, "EmptyCollection", PyExc_RuntimeError);

    m.def(
        "select_distance",
        [](const Coords& pts, std::uint64_t k, std::uint64_t seed, const std::string& strategy) {
            SelectionConfig cfg;
            cfg.strategy = strategy_of(strategy);
            Rng rng(seed);
            RunStats st;
            const SqDist v = select_distance(PointSet(to_points(pts)), k, rng, cfg, &st);
            return result(v, st);
        },
        py::arg("points"), py::arg("k"), py::arg("seed") = 0, py::arg("strategy") = "grid",
        "k-th smallest pairwise distance (1-based k).");

    m.def(
        "select_distance_bipartite",
        [](const Coords& a, const Coords& b, std::uint64_t k, std::uint64_t seed) {
            Rng rng(seed);
            RunStats st;
            const SqDist v = select_distance_bipartite(PointSet(to_points(a)), PointSet(to_points(b)), k, rng, {}, &st);
            return result(v, st);
        },
        py::arg("a"), py::arg("b"), py::arg("k"), py::arg("seed") = 0);

    m.def(
        "count_pairs_at_most",
        [](const Coords& pts, double delta, const std::string& strategy) {
            return count_pairs_at_most(PointSet(to_points(pts)), delta * delta, strategy_of(strategy));
        },
        py::arg("points"), py::arg("delta"), py::arg("strategy") = "grid");

    m.def(
        "partial_brs",
        [](const Coords& a, const Coords& b, double lo, double hi, double r, std::uint64_t seed) {
            Rng rng(seed);
            const BrsOutput out = partial_brs(PointSet(to_points(a)), PointSet(to_points(b)), interval(lo, hi), r, rng);
            return py::make_tuple(sides_of(out.gamma), sides_of(out.pi));
        },
        py::arg("a"), py::arg("b"), py::arg("lo"), py::arg("hi"), py::arg("r") = 2.0, py::arg("seed") = 0,
        "Returns (gamma, pi) as lists of (a_ids, b_ids) for lo < |ab| <= hi.");

    m.def(
        "complete_brs",
        [](const Coords& a, const Coords& b, double lo, double hi, std::uint64_t seed) {
            Rng rng(seed);
            return sides_of(complete_brs(PointSet(to_points(a)), PointSet(to_points(b)), interval(lo, hi), rng));
        },
        py::arg("a"), py::arg("b"), py::arg("lo"), py::arg("hi"), py::arg("seed") = 0);

    m.def(
        "dfd2",
        [](const Coords& a, const Coords& b, std::uint64_t seed) {
            Rng rng(seed);
            RunStats st;
            const DfdInstance inst{PointSequence(to_points(a)), PointSequence(to_points(b))};
            return result(dfd2(inst, rng, {}, &st), st);
        },
        py::arg("a"), py::arg("b"), py::arg("seed") = 0);

    m.def(
        "dfd1",
        [](const Coords& a, const Coords& b, std::uint64_t seed) {
            Rng rng(seed);
            RunStats st;
            const DfdInstance inst{PointSequence(to_points(a)), PointSequence(to_points(b))};
            return result(dfd1(inst, rng, {}, &st), st);
        },
        py::arg("a"), py::arg("b"), py::arg("seed") = 0);

    m.def(
        "dfd_decide",
        [](const Coords& a, const Coords& b, double delta, bool two_sided) {
            const DfdInstance inst{PointSequence(to_points(a)), PointSequence(to_points(b))};
            return two_sided ? dfd2_decide(inst, delta * delta) : dfd1_decide(inst, delta * delta);
        },
        py::arg("a"), py::arg("b"), py::arg("delta"), py::arg("two_sided") = true);

    m.def(
        "rsp",
        [](const Coords& pts, PointId s, PointId t, double lambda, bool weighted, std::uint64_t seed) {
            Rng rng(seed);
            RunStats st;
            const RspInstance inst{PointSet(to_points(pts)), s, t, lambda, weighted};
            return result(rsp(inst, rng, {}, &st), st);
        },
        py::arg("points"), py::arg("s"), py::arg("t"), py::arg("lam"), py::arg("weighted") = false,
        py::arg("seed") = 0);

    py::module_ orc = m.def_submodule("oracle", "Brute-force references");
    orc.def(
        "kth", [](const Coords& pts, std::uint64_t k) { return oracle::brute_kth(PointSet(to_points(pts)), k); },
        py::arg("points"), py::arg("k"), "Squared k-th smallest pairwise distance.");
    orc.def(
        "dfd2",
        [](const Coords& a, const Coords& b) {
            return oracle::brute_dfd2_optimum({PointSequence(to_points(a)), PointSequence(to_points(b))});
        },
        py::arg("a"), py::arg("b"));
    orc.def(
        "dfd1",
        [](const Coords& a, const Coords& b) {
            return oracle::brute_dfd1_optimum({PointSequence(to_points(a)), PointSequence(to_points(b))});
        },
        py::arg("a"), py::arg("b"));
    orc.def(
        "rsp",
        [](const Coords& pts, PointId s, PointId t, double lambda, bool weighted) {
            return oracle::brute_rsp({PointSet(to_points(pts)), s, t, lambda, weighted});
        },
        py::arg("points"), py::arg("s"), py::arg("t"), py::arg("lam"), py::arg("weighted") = false);
}
