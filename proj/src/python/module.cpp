#include <pybind11/chrono.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <bit>
#include <optional>
#include <string>
#include <vector>

#include "subposet/chains.hpp"
#include "subposet/family.hpp"
#include "subposet/io.hpp"
#include "subposet/poset.hpp"
#include "subposet/search.hpp"

namespace py = pybind11;
using namespace subposet;

namespace {

py::object to_fraction(const Rat& r) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(rat_string(r));
}

py::object to_py_int(const Int& v) {
    static py::object int_type = py::module_::import("builtins").attr("int");
    return int_type(v.str());
}

Rat rat_from(const py::handle& obj) {
    if (py::isinstance<py::int_>(obj)) return Rat(Int(py::str(obj).cast<std::string>()));
    if (py::isinstance<py::str>(obj)) return parse_rational(obj.cast<std::string>());
    // fractions.Fraction or anything with numerator/denominator
    if (py::hasattr(obj, "numerator") && py::hasattr(obj, "denominator")) {
        const Int num(py::str(obj.attr("numerator")).cast<std::string>());
        const Int den(py::str(obj.attr("denominator")).cast<std::string>());
        return Rat(num, den);
    }
    throw py::type_error("expected int, Fraction, or 'p/q' string");
}

std::uint32_t mask_from(const py::handle& obj, int n) {
    std::uint32_t mask = 0;
    for (const auto& e : obj) {
        const int v = e.cast<int>();
        if (v < 1 || v > n) throw py::value_error("element out of range 1..n");
        mask |= 1u << (v - 1);
    }
    return mask;
}

SetFamily family_from(int n, const py::iterable& sets) {
    std::vector<std::uint32_t> members;
    for (const auto& s : sets) members.push_back(mask_from(s, n));
    return SetFamily(n, std::move(members));
}

py::list members_of(const SetFamily& f) {
    py::list out;
    for (auto m : f.members) {
        py::list set;
        for (int i = 0; i < f.n; ++i)
            if ((m >> i) & 1u) set.append(i + 1);
        out.append(set);
    }
    return out;
}

PosetPattern pattern_from(const py::handle& obj) {
    if (py::isinstance<PosetPattern>(obj)) return obj.cast<PosetPattern>();
    if (py::isinstance<py::str>(obj)) return parse_pattern_spec(obj.cast<std::string>());
    throw py::type_error("expected a PosetPattern or a spec string like 'diamond:2'");
}

SearchConfig config_from(std::optional<double> time_limit, std::optional<std::uint64_t> node_limit,
                         int threads, bool use_symmetry, bool prune_lubell, bool prune_height,
                         bool exclude_full_set) {
    SearchConfig cfg;
    cfg.thread_budget = threads;
    cfg.use_symmetry = use_symmetry;
    cfg.prune_lubell = prune_lubell;
    cfg.prune_height = prune_height;
    cfg.exclude_full_set = exclude_full_set;
    if (time_limit)
        cfg.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(*time_limit * 1000));
    if (node_limit) cfg.node_limit = *node_limit;
    return cfg;
}

py::dict outcome_dict(const SearchOutcome& r) {
    py::list witnesses;
    for (const auto& w : r.witnesses) witnesses.append(members_of(w));
    py::dict d;
    d["optimum"] = to_fraction(r.optimum);
    d["witnesses"] = witnesses;
    d["nodes"] = r.nodes_explored;
    d["completed"] = r.completed;
    return d;
}

py::list blocks_list(const std::vector<ChainBlockReport>& blocks) {
    py::list out;
    for (const auto& b : blocks) {
        py::dict d;
        d["key"] = b.key_string();
        d["chains"] = to_py_int(b.chain_count);
        d["average"] = to_fraction(b.average_meet);
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact Lubell-function and forbidden-subposet search machinery";

    py::class_<PosetPattern>(m, "PosetPattern")
        .def(py::init([](const std::string& spec) { return parse_pattern_spec(spec); }), py::arg("spec"))
        .def_static("from_pairs",
                    [](int count, const PairList& pairs, const std::string& name) {
                        return PosetPattern::from_pairs(count, pairs, name);
                    },
                    py::arg("element_count"), py::arg("pairs"), py::arg("name") = "")
        .def_property_readonly("size", &PosetPattern::size)
        .def_property_readonly("name", &PosetPattern::name)
        .def("pairs", &PosetPattern::pairs)
        .def("height", [](const PosetPattern& p) { return height(p); })
        .def("__repr__", [](const PosetPattern& p) {
            return "PosetPattern(" + (p.name().empty() ? std::to_string(p.size()) + " elements" : p.name()) + ")";
        });

    py::class_<SetFamily>(m, "SetFamily")
        .def(py::init(&family_from), py::arg("n"), py::arg("sets"))
        .def_readonly("n", &SetFamily::n)
        .def("members", &members_of)
        .def("__len__", [](const SetFamily& f) { return f.size(); })
        .def("__eq__", [](const SetFamily& a, const SetFamily& b) { return a == b; })
        .def("__repr__", [](const SetFamily& f) {
            return "SetFamily(n=" + std::to_string(f.n) + ", " + std::to_string(f.size()) + " members)";
        });

    m.def("sigma", [](int n, int k) { return to_py_int(sigma(n, k)); }, py::arg("n"), py::arg("k"));
    m.def("binomial", [](int n, int k) { return to_py_int(binomial(n, k)); });
    m.def("middle_levels",
          [](int n, int k, const std::string& variant) {
              return middle_levels(n, k, variant == "high" ? LevelVariant::high : LevelVariant::low);
          },
          py::arg("n"), py::arg("k"), py::arg("variant") = "low");
    m.def("construct_c1", [](const py::iterable& s, const py::iterable& t) {
        const std::uint32_t sm = mask_from(s, 30), tm = mask_from(t, 30);
        return construct_c1(sm, tm);
    });
    m.def("construct_c2", [](const py::iterable& s, const py::iterable& t) {
        return construct_c2(mask_from(s, 30), mask_from(t, 30));
    });
    m.def("construct_c3", [](const py::iterable& s, const py::iterable& t) {
        return construct_c3(mask_from(s, 30), mask_from(t, 30));
    });
    m.def("lubell", [](const SetFamily& f) { return to_fraction(lubell(f)); });
    m.def("lubell_via_chains", [](const SetFamily& f) { return to_fraction(lubell_via_chains(f)); });
    m.def("family_height", &family_height);
    m.def("conjugate", &conjugate);
    m.def("canonical_form", &canonical_form);
    m.def("is_pattern_free",
          [](const SetFamily& f, const py::handle& p) { return is_pattern_free(f, pattern_from(p)); },
          py::arg("family"), py::arg("pattern"));
    m.def("diamond_free_fast", &diamond_free_fast, py::arg("family"), py::arg("k"));
    m.def("interval_count",
          [](const SetFamily& f, const py::iterable& x, const py::iterable& z) {
              return interval_count(f, mask_from(x, f.n), mask_from(z, f.n));
          });
    m.def("e_lower",
          [](const py::handle& p, int n_max) { return e_lower(pattern_from(p), n_max); },
          py::arg("pattern"), py::arg("n_max") = 8);
    m.def("height", [](const py::handle& p) { return height(pattern_from(p)); });
    m.def("dk_bounds", [](int k) {
        const BoundsReport r = dk_bounds(k);
        py::dict d;
        d["k"] = r.k;
        d["m"] = r.m;
        d["case"] = r.case_tag == BoundsReport::CaseTag::case1 ? 1 : 2;
        d["lower"] = to_fraction(r.lower);
        d["upper"] = to_fraction(r.upper);
        return d;
    });
    m.def("lubell_size_bound", [](int n, const py::handle& cap) {
        const SizeBound b = lubell_size_bound(n, rat_from(cap));
        py::dict d;
        d["coarse"] = to_py_int(b.coarse);
        d["refined"] = b.refined ? to_py_int(*b.refined) : py::object(py::none());
        return d;
    });

    m.def("lubell_monte_carlo",
          [](const SetFamily& f, std::uint64_t samples, std::uint64_t seed, int threads) {
              const MonteCarloEstimate est = lubell_monte_carlo(f, samples, seed, threads);
              py::dict d;
              d["estimate"] = to_fraction(est.estimate);
              d["stderr_bound"] = to_fraction(est.stderr_bound);
              d["samples"] = est.samples;
              return d;
          },
          py::arg("family"), py::arg("samples") = 100000, py::arg("seed") = 1, py::arg("threads") = 1);
    m.def("partition_by_deleted_element",
          [](const SetFamily& f) { return blocks_list(partition_by_deleted_element(f)); });
    m.def("min_partition", [](const SetFamily& f) { return blocks_list(min_partition(f)); });
    m.def("minmax_partition", [](const SetFamily& f) { return blocks_list(minmax_partition(f)); });

    const auto search_args = [](auto&& fn) { return fn; };
    (void)search_args;
    m.def("la_exact",
          [](int n, const py::handle& pattern, std::optional<double> time_limit,
             std::optional<std::uint64_t> node_limit, int threads, bool use_symmetry,
             bool prune_lubell, bool prune_height, bool exclude_full_set) {
              return outcome_dict(la_exact(n, pattern_from(pattern),
                                           config_from(time_limit, node_limit, threads, use_symmetry,
                                                       prune_lubell, prune_height, exclude_full_set)));
          },
          py::arg("n"), py::arg("pattern"), py::arg("time_limit") = py::none(),
          py::arg("node_limit") = py::none(), py::arg("threads") = 0, py::arg("use_symmetry") = true,
          py::arg("prune_lubell") = true, py::arg("prune_height") = true,
          py::arg("exclude_full_set") = false);
    m.def("max_lubell",
          [](int n, const py::handle& pattern, bool require_empty, std::optional<double> time_limit,
             std::optional<std::uint64_t> node_limit, int threads, bool use_symmetry,
             bool prune_lubell, bool prune_height, bool exclude_full_set) {
              return outcome_dict(max_lubell(n, pattern_from(pattern), require_empty,
                                             config_from(time_limit, node_limit, threads, use_symmetry,
                                                         prune_lubell, prune_height, exclude_full_set)));
          },
          py::arg("n"), py::arg("pattern"), py::arg("require_empty_member") = false,
          py::arg("time_limit") = py::none(), py::arg("node_limit") = py::none(),
          py::arg("threads") = 0, py::arg("use_symmetry") = true, py::arg("prune_lubell") = true,
          py::arg("prune_height") = true, py::arg("exclude_full_set") = false);
    m.def("enumerate_maximal_pfree",
          [](int n, const py::handle& pattern, bool require_empty) {
              py::list out;
              for (const auto& c : enumerate_maximal_pfree(n, pattern_from(pattern), require_empty)) {
                  py::dict d;
                  d["family"] = c.family;
                  d["lubell"] = to_fraction(c.lubell_value);
                  out.append(d);
              }
              return out;
          },
          py::arg("n"), py::arg("pattern"), py::arg("require_empty_member") = false);
    m.def("find_family_of_size",
          [](int n, const py::handle& pattern, int target, std::optional<double> time_limit,
             std::optional<std::uint64_t> node_limit, int threads) {
              const FindResult res =
                  find_family_of_size(n, pattern_from(pattern), target,
                                      config_from(time_limit, node_limit, threads, true, true, true, false));
              py::dict d;
              d["family"] = res.family ? py::cast(*res.family) : py::object(py::none());
              d["completed"] = res.completed;
              d["nodes"] = res.nodes_explored;
              return d;
          },
          py::arg("n"), py::arg("pattern"), py::arg("target"), py::arg("time_limit") = py::none(),
          py::arg("node_limit") = py::none(), py::arg("threads") = 0);
    m.def("verify_extremal_uniqueness",
          [](int n, const py::handle& pattern, int expected_m) {
              return verify_extremal_uniqueness(n, pattern_from(pattern), expected_m);
          },
          py::arg("n"), py::arg("pattern"), py::arg("expected_m"));

    m.def("load_family", &load_family_file, py::arg("path"));
    m.def("family_to_string", &family_to_string);
    m.def("pattern_to_string", &pattern_to_string);
}
