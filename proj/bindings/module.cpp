// Python bindings for the main operations: spaces and entourages, the four
// budgeted dimension solvers, groupoid builders, dynamic dimension and its
// cross-checks, partitions of unity, growth comparison, and the amenability
// pipeline.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "coarsedim/amenability.hpp"
#include "coarsedim/json_io.hpp"

namespace py = pybind11;
using namespace coarsedim;

namespace {

Rat to_rat(const py::object& o) {
  if (py::isinstance<py::int_>(o)) return Rat(o.cast<long long>());
  if (py::isinstance<py::str>(o)) return parse_rat(o.cast<std::string>());
  if (py::isinstance<py::float_>(o)) {
    double v = o.cast<double>();
    if (v == std::floor(v)) return Rat(static_cast<long long>(v));
  }
  throw std::invalid_argument("expected an int or a 'p/q' string");
}

std::optional<Rat> to_rat_opt(const py::object& o) {
  if (o.is_none()) return std::nullopt;
  return to_rat(o);
}

// groupoid plus its length function, the unit the python surface works with
struct PyGroupoid {
  FiniteGroupoid G;
  LengthFunction len;
};

DimensionCurve to_curve(const py::dict& d) {
  DimensionCurve c;
  for (auto item : d) {
    long long r = item.first.cast<long long>();
    if (item.second.is_none())
      c.samples[r] = std::nullopt;
    else
      c.samples[r] = item.second.cast<int>();
  }
  return c;
}

py::object from_value(const std::optional<int>& v) {
  if (!v) return py::none();
  return py::int_(*v);
}

py::dict report_to_dict(const AmenabilityReport& rep) {
  py::dict d;
  d["pass"] = rep.pass;
  d["exact_mode"] = rep.exact_mode;
  d["max_fiber_excess"] = rep.max_fiber_excess;
  d["max_unit_defect"] = rep.max_unit_defect;
  d["max_invariance_defect"] = rep.max_invariance_defect;
  if (rep.exact_unit_defect)
    d["exact_unit_defect"] = rat_to_string(*rep.exact_unit_defect);
  if (rep.exact_invariance_defect)
    d["exact_invariance_defect"] = rat_to_string(*rep.exact_invariance_defect);
  d["failures"] = rep.failures;
  return d;
}

py::dict pou_report_to_dict(const PouReport& rep) {
  py::dict d;
  d["pass"] = rep.pass;
  d["max_psi_step"] = rat_to_string(rep.max_psi_step);
  d["psi_step_bound"] = rat_to_string(rep.psi_step_bound);
  d["max_p_sum_step"] = rep.max_p_sum_step;
  d["max_phi_step"] = rep.max_phi_step;
  d["per_index_bound"] = rep.per_index_bound;
  d["max_norm_defect"] = rep.max_norm_defect;
  d["failures"] = rep.failures;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "budgeted coarse-dimension toolkit";

  // ---- spaces ---------------------------------------------------------
  py::class_<FiniteMetricSpace>(m, "Space")
      .def_property_readonly("n", &FiniteMetricSpace::size)
      .def_property_readonly("points", &FiniteMetricSpace::points)
      .def("dist",
           [](const FiniteMetricSpace& X, int i, int j) {
             return to_double(X.dist(i, j));
           })
      .def("dist_exact",
           [](const FiniteMetricSpace& X, int i, int j) {
             return rat_to_string(X.dist(i, j));
           })
      .def("diameter", [](const FiniteMetricSpace& X) { return to_double(X.diameter()); })
      .def("ball",
           [](const FiniteMetricSpace& X, int x, const py::object& r) {
             return X.ball(x, to_rat(r));
           })
      .def("to_json", &space_to_json)
      .def_static("from_json", &space_from_json);

  m.def("gen_path", &gen_path, py::arg("n"));
  m.def("gen_cycle", &gen_cycle, py::arg("n"));
  m.def(
      "gen_grid",
      [](const std::vector<int>& dims) { return gen_grid(dims); },
      py::arg("dims"));
  m.def(
      "gen_dirsum",
      [](const std::vector<long long>& weights, long long radius) {
        return gen_dirsum(weights, radius);
      },
      py::arg("weights"), py::arg("radius"));
  m.def(
      "gen_cayley_ball",
      [](const Group& g, const py::object& radius) {
        return gen_cayley_ball(g, to_rat(radius));
      },
      py::arg("group"), py::arg("radius"));

  py::class_<Entourage>(m, "Entourage")
      .def_static(
          "tube",
          [](const FiniteMetricSpace& X, const py::object& R, bool closed) {
            return Entourage::tube(X, to_rat(R), closed);
          },
          py::arg("space"), py::arg("R"), py::arg("closed") = true)
      .def_static("diagonal", &Entourage::diagonal)
      .def("contains", &Entourage::contains)
      .def("pairs", &Entourage::pairs)
      .def("subset_of", &Entourage::subset_of)
      .def("__len__", &Entourage::pair_count)
      .def("__eq__", &Entourage::operator==);
  m.def("entourage_compose", &entourage_compose);
  m.def("entourage_invert", &entourage_invert);

  // ---- groups and actions ---------------------------------------------
  py::class_<Group>(m, "Group")
      .def_property_readonly("n", &Group::size)
      .def_readonly("elems", &Group::elems)
      .def_static("trivial", &Group::trivial)
      .def_static("cyclic", &Group::cyclic)
      .def_static("abelian", &Group::abelian)
      .def_static("zball", &Group::zball)
      .def_static("z2ball", &Group::z2ball);

  py::class_<GroupAction>(m, "Action")
      .def_property_readonly("n_points", &GroupAction::n_points)
      .def("apply", &GroupAction::apply)
      .def_static("rotation", &GroupAction::rotation)
      .def_static("regular", &GroupAction::regular)
      .def_static("trivial_on", &GroupAction::trivial_on);

  // ---- covers ----------------------------------------------------------
  m.def(
      "cover_stats",
      [](const FiniteMetricSpace& X, const std::vector<PointSet>& cover,
         const py::object& R) {
        auto st = cover_stats(X, cover, to_rat_opt(R));
        py::dict d;
        d["lebesgue"] = st.lebesgue
                            ? py::object(py::float_(to_double(*st.lebesgue)))
                            : py::object(py::none());
        d["multiplicity"] = st.multiplicity;
        d["max_diameter"] = to_double(st.max_diameter);
        if (st.r_multiplicity) d["r_multiplicity"] = *st.r_multiplicity;
        return d;
      },
      py::arg("space"), py::arg("cover"), py::arg("R") = py::none());

  auto solver = [](SolveResult (*fn)(const FiniteMetricSpace&,
                                     const BudgetedDimensionQuery&,
                                     const SolveOptions&)) {
    return [fn](const FiniteMetricSpace& X, const py::object& R,
                const py::object& D, int m_max) {
      auto r = fn(X, {to_rat(R), to_rat(D), m_max}, {});
      return py::make_tuple(from_value(r.value),
                            r.tagged.families.empty()
                                ? py::cast(r.cover)
                                : py::cast(r.tagged.families));
    };
  };
  m.def("solve_ad", solver(&solve_ad), py::arg("space"), py::arg("R"),
        py::arg("D"), py::arg("m_max") = 8);
  m.def("solve_rmult", solver(&solve_rmult), py::arg("space"), py::arg("R"),
        py::arg("D"), py::arg("m_max") = 8);
  m.def("solve_families", solver(&solve_families), py::arg("space"),
        py::arg("R"), py::arg("D"), py::arg("m_max") = 8);
  m.def(
      "solve_coarse",
      [](const FiniteMetricSpace& X, const Entourage& E, const Entourage& F,
         int m_max) {
        auto r = solve_coarse(X, E, F, m_max);
        return py::make_tuple(from_value(r.value), r.tagged.families);
      },
      py::arg("space"), py::arg("E"), py::arg("F_budget"), py::arg("m_max") = 8);
  m.def(
      "box_allocate",
      [](const FiniteMetricSpace& X, const std::vector<PointSet>& cover,
         const py::object& R, const py::object& boxes) {
        std::optional<int> b;
        if (!boxes.is_none()) b = boxes.cast<int>();
        return box_allocate(X, cover, to_rat(R), b).families;
      },
      py::arg("space"), py::arg("cover"), py::arg("R"),
      py::arg("boxes") = py::none());
  m.def(
      "greedy_families",
      [](const FiniteMetricSpace& X, const py::object& R, const py::object& D) {
        auto [ub, tc] = greedy_families(X, to_rat(R), to_rat(D));
        return py::make_tuple(ub, tc.families);
      },
      py::arg("space"), py::arg("R"), py::arg("D"));

  // ---- growth -----------------------------------------------------------
  m.def(
      "preceq_witness",
      [](const py::dict& f, const py::dict& g, int k_max) -> py::object {
        auto w = preceq_witness(to_curve(f), to_curve(g), k_max);
        if (!w) return py::none();
        return py::make_tuple(w->k, w->window_lo, w->window_hi);
      },
      py::arg("f"), py::arg("g"), py::arg("k_max") = 5);
  m.def(
      "equiv",
      [](const py::dict& f, const py::dict& g, int k_max) {
        auto r = equiv(to_curve(f), to_curve(g), k_max);
        const char* kinds[] = {"equivalent", "only_fg", "only_gf",
                               "incomparable"};
        return std::string(kinds[static_cast<int>(r.kind)]);
      },
      py::arg("f"), py::arg("g"), py::arg("k_max") = 5);
  m.def(
      "classify",
      [](const py::dict& f) {
        auto r = classify(to_curve(f));
        const char* kinds[] = {"constant", "polynomial", "exponential",
                               "inconclusive"};
        py::dict d;
        d["kind"] = kinds[static_cast<int>(r.kind)];
        d["estimate"] = r.estimate;
        return d;
      },
      py::arg("f"));

  // ---- groupoids ---------------------------------------------------------
  py::class_<PyGroupoid>(m, "Groupoid")
      .def_property_readonly("n_arrows",
                             [](const PyGroupoid& g) { return g.G.size(); })
      .def_property_readonly("units",
                             [](const PyGroupoid& g) { return g.G.units(); })
      .def("src", [](const PyGroupoid& g, int a) { return g.G.src(a); })
      .def("rng", [](const PyGroupoid& g, int a) { return g.G.rng(a); })
      .def("inv", [](const PyGroupoid& g, int a) { return g.G.inv(a); })
      .def("compose",
           [](const PyGroupoid& g, int a, int b) -> py::object {
             int c = g.G.compose(a, b);
             if (c < 0) return py::none();
             return py::int_(c);
           })
      .def("label", [](const PyGroupoid& g, int a) { return g.G.label(a); })
      .def("length",
           [](const PyGroupoid& g, int a) { return to_double(g.len.values[a]); })
      .def("validate",
           [](const PyGroupoid& g) {
             g.G.validate();
             validate_length(g.G, g.len);
           })
      .def("arrows_below",
           [](const PyGroupoid& g, const py::object& R) {
             return arrows_below_length(g.G, g.len, to_rat(R));
           })
      .def("s_fiber", [](const PyGroupoid& g, int u) { return s_fiber(g.G, u); })
      .def("r_fiber", [](const PyGroupoid& g, int u) { return r_fiber(g.G, u); })
      .def("to_json",
           [](const PyGroupoid& g) { return groupoid_to_json(g.G, g.len); })
      .def_static("from_json", [](const std::string& text) {
        auto [G, len] = groupoid_from_json(text);
        return PyGroupoid{std::move(G), std::move(len)};
      });

  m.def("pair_groupoid", [](const FiniteMetricSpace& X) {
    auto [G, len] = build_pair_groupoid(X);
    return PyGroupoid{std::move(G), std::move(len)};
  });
  m.def("transformation_groupoid", [](const GroupAction& a) {
    auto [G, len] = build_transformation_groupoid(a);
    return PyGroupoid{std::move(G), std::move(len)};
  });
  m.def("alexandrov", [](const PyGroupoid& g) {
    auto [G, len] = alexandrov(g.G, g.len);
    return PyGroupoid{std::move(G), std::move(len)};
  });
  m.def("generate_subgroupoid",
        [](const PyGroupoid& g, const std::vector<int>& S) {
          auto r = generate_subgroupoid(g.G, S);
          return py::make_tuple(r.arrows, r.hit_undefined);
        });
  m.def("arrow_product_set",
        [](const PyGroupoid& g, const std::vector<int>& A,
           const std::vector<int>& B) {
          auto r = arrow_product_set(g.G, A, B);
          return py::make_tuple(r.arrows, r.hit_undefined);
        });
  m.def("arrow_power",
        [](const PyGroupoid& g, const std::vector<int>& A, long long n) {
          auto r = arrow_power(g.G, A, n);
          return py::make_tuple(r.arrows, r.hit_undefined);
        });

  // ---- dynamics ----------------------------------------------------------
  m.def(
      "stay_in_set",
      [](const GroupAction& a, const std::vector<int>& U,
         const std::vector<int>& E) {
        auto r = stay_in_set(a, U, E);
        return py::make_tuple(r.elements, r.budget_exceeded);
      },
      py::arg("action"), py::arg("U"), py::arg("E"));
  m.def(
      "dad_action",
      [](const GroupAction& a, const std::vector<int>& E, const py::object& B,
         int m_max) {
        auto r = dad_action(a, E, to_rat_opt(B), m_max);
        return py::make_tuple(from_value(r.value), r.cover, r.exact);
      },
      py::arg("action"), py::arg("E"), py::arg("B") = py::none(),
      py::arg("m_max") = 8);
  m.def(
      "dad_groupoid",
      [](const PyGroupoid& g, const std::vector<int>& K, const py::object& B,
         int m_max, bool orbit) {
        DadQuery q{K, to_rat_opt(B), m_max, orbit};
        auto r = dad_groupoid(g.G, g.len, q);
        return py::make_tuple(from_value(r.value), r.cover, r.exact);
      },
      py::arg("groupoid"), py::arg("K"), py::arg("B") = py::none(),
      py::arg("m_max") = 8, py::arg("orbit_condition") = false);
  m.def(
      "crosscheck_lemma412",
      [](const GroupAction& a, const py::object& R, const py::object& B,
         int m_max) {
        auto rep = crosscheck_lemma412(a, to_rat(R), to_rat_opt(B), m_max);
        py::dict d;
        d["ok"] = rep.ok;
        d["action_value"] = from_value(rep.action_side.value);
        d["groupoid_value"] = from_value(rep.groupoid_side.value);
        return d;
      },
      py::arg("action"), py::arg("R"), py::arg("B") = py::none(),
      py::arg("m_max") = 8);
  m.def(
      "crosscheck_thm416",
      [](const FiniteMetricSpace& X, const py::object& R, const py::object& D,
         int m_max) {
        auto rep = crosscheck_thm416(X, to_rat(R), to_rat(D), m_max);
        py::dict d;
        d["ok"] = rep.ok;
        d["detail"] = rep.detail;
        py::list vals;
        for (const auto& v : rep.values) vals.append(from_value(v));
        d["values"] = vals;
        return d;
      },
      py::arg("space"), py::arg("R"), py::arg("D"), py::arg("m_max") = 8);
  m.def(
      "equivariance_defect",
      [](const GroupAction& on_points, const GroupAction& on_vertices,
         const std::vector<std::vector<double>>& f, const std::vector<int>& E) {
        std::vector<ProbMeasure> ms;
        for (const auto& w : f) ms.push_back(ProbMeasure{w});
        return equivariance_defect(on_points, on_vertices, ms, E);
      },
      py::arg("on_points"), py::arg("on_vertices"), py::arg("f"), py::arg("E"));

  // ---- partitions and amenability ----------------------------------------
  m.def(
      "choose_parameters",
      [](double alpha, double R, double eps) {
        auto pc = choose_parameters_alpha(alpha, R, eps);
        py::dict d;
        d["p"] = pc.p;
        d["c"] = pc.c;
        d["N"] = pc.N ? py::object(py::int_(*pc.N)) : py::object(py::none());
        d["N_real"] = pc.N_real;
        d["lhs"] = pc.lhs;
        return d;
      },
      py::arg("alpha"), py::arg("R"), py::arg("eps"));
  m.def(
      "exact_witness",
      [](const PyGroupoid& g) {
        auto w = exact_witness(g.G);
        return py::make_tuple(w.mu, w.support);
      },
      py::arg("groupoid"));
  m.def(
      "check_amenability",
      [](const PyGroupoid& g, const std::vector<double>& mu,
         const std::vector<int>& K, double eps) {
        AmenabilityWitness w;
        w.mu = mu;
        for (int a = 0; a < g.G.size(); ++a)
          if (mu[a] > 0.0) w.support.push_back(a);
        return report_to_dict(check_amenability(g.G, w, K, eps));
      },
      py::arg("groupoid"), py::arg("mu"), py::arg("K"), py::arg("eps"));
  m.def(
      "amenability_pipeline",
      [](const PyGroupoid& g, const py::object& R, double eps,
         const py::object& alpha, const py::object& B, int m_max) {
        PipelineOptions opts;
        opts.R = to_rat(R);
        opts.eps = eps;
        if (!alpha.is_none()) opts.alpha = alpha.cast<double>();
        opts.budget = to_rat_opt(B);
        opts.m_max = m_max;
        auto res = amenability_pipeline(g.G, g.len, opts);
        py::dict d;
        d["pass"] = res.pass;
        d["failed_stage"] = res.failed_stage;
        d["N"] = res.N;
        d["p"] = res.params.p;
        d["cover"] = res.cover;
        d["mu"] = res.witness.mu;
        d["pou_report"] = pou_report_to_dict(res.pou_report);
        d["report"] = report_to_dict(res.final_report);
        return d;
      },
      py::arg("groupoid"), py::arg("R"), py::arg("eps"),
      py::arg("alpha") = py::none(), py::arg("B") = py::none(),
      py::arg("m_max") = 8);

  m.attr("__version__") = "0.1.0";
}
