// Python bindings for the main operations. Exact values cross the boundary
// as fractions.Fraction (probabilities, rational scalars) or (re, im)
// Fraction pairs for properly complex values; floats are rejected so the
// exactness contract survives the language boundary.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aclab/bounds.hpp"
#include "aclab/decouple.hpp"
#include "aclab/dist.hpp"
#include "aclab/incidence.hpp"
#include "aclab/structure.hpp"
#include "aclab/suites.hpp"

namespace py = pybind11;
using namespace aclab;

namespace {

Rational rational_in(py::handle h) {
    if (py::isinstance<py::str>(h)) return Rational::parse(h.cast<std::string>());
    if (py::isinstance<py::int_>(h)) return Rational::parse(py::str(h).cast<std::string>());
    if (py::isinstance<py::float_>(h)) throw py::type_error("floats are not exact; pass str, int, or Fraction");
    if (py::hasattr(h, "numerator") && py::hasattr(h, "denominator")) {
        const std::string num = py::str(h.attr("numerator")).cast<std::string>();
        const std::string den = py::str(h.attr("denominator")).cast<std::string>();
        return Rational::parse(num + "/" + den);
    }
    throw py::type_error("expected a rational (str 'p/q', int, or Fraction)");
}

GaussianRational gaussian_in(py::handle h) {
    if (py::isinstance<py::tuple>(h) || py::isinstance<py::list>(h)) {
        auto seq = h.cast<py::sequence>();
        if (seq.size() != 2) throw py::type_error("complex values are (re, im) pairs");
        return {rational_in(seq[0]), rational_in(seq[1])};
    }
    if (py::isinstance<py::str>(h)) return GaussianRational::parse(h.cast<std::string>());
    return GaussianRational(rational_in(h));
}

std::vector<GaussianRational> gaussian_vector_in(py::handle h) {
    std::vector<GaussianRational> out;
    for (py::handle item : h.cast<py::sequence>()) out.push_back(gaussian_in(item));
    return out;
}

std::vector<std::vector<GaussianRational>> gaussian_matrix_in(py::handle h) {
    std::vector<std::vector<GaussianRational>> rows;
    for (py::handle row : h.cast<py::sequence>()) rows.push_back(gaussian_vector_in(row));
    if (rows.empty()) throw py::value_error("empty matrix");
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) throw py::value_error("ragged matrix");
    }
    return rows;
}

py::object fraction_out(const Rational& r) {
    static py::object fraction_type = py::module_::import("fractions").attr("Fraction");
    return fraction_type(r.str());
}

py::object value_out(const GaussianRational& v) {
    if (v.is_real()) return fraction_out(v.re);
    return py::make_tuple(fraction_out(v.re), fraction_out(v.im));
}

AtomDistribution atom_in(py::handle h) {
    if (py::isinstance<AtomDistribution>(h)) return h.cast<AtomDistribution>();
    if (py::isinstance<py::str>(h)) {
        const std::string name = h.cast<std::string>();
        if (name == "rademacher") return AtomDistribution::rademacher();
        throw py::value_error("unknown atom name: " + name + " (use 'rademacher' or an AtomDistribution)");
    }
    throw py::type_error("expected 'rademacher' or an AtomDistribution");
}

BilinearForm bilinear_in(py::handle matrix, py::handle x_atom, py::handle y_atom) {
    auto rows = gaussian_matrix_in(matrix);
    std::vector<GaussianRational> flat;
    for (auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return BilinearForm(rows.size(), rows.front().size(), std::move(flat), atom_in(x_atom), atom_in(y_atom));
}

QuadraticForm quadratic_in(py::handle matrix, py::handle linear, py::handle constant, py::handle atom) {
    auto rows = gaussian_matrix_in(matrix);
    std::vector<GaussianRational> flat;
    for (auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    std::vector<GaussianRational> lin;
    if (!linear.is_none()) lin = gaussian_vector_in(linear);
    GaussianRational c = constant.is_none() ? GaussianRational(0) : gaussian_in(constant);
    return QuadraticForm(rows.size(), std::move(flat), std::move(lin), std::move(c), atom_in(atom));
}

py::dict report_out(const ConcentrationReport& rep) {
    py::dict d;
    d["sup_prob"] = fraction_out(rep.sup_prob);
    py::list argmax;
    for (const auto& v : rep.argmax_values) argmax.append(value_out(v));
    d["argmax_values"] = argmax;
    d["method"] = rep.method == ConcentrationReport::Method::Exact ? "exact" : "monte_carlo";
    d["at_target"] = rep.at_target ? py::object(fraction_out(*rep.at_target)) : py::none();
    return d;
}

py::dict distribution_out(const ValueDistribution& dist) {
    py::dict d;
    py::list support;
    for (const auto& [v, p] : dist.support()) support.append(py::make_tuple(value_out(v), fraction_out(p)));
    d["support"] = support;
    return d;
}

py::list index_list_out(std::span<const std::size_t> idx) {
    py::list out;
    for (std::size_t i : idx) out.append(i);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact concentration functions of Bernoulli forms, bound checks, and structure detectors";
    m.attr("__version__") = "0.1.0";

    py::register_exception<Error>(m, "AclabError");

    py::class_<AtomDistribution>(m, "AtomDistribution")
        .def_static("rademacher", &AtomDistribution::rademacher)
        .def_static("lazy_walker", [](py::handle rho) { return AtomDistribution::lazy_walker(rational_in(rho)); })
        .def_static("finite_support",
                    [](py::handle entries) {
                        std::vector<std::pair<GaussianRational, Rational>> pairs;
                        for (py::handle e : entries.cast<py::sequence>()) {
                            auto pair = e.cast<py::sequence>();
                            pairs.emplace_back(gaussian_in(pair[0]), rational_in(pair[1]));
                        }
                        return AtomDistribution::finite_support(std::move(pairs));
                    })
        .def("support",
             [](const AtomDistribution& a) {
                 py::list out;
                 for (std::size_t i = 0; i < a.size(); ++i)
                     out.append(py::make_tuple(value_out(a.values()[i]), fraction_out(a.probs()[i])));
                 return out;
             })
        .def("__repr__", [](const AtomDistribution& a) {
            return "<AtomDistribution with " + std::to_string(a.size()) + " values>";
        });

    // --- exact engine -----------------------------------------------------
    m.def(
        "linear_distribution",
        [](py::handle coeffs, py::handle atom) {
            return distribution_out(linear_distribution(LinearForm(gaussian_vector_in(coeffs), atom_in(atom))));
        },
        py::arg("coeffs"), py::arg("atom") = "rademacher",
        "Exact law of sum a_i x_i; returns {'support': [(value, prob), ...]}");

    m.def(
        "linear_concentration",
        [](py::handle coeffs, py::handle atom) {
            return report_out(
                concentration(linear_distribution(LinearForm(gaussian_vector_in(coeffs), atom_in(atom)))));
        },
        py::arg("coeffs"), py::arg("atom") = "rademacher");

    m.def(
        "bilinear_concentration",
        [](py::handle matrix, py::handle target, py::handle x_atom, py::handle y_atom) {
            const BilinearForm form = bilinear_in(matrix, x_atom, y_atom);
            return report_out(
                bilinear_conditional_concentration(form, TargetFunction::constant(gaussian_in(target))));
        },
        py::arg("matrix"), py::arg("target") = py::int_(0), py::arg("x_atom") = "rademacher",
        py::arg("y_atom") = "rademacher",
        "P(x^T A y = target) plus sup_c over constants");

    m.def(
        "quadratic_concentration",
        [](py::handle matrix, py::handle linear, py::handle constant, py::handle atom) {
            return report_out(quadratic_concentration(quadratic_in(matrix, linear, constant, atom)));
        },
        py::arg("matrix"), py::arg("linear") = py::none(), py::arg("constant") = py::none(),
        py::arg("atom") = "rademacher", "sup_c P(x^T A x - L(x) = c), with at_target at the constant");

    m.def(
        "joint_distribution",
        [](py::handle rows, py::handle atom) {
            std::vector<LinearForm> forms;
            for (const auto& row : gaussian_matrix_in(rows)) forms.emplace_back(row, atom_in(atom));
            py::list out;
            for (const auto& [vec, p] : joint_distribution(forms).support()) {
                py::list value;
                for (const auto& v : vec) value.append(value_out(v));
                out.append(py::make_tuple(value, fraction_out(p)));
            }
            return out;
        },
        py::arg("rows"), py::arg("atom") = "rademacher");

    // --- bounds -------------------------------------------------------------
    m.def("lo_bound", [](long mm) { return lo_bound(mm).value(); }, py::arg("m"),
          "min(1/2, 1/sqrt(m)) as a float; use lo_check for the exact comparison");
    m.def("lo_check", [](py::handle p, long mm) { return lo_check(rational_in(p), mm); }, py::arg("p"),
          py::arg("m"));
    m.def("bilo_bound", &bilo_bound, py::arg("r"));
    m.def("bilo_check", [](py::handle p, long r) { return bilo_check(rational_in(p), r); }, py::arg("p"),
          py::arg("r"));
    m.def("halasz_rk",
          [](py::handle coeffs, unsigned k) { return py::int_(py::str(halasz_rk(gaussian_vector_in(coeffs), k).get_str())); },
          py::arg("coeffs"), py::arg("k"));
    m.def(
        "halasz_report",
        [](py::handle coeffs, unsigned k) {
            const auto rep =
                halasz_bound_report(LinearForm(gaussian_vector_in(coeffs), AtomDistribution::rademacher()), k);
            py::dict d;
            d["ratio"] = rep.ratio;
            d["passes"] = rep.passes;
            d["sup_prob"] = fraction_out(rep.exact_prob);
            return d;
        },
        py::arg("coeffs"), py::arg("k") = 1);
    m.def("subspace_deficiency_2d", [](py::handle vectors) {
        std::vector<std::pair<GaussianRational, GaussianRational>> vs;
        for (py::handle v : vectors.cast<py::sequence>()) {
            auto pair = v.cast<py::sequence>();
            vs.emplace_back(gaussian_in(pair[0]), gaussian_in(pair[1]));
        }
        return subspace_deficiency_2d(vs);
    });

    // --- structure ------------------------------------------------------------
    m.def("shortest_ap", [](py::handle values) {
        std::vector<Rational> vals;
        for (py::handle v : values.cast<py::sequence>()) vals.push_back(rational_in(v));
        const auto cert = shortest_ap(vals);
        py::dict d;
        d["difference"] = fraction_out(cert.difference);
        d["min_index"] = cert.min_index;
        d["max_index"] = cert.max_index;
        d["length"] = cert.length();
        return d;
    });
    m.def(
        "gap_fit",
        [](py::handle coeffs, long bound, std::size_t max_exceptions) -> py::object {
            const auto cert = gap_fit(gaussian_vector_in(coeffs), bound, max_exceptions);
            if (!cert) return py::none();
            py::dict d;
            d["dilate"] = value_out(cert->dilate);
            py::list coords;
            for (const auto& c : cert->coords) coords.append(py::int_(py::str(c.get_str())));
            d["coords"] = coords;
            d["exceptional"] = index_list_out(cert->exceptional);
            return d;
        },
        py::arg("coeffs"), py::arg("bound"), py::arg("max_exceptions") = 0);
    m.def(
        "rank_one_extract",
        [](py::handle matrix) {
            const BilinearForm form = bilinear_in(matrix, py::str("rademacher"), py::str("rademacher"));
            const auto cert = rank_one_extract(form);
            if (!verify_rank_one(form, cert)) raise(Errc::Internal, "certificate failed re-verification");
            py::dict d;
            d["rows"] = index_list_out(cert.rows);
            d["cols"] = index_list_out(cert.cols);
            py::list u, v;
            for (const auto& x : cert.u) u.append(value_out(x));
            for (const auto& x : cert.v) v.append(value_out(x));
            d["u"] = u;
            d["v"] = v;
            return d;
        },
        py::arg("matrix"), "demote-and-delete rank-one submatrix extraction (0-based indices)");
    m.def(
        "gen_planted_rank_one",
        [](std::size_t m, std::size_t n, std::size_t corrupt_rows, std::size_t corrupt_cols,
           std::uint64_t seed) {
            auto [form, cert] = gen_planted_rank_one(m, n, corrupt_rows, corrupt_cols, seed);
            py::list rows;
            for (std::size_t i = 0; i < form.rows(); ++i) {
                py::list row;
                for (std::size_t j = 0; j < form.cols(); ++j) row.append(value_out(form.at(i, j)));
                rows.append(row);
            }
            py::dict truth;
            truth["rows"] = index_list_out(cert.rows);
            truth["cols"] = index_list_out(cert.cols);
            return py::make_tuple(rows, truth);
        },
        py::arg("m"), py::arg("n"), py::arg("corrupt_rows") = 0, py::arg("corrupt_cols") = 0,
        py::arg("seed") = 1);
    m.def(
        "dense_principal_minor",
        [](py::handle matrix, std::size_t threshold) {
            const QuadraticForm q = quadratic_in(matrix, py::none(), py::none(), py::str("rademacher"));
            return index_list_out(dense_principal_minor(q, threshold));
        },
        py::arg("matrix"), py::arg("threshold"));
    m.def(
        "tuple_structure",
        [](py::handle rows, long r) {
            const auto ts = tuple_structure(gaussian_matrix_in(rows), r);
            py::dict d;
            py::list ratios, sets;
            for (const auto& x : ts.ratios) ratios.append(value_out(x));
            for (const auto& s : ts.diff_sets) sets.append(index_list_out(s));
            d["ratios"] = ratios;
            d["diff_sets"] = sets;
            d["score"] = ts.score;
            return d;
        },
        py::arg("rows"), py::arg("r") = 10);
    m.def(
        "degenerate_pair",
        [](py::handle a, py::handle b, long r, long search_bound) -> py::object {
            const auto res = degenerate_pair(gaussian_vector_in(a), gaussian_vector_in(b), r, search_bound);
            if (!res) return py::none();
            return py::make_tuple(res->first, res->second);
        },
        py::arg("a"), py::arg("b"), py::arg("r"), py::arg("search_bound") = 10);
    m.def(
        "count_low_height",
        [](long a, long b, long c, long d, long n, long q) {
            const auto res = count_low_height(a, b, c, d, n, q);
            py::dict out;
            out["count"] = res.count;
            out["skipped"] = res.skipped;
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("n"), py::arg("q"));
    m.def(
        "commensurability",
        [](py::handle values, long r, py::handle eps) {
            std::vector<Rational> vals;
            for (py::handle v : values.cast<py::sequence>()) vals.push_back(rational_in(v));
            return commensurability(vals, r, rational_in(eps));
        },
        py::arg("values"), py::arg("r"), py::arg("eps") = py::str("1/4"));

    // --- decoupling and incidence ----------------------------------------------
    m.def(
        "decoupled_event_probability",
        [](py::handle matrix, py::handle linear, py::handle y_indices) {
            const QuadraticForm q = quadratic_in(matrix, linear, py::none(), py::str("rademacher"));
            const Partition p = Partition::from_y(q.size(), y_indices.cast<std::vector<std::size_t>>());
            return fraction_out(decoupled_event_probability(q, p));
        },
        py::arg("matrix"), py::arg("linear") = py::none(), py::arg("y_indices") = py::list());
    m.def(
        "shatter_build",
        [](std::size_t n, std::size_t r, std::uint64_t seed, std::size_t max_attempts) {
            const QuadraticForm q =
                quadratic_from_square(std::vector<Rational>(n, Rational(1)), {}, Rational(0));
            const auto family = shatter_build(q, r, seed, max_attempts);
            py::list out;
            for (const auto& p : family.partitions)
                out.append(py::make_tuple(index_list_out(p.y), index_list_out(p.z)));
            return out;
        },
        py::arg("n"), py::arg("r") = 2, py::arg("seed") = 1, py::arg("max_attempts") = 50);
    m.def("shatter_family_size", &shatter_family_size, py::arg("n"));
    m.def(
        "incidence_probability",
        [](py::handle b, py::handle c, py::handle d) {
            std::vector<Rational> bv, cv;
            for (py::handle x : b.cast<py::sequence>()) bv.push_back(rational_in(x));
            for (py::handle x : c.cast<py::sequence>()) cv.push_back(rational_in(x));
            const auto model = build_point_line(bv, cv, rational_in(d), AtomDistribution::rademacher());
            return fraction_out(incidence_probability(model));
        },
        py::arg("b"), py::arg("c"), py::arg("d") = py::int_(0),
        "incidence probability of the point/line model of (sum b_i x_i)^2 = sum c_i x_i + d");

    // --- verification suites ------------------------------------------------------
    m.def(
        "run_suite",
        [](const std::string& name, std::uint64_t seed) {
            SuiteOptions opt;
            opt.seed = seed;
            const auto res = run_suite(name, opt);
            py::dict d;
            d["name"] = res.name;
            d["passed"] = res.passed;
            d["cases_run"] = res.cases_run;
            d["failures"] = res.failures;
            d["summary"] = res.summary;
            return d;
        },
        py::arg("name"), py::arg("seed") = 20240601);
    m.def("suite_names", [] { return suite_names(); });
}
