#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "asymlab/errors.hpp"
#include "asymlab/json_io.hpp"
#include "asymlab/suite.hpp"

namespace py = pybind11;
using namespace asymlab;

namespace {

using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ComplexMatrix matrix_from_array(const ComplexArray& array) {
    const auto buf = array.request();
    if (buf.ndim != 2 || buf.shape[0] != buf.shape[1])
        fail(ErrorCode::InvalidArgument, "expected a square 2-d complex array");
    const auto n = static_cast<std::size_t>(buf.shape[0]);
    std::vector<Complex> entries(n * n);
    const auto* data = static_cast<const std::complex<double>*>(buf.ptr);
    std::copy(data, data + n * n, entries.begin());
    return ComplexMatrix(n, std::move(entries));
}

py::array matrix_to_array(const ComplexMatrix& m) {
    const auto n = static_cast<py::ssize_t>(m.dim());
    py::array_t<std::complex<double>> out({n, n});
    auto buf = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i)
        for (py::ssize_t j = 0; j < n; ++j)
            buf(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return out;
}

py::object json_to_py(const Json& j) {
    switch (j.type()) {
        case Json::value_t::null: return py::none();
        case Json::value_t::boolean: return py::bool_(j.get<bool>());
        case Json::value_t::number_integer: return py::int_(j.get<long long>());
        case Json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case Json::value_t::number_float: return py::float_(j.get<double>());
        case Json::value_t::string: return py::str(j.get<std::string>());
        case Json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(json_to_py(v));
            return out;
        }
        case Json::value_t::object: {
            py::dict out;
            for (const auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
            return out;
        }
        default: return py::none();
    }
}

Json py_to_json(const py::handle& obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        Json out = Json::object();
        for (const auto& item : obj.cast<py::dict>())
            out[item.first.cast<std::string>()] = py_to_json(item.second);
        return out;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        Json out = Json::array();
        for (const auto& item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
        return out;
    }
    fail(ErrorCode::InvalidArgument, "unsupported python value in a spec dict");
}

Json with_schema(const py::dict& spec) {
    Json j = py_to_json(spec);
    if (!j.contains("schema")) j["schema"] = kSchemaTag;
    return j;
}

Params params_from_dict(const py::object& overrides) {
    Params base;
    if (overrides.is_none()) return base;
    return params_from_json(py_to_json(overrides), base);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "asymptotic limits of power-bounded operators: spectral tools, similarity "
              "tests, weighted shift analysis and the inverse construction";
    m.attr("__version__") = kVersion;
    m.attr("SCHEMA") = kSchemaTag;

    static py::exception<Error> exc(m, "AsymlabError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
#if defined(PYBIND11_VERSION_HEX) && PYBIND11_VERSION_HEX >= 0x020C0000
            py::set_error(exc, e.what());
#else
            exc(e.what());
#endif
        }
    });

    // matrix core
    m.def(
        "herm_eig",
        [](const ComplexArray& a, double eig_tol) {
            const auto eig = herm_eig(matrix_from_array(a), eig_tol);
            py::array_t<double> w(
                py::array::ShapeContainer{static_cast<py::ssize_t>(eig.eigenvalues.size())},
                eig.eigenvalues.data());
            return py::make_tuple(w, matrix_to_array(eig.eigenvectors));
        },
        py::arg("a"), py::arg("eig_tol") = defaults::eig_tol,
        "ascending eigenvalues and orthonormal eigenvector columns of a Hermitian matrix");

    m.def(
        "psd_sqrt",
        [](const ComplexArray& a) { return matrix_to_array(psd_sqrt(matrix_from_array(a))); },
        py::arg("a"));

    m.def(
        "psd_sqrt_and_invsqrt",
        [](const ComplexArray& a, double floor) {
            auto [root, inv_root] = psd_sqrt_and_invsqrt(matrix_from_array(a), floor);
            return py::make_tuple(matrix_to_array(root), matrix_to_array(inv_root));
        },
        py::arg("a"), py::arg("floor") = 1e-12);

    m.def(
        "reduced_min_modulus",
        [](const ComplexArray& a, double kernel_tol) {
            const auto g = reduced_min_modulus(matrix_from_array(a), kernel_tol);
            py::dict out;
            out["value"] = g.zero_operator ? py::object(py::none()) : py::object(py::float_(g.value));
            out["zero_operator"] = g.zero_operator;
            out["kernel_dim"] = g.kernel_dim;
            return out;
        },
        py::arg("a"), py::arg("kernel_tol") = 1e-10);

    m.def(
        "spectral_subspace",
        [](const ComplexArray& a, double lo, double hi) {
            const auto split = spectral_subspace(matrix_from_array(a), lo, hi);
            py::dict out;
            out["k_dim"] = split.k_dim;
            out["basis"] = matrix_to_array(split.basis);
            return out;
        },
        py::arg("a"), py::arg("lo"), py::arg("hi"),
        "orthonormal basis of the spectral subspace for eigenvalues in [lo, hi), "
        "complement appended");

    m.def(
        "block_upper_inverse",
        [](const ComplexArray& x, std::size_t k_dim, const ComplexArray& basis, double tol) {
            const BlockSplit split{k_dim, matrix_from_array(basis)};
            return matrix_to_array(block_upper_inverse(matrix_from_array(x), split, tol));
        },
        py::arg("x"), py::arg("k_dim"), py::arg("basis"), py::arg("tol") = 1e-10);

    // asymptotics
    m.def(
        "power_profile",
        [](const ComplexArray& t, int budget) {
            return json_to_py(profile_to_json(power_profile(matrix_from_array(t), budget)));
        },
        py::arg("t"), py::arg("budget") = 4096);

    m.def(
        "asymptotic_limit",
        [](const ComplexArray& t, const py::object& params) {
            const auto report =
                asymptotic_limit_contraction(matrix_from_array(t), params_from_dict(params));
            return py::make_tuple(matrix_to_array(report.A), json_to_py(report_to_json(report)));
        },
        py::arg("t"), py::arg("params") = py::none(),
        "monotone limit of T*^n T^n for a contraction; returns (A, report)");

    m.def(
        "asymptotic_surrogate",
        [](const ComplexArray& t, const py::object& params) {
            const auto report =
                l_asymptotic_surrogate(matrix_from_array(t), params_from_dict(params));
            return py::make_tuple(matrix_to_array(report.A), json_to_py(report_to_json(report)));
        },
        py::arg("t"), py::arg("params") = py::none(),
        "windowed almost-convergence surrogate for a power-bounded operator");

    m.def(
        "asymptotic_report",
        [](const ComplexArray& t, const py::object& params) {
            const auto report = asymptotic_report(matrix_from_array(t), params_from_dict(params));
            return py::make_tuple(matrix_to_array(report.A), json_to_py(report_to_json(report)));
        },
        py::arg("t"), py::arg("params") = py::none());

    m.def(
        "stable_subspace",
        [](const ComplexArray& t, const py::object& params, bool accept_banach_dependent) {
            const ComplexMatrix op = matrix_from_array(t);
            const Params p = params_from_dict(params);
            const auto report = asymptotic_report(op, p);
            const auto split = stable_subspace(op, report, p, accept_banach_dependent);
            py::dict out;
            out["k_dim"] = split.k_dim;
            out["basis"] = matrix_to_array(split.basis);
            return out;
        },
        py::arg("t"), py::arg("params") = py::none(), py::arg("accept_banach_dependent") = false);

    m.def(
        "kerchy_decompose",
        [](const ComplexArray& t, const py::object& params) {
            const ComplexMatrix op = matrix_from_array(t);
            const Params p = params_from_dict(params);
            const auto split = kerchy_decompose(op, asymptotic_report(op, p), p);
            py::dict out = json_to_py(kerchy_to_json(split)).cast<py::dict>();
            out["T00"] = matrix_to_array(split.t00);
            out["T11"] = matrix_to_array(split.t11);
            out["basis"] = matrix_to_array(split.split.basis);
            return out;
        },
        py::arg("t"), py::arg("params") = py::none());

    m.def(
        "classify",
        [](const ComplexArray& t, const py::object& params) {
            return std::string(to_string(classify_C(matrix_from_array(t), params_from_dict(params))));
        },
        py::arg("t"), py::arg("params") = py::none());

    m.def(
        "unitary_conjugation_check",
        [](const ComplexArray& t, const ComplexArray& u, const py::object& params) {
            return unitary_conjugation_check(matrix_from_array(t), matrix_from_array(u),
                                             params_from_dict(params));
        },
        py::arg("t"), py::arg("u"), py::arg("params") = py::none());

    // similarity
    m.def(
        "sznagy_unitary_test",
        [](const ComplexArray& t, const py::object& params) {
            return json_to_py(
                verdict_to_json(sznagy_unitary_test(matrix_from_array(t), params_from_dict(params))));
        },
        py::arg("t"), py::arg("params") = py::none());

    m.def(
        "sznagy_isometry_test",
        [](const ComplexArray& t, const py::object& params) {
            return json_to_py(verdict_to_json(
                sznagy_isometry_test(matrix_from_array(t), params_from_dict(params))));
        },
        py::arg("t"), py::arg("params") = py::none());

    m.def(
        "gamma_alternative_test",
        [](const ComplexArray& t, const py::object& params) {
            return json_to_py(gamma_alternative_to_json(
                gamma_alternative_test(matrix_from_array(t), params_from_dict(params))));
        },
        py::arg("t"), py::arg("params") = py::none());

    m.def(
        "intertwiner_to_isometry",
        [](const ComplexArray& t, const ComplexArray& a, const py::object& params) {
            const auto cert = intertwiner_to_isometry(matrix_from_array(t), matrix_from_array(a),
                                                      params_from_dict(params));
            py::dict out;
            out["rank"] = cert.rank;
            out["isometry_defect"] = cert.isometry_defect;
            out["intertwine_residual"] = cert.intertwine_residual;
            out["V"] = matrix_to_array(cert.v);
            out["Xplus"] = matrix_to_array(cert.xplus);
            out["range_basis"] = matrix_to_array(cert.range_basis);
            return out;
        },
        py::arg("t"), py::arg("a"), py::arg("params") = py::none());

    m.def(
        "similarity_invariance_check",
        [](const ComplexArray& t, const ComplexArray& x, const py::object& params) {
            return json_to_py(invariance_to_json(similarity_invariance_check(
                matrix_from_array(t), matrix_from_array(x), params_from_dict(params))));
        },
        py::arg("t"), py::arg("x"), py::arg("params") = py::none());

    m.def(
        "class_q_predicate",
        [](const ComplexArray& t) {
            const auto res = class_q_predicate(matrix_from_array(t));
            py::dict out;
            out["is_class_q"] = res.is_class_q;
            out["min_eig"] = res.min_eig;
            return out;
        },
        py::arg("t"));

    m.def(
        "paranormal_sampled_predicate",
        [](const ComplexArray& t, int samples, std::uint64_t seed) {
            const auto res = paranormal_sampled_predicate(matrix_from_array(t), samples, seed);
            py::dict out;
            out["passed"] = res.passed;
            out["worst_margin"] = res.worst_margin;
            if (!res.witness.empty()) {
                py::list w;
                for (const auto& v : res.witness) w.append(v);
                out["witness"] = w;
            }
            return out;
        },
        py::arg("t"), py::arg("samples") = 256, py::arg("seed") = 1234);

    // shifts
    m.def(
        "classify_shift",
        [](const py::dict& spec, long table_window) {
            const auto analysis = classify_shift(parse_shift_spec(with_schema(spec)));
            return json_to_py(shift_analysis_to_json(analysis, table_window));
        },
        py::arg("spec"), py::arg("table_window") = 8,
        "closed-form weighted bilateral shift analysis from a spec dict "
        "{lo, hi, core, left_tail, right_tail}");

    m.def(
        "shift_matrix",
        [](const py::dict& spec, long window, const std::string& boundary) {
            const Boundary b = (boundary == "cyclic") ? Boundary::Cyclic : Boundary::Zero;
            return matrix_to_array(
                truncate_to_matrix(parse_shift_spec(with_schema(spec)), window, b));
        },
        py::arg("spec"), py::arg("window"), py::arg("boundary") = "zero");

    m.def(
        "sum_analysis",
        [](const py::dict& spec) {
            return json_to_py(sum_analysis_to_json(sum_analysis(parse_sum_spec(with_schema(spec)))));
        },
        py::arg("spec"));

    // constructor
    m.def(
        "validate_target",
        [](const py::dict& spec) {
            const auto target = validate_target(parse_target_spec(with_schema(spec)));
            py::dict out;
            out["r_under"] = target.r_under;
            out["degenerate_identity"] = target.degenerate_identity;
            out["identity_summand_dim"] = target.identity_summand_dim;
            out["inf_at_r_under"] = target.inf_at_r_under;
            out["inf_at_one"] = target.inf_at_one;
            out["log"] = target.log;
            return out;
        },
        py::arg("spec"));

    m.def(
        "construct",
        [](const py::dict& spec, long window, long level_dim, long n_max) {
            const auto result = construct(parse_target_spec(with_schema(spec)), window, level_dim);
            const auto convergence = verify_convergence(result, n_max);
            py::dict out = json_to_py(construction_to_json(result, false)).cast<py::dict>();
            out["A"] = matrix_to_array(result.A);
            out["U"] = matrix_to_array(result.U);
            out["T"] = matrix_to_array(result.T);
            out["convergence"] = json_to_py(convergence_to_json(convergence));
            return out;
        },
        py::arg("spec"), py::arg("window") = 16, py::arg("level_dim") = 4, py::arg("n_max") = 8,
        "build T = A^{-1/2} U A^{1/2} realizing the target spectrum and verify the "
        "convergence bound");

    m.def(
        "dichotomy_probe",
        [](const py::dict& spec, const std::vector<long>& windows, long level_dim) {
            return json_to_py(dichotomy_to_json(
                eigenspace_dichotomy_probe(parse_target_spec(with_schema(spec)), windows, level_dim)));
        },
        py::arg("spec"), py::arg("windows"), py::arg("level_dim") = 4);

    // suites
    m.def(
        "run_acceptance",
        [](int threads) {
            SuiteOptions options;
            options.threads = threads;
            return json_to_py(acceptance_to_json(run_acceptance(options)));
        },
        py::arg("threads") = 0);
}
