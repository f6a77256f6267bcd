#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fraclab/formulas.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/paths.hpp"
#include "fraclab/process_sampler.hpp"
#include "fraclab/smallball.hpp"
#include "fraclab/urn.hpp"
#include "fraclab/version.hpp"

namespace py = pybind11;
using namespace fraclab;

namespace {

ProcessSpec make_spec(const std::string& base, double H, double lambda, double gamma,
                      std::vector<double> alphas) {
    if (base == "brownian") return ProcessSpec::brownian(std::move(alphas));
    if (base == "fbm") return ProcessSpec::fbm(H, std::move(alphas));
    if (base == "rl") return ProcessSpec::rl(lambda, std::move(alphas));
    if (base == "fbm_frac") return ProcessSpec::fbm_frac(H, gamma, std::move(alphas));
    throw parameter_error("process base must be brownian|fbm|rl|fbm_frac");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "fractional-process simulation and limit-theorem laboratory";
    m.attr("__version__") = kVersion;

    py::register_exception<parameter_error>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<grid_error>(m, "GridError", PyExc_ValueError);
    py::register_exception<numeric_error>(m, "NumericError", PyExc_RuntimeError);
    py::register_exception<inconsistency_error>(m, "InconsistencyError", PyExc_RuntimeError);

    py::class_<TimeGrid>(m, "TimeGrid")
        .def_static("uniform", &TimeGrid::uniform, py::arg("t0"), py::arg("t1"), py::arg("n"))
        .def_static("geometric", &TimeGrid::geometric, py::arg("t0"), py::arg("ratio"),
                    py::arg("n"))
        .def_static("from_points", &TimeGrid::from_points)
        .def_property_readonly("points", [](const TimeGrid& g) { return g.points(); })
        .def("__len__", &TimeGrid::size);

    py::class_<GridPath>(m, "GridPath")
        .def_property_readonly("times", [](const GridPath& p) { return p.grid.points(); })
        .def_property_readonly("values", [](const GridPath& p) { return p.values; })
        .def_property_readonly("index", [](const GridPath& p) { return p.index; });

    py::class_<SeedSpec>(m, "SeedSpec")
        .def(py::init([](std::uint64_t master, std::uint64_t stream) {
                 return SeedSpec{master, stream};
             }),
             py::arg("master_seed") = 0, py::arg("stream_id") = 0)
        .def_readwrite("master_seed", &SeedSpec::master_seed)
        .def_readwrite("stream_id", &SeedSpec::stream_id);

    py::class_<ProcessSpec>(m, "ProcessSpec")
        .def(py::init(&make_spec), py::arg("base") = "brownian", py::arg("H") = 0.5,
             py::arg("lam") = 0.5, py::arg("gamma") = 0.0,
             py::arg("alphas") = std::vector<double>{})
        .def_property_readonly("index", &ProcessSpec::self_similarity_index);

    // covariances
    m.def("fbm_cov", &paths::fbm_cov, py::arg("H"), py::arg("t"), py::arg("s"));
    m.def("rl_cov", &paths::rl_cov, py::arg("lam"), py::arg("t"), py::arg("s"),
          py::arg("tol") = 1e-10);

    // samplers
    m.def(
        "sample_fbm",
        [](double H, const TimeGrid& g, SeedSpec seed, std::uint64_t k, const std::string& method) {
            return paths::sample_fbm(H, g, seed, k,
                                     method == "cholesky" ? paths::FbmMethod::cholesky
                                                          : paths::FbmMethod::circulant);
        },
        py::arg("H"), py::arg("grid"), py::arg("seed"), py::arg("path_index") = 0,
        py::arg("method") = "circulant");
    m.def(
        "sample_rl",
        [](double lam, const TimeGrid& g, SeedSpec seed, std::uint64_t k, const std::string& method) {
            return paths::sample_rl(lam, g, seed, k,
                                    method == "cholesky" ? paths::RlMethod::cholesky
                                                         : paths::RlMethod::kernel_convolution);
        },
        py::arg("lam"), py::arg("grid"), py::arg("seed"), py::arg("path_index") = 0,
        py::arg("method") = "kernel_convolution");
    m.def("sample_zh", &paths::sample_zh, py::arg("H"), py::arg("grid"), py::arg("seed"),
          py::arg("path_index"), py::arg("truncation"), py::arg("mesh"),
          py::arg("tail_tol") = 1e-4);
    m.def("sample_stationary", &paths::sample_stationary, py::arg("cov"), py::arg("grid"),
          py::arg("seed"), py::arg("path_index") = 0);
    m.def(
        "sample_process",
        [](const ProcessSpec& spec, const TimeGrid& g, SeedSpec seed, std::uint64_t k) {
            return ProcessSampler(spec, g).sample(seed, k);
        },
        py::arg("spec"), py::arg("grid"), py::arg("seed"), py::arg("path_index") = 0);

    // operators
    m.def("integrate", &ops::integrate);
    m.def("weighted_integral", &ops::weighted_integral, py::arg("path"), py::arg("alpha"),
          py::arg("tau") = std::nullopt);
    m.def(
        "compose_weighted",
        [](const GridPath& p, std::vector<double> a) { return ops::compose_weighted(p, a); },
        py::arg("path"), py::arg("alphas"));
    m.def("riemann_liouville", &ops::riemann_liouville, py::arg("path"), py::arg("gamma"));
    m.def("normalize_self_similar", &ops::normalize_self_similar, py::arg("path"),
          py::arg("exponent"));
    m.def("stationary_transform", &ops::stationary_transform, py::arg("path"), py::arg("tau"));

    // formulas
    m.def("a_h", &formulas::a_h, py::arg("H"), py::arg("tol") = 1e-12);
    m.def("sigma2_w", &formulas::sigma2_w, py::arg("lam"));
    m.def("sigma2_b0", &formulas::sigma2_b0, py::arg("H"), py::arg("gamma"),
          py::arg("tol") = 1e-9);
    m.def(
        "sigma2_general",
        [](const ProcessSpec& spec, bool mc_check) {
            formulas::Sigma2Options o;
            o.mc_check = mc_check;
            const auto r = formulas::sigma2_general(spec, o);
            py::dict d;
            d["value"] = r.value;
            d["quad_gap"] = r.quad_gap;
            d["mc_value"] = r.mc_value;
            d["mc_se"] = r.mc_se;
            d["within_3se"] = r.within_3se;
            return d;
        },
        py::arg("spec"), py::arg("mc_check") = false);
    m.def("r_lambda", &formulas::r_lambda, py::arg("lam"), py::arg("h"), py::arg("tol") = 1e-12);
    m.def(
        "r_rec",
        [](std::size_t mm, std::vector<double> alphas, double gamma, double H, double h) {
            return formulas::r_rec(mm, alphas, gamma, H, h);
        },
        py::arg("m"), py::arg("alphas"), py::arg("gamma"), py::arg("H"), py::arg("h"));
    m.def(
        "sigma_tilde2_b",
        [](std::size_t mm, std::vector<double> a, double g, double H) {
            return formulas::sigma_tilde2_b(mm, a, g, H);
        },
        py::arg("m"), py::arg("alphas"), py::arg("gamma"), py::arg("H"));
    m.def(
        "sigma_tilde2_w",
        [](std::size_t mm, std::vector<double> a, double lam) {
            return formulas::sigma_tilde2_w(mm, a, lam);
        },
        py::arg("m"), py::arg("alphas"), py::arg("lam"));
    m.def("chung_constant", &formulas::chung_constant, py::arg("tau"), py::arg("alpha"),
          py::arg("kappa"));
    m.def("lil_constant", &formulas::lil_constant, py::arg("tau"), py::arg("alpha"),
          py::arg("kappa"), py::arg("a_factor"));
    m.def(
        "kappa_known",
        [](double lam) {
            const auto k = formulas::kappa_known(lam);
            py::dict d;
            if (k.kind == formulas::KappaInfo::Kind::exact) {
                d["kind"] = "exact";
                d["value"] = k.value;
            } else if (k.kind == formulas::KappaInfo::Kind::bounds) {
                d["kind"] = "bounds";
                d["lo"] = k.lo;
                d["hi"] = k.hi;
            } else {
                d["kind"] = "unknown";
            }
            return d;
        },
        py::arg("lam"));
    m.def("brownian_sup_smallball_exact", &formulas::brownian_sup_smallball_exact, py::arg("eps"));

    // small-ball estimation
    m.def(
        "estimate_prob",
        [](const ProcessSpec& spec, double eps, std::size_t n_paths, double alpha,
           std::uint64_t seed, unsigned workers) {
            smallball::EstimateOptions o;
            o.n_paths = n_paths;
            o.seed = SeedSpec{seed, 0};
            o.workers = workers;
            const auto r = smallball::estimate_prob(spec, smallball::NormSpec::sup(alpha), eps, o);
            py::dict d;
            d["epsilon"] = r.epsilon;
            d["p_hat"] = r.p_hat;
            d["stderr"] = r.stderr_;
            d["p_hat_refined"] = r.p_hat_refined;
            d["grid_n"] = r.grid_n;
            d["successes"] = r.successes;
            return d;
        },
        py::arg("spec"), py::arg("eps"), py::arg("n_paths") = 20000, py::arg("alpha") = 0.0,
        py::arg("seed") = 0, py::arg("workers") = 0);

    // urn
    m.def(
        "rpw_params",
        [](double pw, double pb) {
            const auto c = urn::rpw_params({pw, pb, 1.0, 1.0});
            py::dict d;
            d["rho"] = c.rho;
            d["v"] = c.v;
            d["sigma1_sq"] = c.sigma1_sq;
            d["sigma2_sq"] = c.sigma2_sq;
            return d;
        },
        py::arg("p_w"), py::arg("p_b"));
    m.def(
        "urn_simulate",
        [](double pw, double pb, double w0, double b0, std::uint64_t n, std::uint64_t seed,
           std::uint64_t replica) {
            const auto t = urn::simulate({pw, pb, w0, b0}, n, SeedSpec{seed, 0}, replica);
            py::dict d;
            d["stages"] = t.stages;
            d["Y"] = t.y;
            d["N"] = t.n_draws;
            return d;
        },
        py::arg("p_w"), py::arg("p_b"), py::arg("w0") = 1.0, py::arg("b0") = 1.0,
        py::arg("n") = 1000, py::arg("seed") = 0, py::arg("replica") = 0);
}
