#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "multispec/cli.hpp"
#include "multispec/ensemble.hpp"
#include "multispec/errors.hpp"
#include "multispec/moment_engine.hpp"
#include "multispec/sampler.hpp"
#include "multispec/spec_io.hpp"
#include "multispec/spectral.hpp"
#include "multispec/studies.hpp"
#include "multispec/walk_oracle.hpp"

namespace py = pybind11;
using namespace multispec;

namespace {

EnsembleSpec parse(const std::string& spec_json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(spec_json);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(SpecErrorKind::Malformed, e.what());
  }
  return spec_from_json(doc);
}

std::vector<std::string> fractions(const std::vector<Rational>& values) {
  std::vector<std::string> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_fraction_string(v));
  return out;
}

StudyOptions study_options(const std::string& method, int probes) {
  StudyOptions o;
  o.method = parse_moment_method(method);
  o.probes = probes;
  return o;
}

}  // namespace

PYBIND11_MODULE(_multispec, m) {
  m.doc() = "Moments of sparse multi-component random matrices (native core)";
  m.attr("__version__") = MULTISPEC_VERSION;

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<GuardError>(m, "GuardError", PyExc_RuntimeError);

  m.def("validate_spec", [](const std::string& spec) { return spec_to_json(parse(spec)).dump(); });

  m.def("block_sizes", [](int n, const std::string& spec) { return assign_components(n, parse(spec)).block_sizes; },
        py::arg("n"), py::arg("spec"));

  m.def("limiting_moments",
        [](const std::string& spec, int max_order) { return fractions(limiting_moments(parse(spec), max_order).values); },
        py::arg("spec"), py::arg("max_order"));

  m.def("oracle_moment",
        [](const std::string& spec, int order, int max_length) {
          return to_fraction_string(oracle_moment(parse(spec), order, max_length));
        },
        py::arg("spec"), py::arg("order"), py::arg("max_length") = kDefaultMaxWalkLength);

  m.def("essential_walks",
        [](const std::string& spec_json, int length, int max_length) {
          const EnsembleSpec spec = parse(spec_json);
          std::vector<std::pair<std::string, std::string>> out;
          for (const Walk& w : enumerate_essential_walks(spec, length, max_length)) {
            out.emplace_back(w.to_string(), to_fraction_string(walk_weight(w, spec)));
          }
          return out;
        },
        py::arg("spec"), py::arg("length"), py::arg("max_length") = kDefaultMaxWalkLength);

  m.def("verify_first_splitting",
        [](const std::string& spec, int l, int r) { return verify_first_splitting(parse(spec), l, r).holds(); },
        py::arg("spec"), py::arg("l"), py::arg("r"));
  m.def("verify_second_splitting",
        [](const std::string& spec, int f, int u) { return verify_second_splitting(parse(spec), f, u).holds(); },
        py::arg("spec"), py::arg("f"), py::arg("u"));

  m.def("cluster_pass_count",
        [](int j, const std::vector<int>& i_list) { return cluster_pass_count(j, i_list).get_str(); });
  m.def("brute_force_cluster_count",
        [](int j, const std::vector<int>& i_list, int limit) {
          return brute_force_cluster_count(j, i_list, limit).get_str();
        },
        py::arg("j"), py::arg("i_list"), py::arg("limit") = kMaxBruteForceCluster);

  m.def("sample_matrix",
        [](const std::string& spec, int n, const std::string& law, std::uint64_t seed) {
          const WeightedSparseMatrix a = sample_matrix(parse(spec), n, WeightLaw::parse(law), seed);
          std::vector<std::tuple<int, int, double>> out;
          for (const auto& e : a.entries()) out.emplace_back(e.i, e.j, e.w);
          return out;
        },
        py::arg("spec"), py::arg("n"), py::arg("law"), py::arg("seed"));

  m.def("sample_moments",
        [](const std::string& spec, int n, const std::string& law, std::uint64_t seed, int k_max,
           const std::string& method, int probes) {
          const WeightedSparseMatrix a = sample_matrix(parse(spec), n, WeightLaw::parse(law), seed);
          switch (parse_moment_method(method)) {
            case MomentMethod::ExactTrace:
              return empirical_moments_exact(a, k_max);
            case MomentMethod::Eigen:
              return empirical_moments_eigen(a, k_max).moments;
            case MomentMethod::Hutchinson:
              break;
          }
          return empirical_moments_hutchinson(a, k_max, probes, seed).mean;
        },
        py::arg("spec"), py::arg("n"), py::arg("law"), py::arg("seed"), py::arg("k_max"),
        py::arg("method") = "exact", py::arg("probes") = 64);

  m.def("convergence_study",
        [](const std::string& spec, const std::string& law, const std::vector<int>& n_list, int k_max, int trials,
           std::uint64_t seed, const std::string& method, int probes) {
          py::list rows;
          for (const auto& r : moment_convergence_study(parse(spec), WeightLaw::parse(law), n_list, k_max, trials,
                                                        seed, study_options(method, probes))) {
            py::dict d;
            d["n"] = r.n;
            d["k"] = r.k;
            d["mean"] = r.mean;
            d["stderr"] = r.standard_error;
            d["limit"] = to_fraction_string(r.limit);
            d["delta"] = r.delta;
            rows.append(d);
          }
          return rows;
        },
        py::arg("spec"), py::arg("law"), py::arg("n_list"), py::arg("k_max"), py::arg("trials"), py::arg("seed"),
        py::arg("method") = "exact", py::arg("probes") = 64);

  m.def("correlator",
        [](const std::string& spec, const std::string& law, int n, int k, int mm, int trials, std::uint64_t seed) {
          const CorrelatorEstimate c = correlator_estimate(parse(spec), WeightLaw::parse(law), n, k, mm, trials, seed);
          return std::make_pair(c.value, c.standard_error);
        },
        py::arg("spec"), py::arg("law"), py::arg("n"), py::arg("k"), py::arg("m"), py::arg("trials"),
        py::arg("seed"));

  m.def("carleman",
        [](const std::string& spec, int k_range) {
          const GrowthReport r = carleman_diagnostic(limiting_moments(parse(spec), 2 * k_range), k_range);
          py::dict d;
          d["gamma"] = r.gamma;
          d["gamma_stderr"] = r.gamma_stderr;
          d["threshold"] = r.threshold;
          d["degenerate"] = r.degenerate;
          d["consistent"] = r.consistent;
          return d;
        },
        py::arg("spec"), py::arg("k_range") = 8);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
