#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "attain/classify.hpp"
#include "attain/errors.hpp"
#include "attain/numlab.hpp"
#include "attain/report.hpp"
#include "attain/specfile.hpp"

namespace py = pybind11;
using namespace attain;

namespace {

// Rationals cross the boundary as "p/q" strings; the Python layer turns them
// into fractions.Fraction.
std::vector<std::string> strings(const std::vector<Rational>& values) {
  std::vector<std::string> out;
  for (const auto& v : values) out.push_back(v.to_string());
  return out;
}

SequenceSpec diagonal_of(const std::string& text) {
  const OperatorModel model = parse_spec_text(text);
  if (const auto* seq = std::get_if<SequenceSpec>(&model)) return *seq;
  if (const auto* shift = std::get_if<WeightedShift>(&model)) return shift->moduli();
  throw Error(ErrorCode::NotApplicable, "composite operators have no diagonal symbol");
}

std::vector<std::string> entries(const std::string& text, Index count) {
  const SequenceSpec seq = diagonal_of(text);
  std::vector<Rational> out;
  for (Index n = 1; n <= count; ++n) out.push_back(seq.entry(n));
  return strings(out);
}

std::vector<std::string> essential(const std::string& text) {
  const auto points = essential_spectrum(diagonal_of(text));
  return strings(std::vector<Rational>(points.begin(), points.end()));
}

py::dict decomposition(const std::string& text, Index count) {
  const SequenceSpec seq = diagonal_of(text);
  const ANVerdict verdict = classify_an(seq);
  if (!is_an(verdict)) throw Error(ErrorCode::NotApplicable, "operator is not AN");
  const IsAN& an = std::get<IsAN>(verdict);
  py::dict f;
  for (const auto& [n, value] : an.decomposition.f_entries()) f[py::int_(n)] = value.to_string();
  std::vector<Rational> kplus;
  for (Index n = 1; n <= count; ++n) kplus.push_back(an.decomposition.kplus(n));
  py::dict out;
  out["alpha"] = an.alpha.to_string();
  out["f"] = f;
  out["kplus"] = strings(kplus);
  return out;
}

std::vector<std::string> predicted(const std::string& text, std::size_t count) {
  const SequenceSpec seq = diagonal_of(text);
  return strings(predicted_norms(seq, build_witness(seq), count));
}

py::dict verify_witness(const std::string& text, std::size_t m_max, std::size_t n, double tol) {
  const SequenceSpec seq = diagonal_of(text);
  const WitnessCheck check = verify_witness_numeric(seq, build_witness(seq), m_max, n, tol);
  py::dict out;
  out["norms"] = check.norms;
  out["predicted"] = check.predicted;
  out["sup"] = check.sup;
  out["strictly_increasing"] = check.strictly_increasing;
  out["below_sup"] = check.below_sup;
  out["max_deviation"] = check.max_deviation;
  return out;
}

}  // namespace

PYBIND11_MODULE(_attain, m) {
  m.doc() = "Absolute norm attainment for positive diagonal, weighted shift and composite operators";

  // Module lifetime reference; the translator raises instances carrying `code`.
  static PyObject* error_type = nullptr;
  error_type = py::exception<Error>(m, "AttainError", PyExc_ValueError).inc_ref().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::reinterpret_borrow<py::object>(error_type)(e.what());
      instance.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, instance.ptr());
    }
  });

  m.def("classify_report", [](const std::string& text, const std::vector<std::size_t>& sizes, double tol) {
        return classify_report(parse_spec_text(text), sizes, tol).dump();
      }, py::arg("text"), py::arg("sizes"), py::arg("tol"));
  m.def("entries", &entries, py::arg("text"), py::arg("count"));
  m.def("essential_spectrum", &essential, py::arg("text"));
  m.def("decompose", &decomposition, py::arg("text"), py::arg("count"));
  m.def("predicted_norms", &predicted, py::arg("text"), py::arg("count"));
  m.def("verify_witness", &verify_witness, py::arg("text"), py::arg("m_max"), py::arg("n"), py::arg("tol"));

  m.def("jacobi_eigenvalues", [](const Eigen::MatrixXd& a) {
        const SymmetricEigen eig = jacobi_eigenvalues(TruncatedMatrix(a));
        return std::pair<Eigen::VectorXd, Eigen::MatrixXd>(eig.eigenvalues, eig.eigenvectors);
      }, py::arg("matrix"));
  m.def("matrix_sqrt", [](const Eigen::MatrixXd& a, double tol) {
        return matrix_sqrt(TruncatedMatrix(a), tol).values();
      }, py::arg("matrix"), py::arg("tol") = tolerance::kReconstruction);
  m.def("norm_on_subspace", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& basis) {
        const RestrictedNorm r = norm_on_subspace(TruncatedMatrix(a), SubspaceBasis(basis));
        return std::pair<double, Eigen::VectorXd>(r.norm, r.maximizer);
      }, py::arg("matrix"), py::arg("basis"));
}
