#pragma once
//
// JSON encodings:
//   matrix        {"rows", "cols", "re": [row-major], "im": [row-major]}
//   graded matrix matrix fields plus "epsilon" (a matrix)
//   spectral hom  {"epsilon", "support", "operator"}
//

#include "gradedk/graded.hpp"
#include "gradedk/numeric.hpp"
#include "gradedk/spectral_hom.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace gradedk {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const ComplexMatrix& m) {
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["re"] = re;
  out["im"] = im;
  return out;
}

inline ComplexMatrix matrix_from_json(const Json& j) {
  require(j.is_object() && j.contains("rows") && j.contains("cols") && j.contains("re"),
          "matrix JSON: expected object with rows, cols, re");
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  require(rows >= 0 && cols >= 0, "matrix JSON: negative dimension");
  const auto re = j.at("re").get<std::vector<double>>();
  const std::vector<double> im =
      j.contains("im") ? j.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
  const auto count = static_cast<std::size_t>(rows * cols);
  require(re.size() == count && im.size() == count, "matrix JSON: entry count mismatch");
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index c = 0; c < cols; ++c) {
      const auto k = static_cast<std::size_t>(i * cols + c);
      m(i, c) = Complex(re[k], im[k]);
    }
  require(all_finite(m), "matrix JSON: non-finite entry");
  return m;
}

inline Json graded_to_json(const GradedMatrix& a) {
  Json out = matrix_to_json(a.value);
  out["epsilon"] = matrix_to_json(a.grading.matrix());
  return out;
}

inline GradedMatrix graded_from_json(const Json& j) {
  require(j.contains("epsilon"), "graded matrix JSON: missing epsilon");
  return {matrix_from_json(j), GradingOperator(matrix_from_json(j.at("epsilon")))};
}

inline Json hom_to_json(const SpectralHom& phi) {
  Json out;
  out["epsilon"] = matrix_to_json(phi.grading().matrix());
  out["support"] = matrix_to_json(phi.support());
  out["operator"] = matrix_to_json(phi.op());
  return out;
}

inline SpectralHom hom_from_json(const Json& j) {
  require(j.contains("epsilon") && j.contains("support") && j.contains("operator"),
          "spectral hom JSON: expected epsilon, support, operator");
  return {GradingOperator(matrix_from_json(j.at("epsilon"))), matrix_from_json(j.at("support")),
          matrix_from_json(j.at("operator"))};
}

}  // namespace gradedk
