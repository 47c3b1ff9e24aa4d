#pragma once

#include "realnc/envelope.hpp"
#include "realnc/extremal.hpp"
#include "realnc/sdp.hpp"
#include "realnc/systems.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace realnc {

using Json = nlohmann::json;

/// Reads and parses a JSON file; ParseError on any failure.
Json read_json_file(const std::string& path);

Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j, const std::string& what = "matrix");

Json system_to_json(const OperatorSystem& sys);
OperatorSystem system_from_json(const Json& j, const Tolerances& tol = {});

/// A point file may carry "imag", in which case it denotes a complex point.
struct ParsedPoint {
  NcPoint point;  // the real point, or the realification of the complex one
  bool is_complex = false;
  ComplexNcPoint complex_point;
};

Json point_to_json(const NcPoint& x);
Json point_to_json(const ComplexNcPoint& z);
ParsedPoint point_from_json(const OperatorSystem& sys, const Json& j, const Tolerances& tol = {});
std::vector<NcPoint> atoms_from_json(const OperatorSystem& sys, const Json& j, const Tolerances& tol = {});

/// {"terms": [{"word": [...], "coeff": r}]}, or {"dim": k, "entries": [[terms of p_11], ...]} row-major.
Json polynomial_to_json(const NcPolynomial& f);
NcPolynomial polynomial_from_json(const Json& j);

Json verdict_to_json(const Verdict& v);
Json classification_to_json(const Classification& c);
Json dilation_to_json(const DilationResult& d);
Json envelope_report_to_json(const EnvelopeReport& r);
Json envelope_result_to_json(const EnvelopeResult& r);

}  // namespace realnc
