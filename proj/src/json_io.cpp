#include "realnc/json_io.hpp"

#include <cmath>
#include <fstream>

namespace realnc {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

const Json& field(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) bad(ctx + ": missing \"" + key + "\"");
  return j.at(key);
}

int positive_int(const Json& j, const std::string& ctx) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) bad(ctx + " must be a positive integer");
  return j.get<int>();
}

MatrixList matrix_list(const Json& j, const std::string& ctx) {
  if (!j.is_array()) bad(ctx + " must be an array of matrices");
  MatrixList out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(matrix_from_json(j[k], ctx + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<NcTerm> terms_from_json(const Json& j, const std::string& ctx) {
  if (!j.is_array()) bad(ctx + " must be an array of terms");
  std::vector<NcTerm> out;
  for (const auto& t : j) {
    NcTerm term;
    const Json& w = field(t, "word", ctx);
    if (!w.is_array()) bad(ctx + ": word must be an array");
    for (const auto& l : w) {
      if (!l.is_number_integer()) bad(ctx + ": word letters must be integers");
      term.word.push_back(l.get<int>());
    }
    const Json& c = field(t, "coeff", ctx);
    if (!c.is_number() || !std::isfinite(c.get<double>())) bad(ctx + ": coeff must be a finite number");
    term.coeff = c.get<double>();
    out.push_back(term);
  }
  return out;
}

Json terms_to_json(const std::vector<NcTerm>& terms) {
  Json arr = Json::array();
  for (const auto& t : terms) arr.push_back({{"word", t.word}, {"coeff", t.coeff}});
  return arr;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    bad(path + ": " + e.what());
  }
}

Json matrix_to_json(const Matrix& a) {
  Json rows = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) bad(what + " must be a non-empty array of rows");
  const std::size_t r = j.size();
  if (!j[0].is_array() || j[0].empty()) bad(what + ": rows must be non-empty arrays");
  const std::size_t c = j[0].size();
  Matrix a(static_cast<Index>(r), static_cast<Index>(c));
  for (std::size_t i = 0; i < r; ++i) {
    if (!j[i].is_array() || j[i].size() != c) bad(what + ": ragged rows");
    for (std::size_t k = 0; k < c; ++k) {
      const Json& v = j[i][k];
      if (!v.is_number()) bad(what + ": entries must be numbers");
      const double d = v.get<double>();
      if (!std::isfinite(d)) bad(what + ": entries must be finite");
      a(static_cast<Index>(i), static_cast<Index>(k)) = d;
    }
  }
  return a;
}

Json system_to_json(const OperatorSystem& sys) {
  Json gens = Json::array();
  for (const auto& g : sys.generators) gens.push_back({{"matrix", matrix_to_json(g.matrix)}, {"sign", g.sign}});
  Json j = {{"ambient_dim", sys.ambient_dim}, {"generators", gens}};
  if (!sys.label.empty()) j["label"] = sys.label;
  return j;
}

OperatorSystem system_from_json(const Json& j, const Tolerances& tol) {
  const int m = positive_int(field(j, "ambient_dim", "system"), "ambient_dim");
  const Json& gens = field(j, "generators", "system");
  if (!gens.is_array()) bad("system: generators must be an array");
  std::vector<Generator> raw;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const std::string ctx = "generators[" + std::to_string(k) + "]";
    Generator g;
    g.matrix = matrix_from_json(field(gens[k], "matrix", ctx), ctx);
    const Json& s = field(gens[k], "sign", ctx);
    if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1)) bad(ctx + ": sign must be +1 or -1");
    g.sign = s.get<int>();
    raw.push_back(g);
  }
  std::string label;
  if (j.contains("label") && j["label"].is_string()) label = j["label"].get<std::string>();
  return validate_system(m, raw, tol, label);
}

Json point_to_json(const NcPoint& x) {
  Json imgs = Json::array();
  for (const auto& a : x.images) imgs.push_back(matrix_to_json(a));
  return {{"level", x.level}, {"images", imgs}};
}

Json point_to_json(const ComplexNcPoint& z) {
  Json re = Json::array(), im = Json::array();
  for (const auto& a : z.real_part) re.push_back(matrix_to_json(a));
  for (const auto& a : z.imag_part) im.push_back(matrix_to_json(a));
  return {{"level", z.level}, {"images", re}, {"imag", im}};
}

ParsedPoint point_from_json(const OperatorSystem& sys, const Json& j, const Tolerances& tol) {
  ParsedPoint out;
  const int n = positive_int(field(j, "level", "point"), "level");
  MatrixList imgs = matrix_list(field(j, "images", "point"), "images");
  for (const auto& a : imgs) {
    if (a.rows() != n || a.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "point images must be " + std::to_string(n) + "x" + std::to_string(n));
    }
  }
  if (j.contains("imag")) {
    MatrixList im = matrix_list(j["imag"], "imag");
    if (im.size() != imgs.size()) throw Error(ErrorKind::DimensionMismatch, "imag and images differ in count");
    for (const auto& a : im) {
      if (a.rows() != n || a.cols() != n) throw Error(ErrorKind::DimensionMismatch, "imag images have the wrong size");
    }
    const ComplexifiedPoint cp = complexify_point(sys, imgs, im, tol);
    out.is_complex = true;
    out.complex_point = cp.z;
    out.point = cp.realified;
    return out;
  }
  out.point = make_point(sys, std::move(imgs), tol);
  return out;
}

std::vector<NcPoint> atoms_from_json(const OperatorSystem& sys, const Json& j, const Tolerances& tol) {
  if (!j.is_array() || j.empty()) bad("atoms must be a non-empty array of points");
  std::vector<NcPoint> out;
  for (const auto& p : j) {
    ParsedPoint pp = point_from_json(sys, p, tol);
    if (pp.is_complex) bad("atoms must be real points");
    out.push_back(pp.point);
  }
  return out;
}

Json polynomial_to_json(const NcPolynomial& f) {
  if (f.dim == 1) return {{"terms", terms_to_json(f.entries.at(0))}};
  Json entries = Json::array();
  for (const auto& e : f.entries) entries.push_back(terms_to_json(e));
  return {{"dim", f.dim}, {"entries", entries}};
}

NcPolynomial polynomial_from_json(const Json& j) {
  if (!j.is_object()) bad("function must be an object");
  if (j.contains("terms")) return NcPolynomial::scalar(terms_from_json(j["terms"], "terms"));
  NcPolynomial f;
  f.dim = positive_int(field(j, "dim", "function"), "dim");
  const Json& e = field(j, "entries", "function");
  if (!e.is_array() || e.size() != static_cast<std::size_t>(f.dim * f.dim)) bad("function: entries must have dim^2 items");
  for (std::size_t k = 0; k < e.size(); ++k) f.entries.push_back(terms_from_json(e[k], "entries[" + std::to_string(k) + "]"));
  return f;
}

Json verdict_to_json(const Verdict& v) {
  Json j = {{"value", v.value},
            {"indeterminate", v.indeterminate},
            {"measure", v.measure},
            {"threshold", v.threshold}};
  j["margin"] = std::isfinite(v.margin) ? Json(v.margin) : Json(nullptr);
  return j;
}

Json classification_to_json(const Classification& c) {
  return {{"member", c.member},
          {"irreducible_real", c.irreducible_real},
          {"irreducible_complex", c.irreducible_complex},
          {"pure", c.pure},
          {"maximal", c.maximal},
          {"extreme", c.extreme},
          {"extreme_in_complexification", c.extreme_in_complexification},
          {"commutant_type", to_string(c.commutant)},
          {"indeterminate", c.indeterminate},
          {"margins",
           {{"member", verdict_to_json(c.member_verdict)},
            {"pure", verdict_to_json(c.pure_verdict)},
            {"maximal", verdict_to_json(c.maximal_verdict)}}}};
}

Json dilation_to_json(const DilationResult& d) {
  return {{"dilated", point_to_json(d.dilated)},
          {"isometry", matrix_to_json(d.isometry.matrix)},
          {"maximal_certificate", classification_to_json(d.maximal_certificate)},
          {"minimality", d.minimality},
          {"kraus_rank", d.kraus_rank},
          {"compression_residual", d.compression_residual}};
}

Json envelope_report_to_json(const EnvelopeReport& r) {
  auto classes = [](const std::vector<EnvelopeClass>& cs) {
    Json arr = Json::array();
    for (const auto& c : cs) {
      arr.push_back({{"block_size", c.block_size}, {"division_type", to_string(c.division_type)}, {"boundary", c.boundary}});
    }
    return arr;
  };
  Json inv = Json::array();
  for (const auto& b : r.inventory) {
    inv.push_back({{"block", b.block},
                   {"class", b.cls},
                   {"block_size", b.block_size},
                   {"division_type", to_string(b.division_type)},
                   {"boundary", b.boundary},
                   {"verdict", verdict_to_json(b.verdict)}});
  }
  Json gens = Json::array();
  for (const auto& g : r.envelope_generators) gens.push_back(matrix_to_json(g));
  return {{"blocks", classes(r.blocks)},
          {"inventory", inv},
          {"envelope_generators", gens},
          {"shilov_ideal_blocks", r.shilov_ideal_blocks},
          {"dilation_route", classes(r.dilation_route)},
          {"cross_check_ok", r.cross_check_ok}};
}

Json envelope_result_to_json(const EnvelopeResult& r) {
  Json w = Json::array();
  for (const auto& b : r.witness) w.push_back(matrix_to_json(b));
  return {{"value", r.value},
          {"direction", matrix_to_json(r.direction)},
          {"witness", w},
          {"atoms_used", r.atoms_used},
          {"gap_to_f", r.gap_to_f},
          {"barycenter_residual", r.barycenter_residual}};
}

}  // namespace realnc
