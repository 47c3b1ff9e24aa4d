#include "realnc/envelope.hpp"
#include "realnc/extremal.hpp"
#include "realnc/fixtures.hpp"
#include "realnc/json_io.hpp"
#include "realnc/verify.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

using namespace realnc;

namespace {

enum Exit { kOk = 0, kFalse = 1, kInput = 2, kNumerical = 3 };

struct Options {
  std::string system, point, atoms, function, direction, fixture, suite = "all", case_name, out = ".";
  std::vector<std::string> tol;
  std::uint64_t seed = 42;
  bool strict = false, json = false, serial = false, full = false;
  int max_level = 0;
};

Tolerances tolerances(const Options& o) {
  Tolerances t;
  for (const auto& a : o.tol) set_tolerance(t, a);
  if (o.max_level > 0) t.max_level = o.max_level;
  return t;
}

std::optional<Fixture> fixture_of(const Options& o) {
  if (o.fixture.empty()) return std::nullopt;
  return load_fixture(o.fixture);
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorKind::ParseError, std::string("missing ") + flag);
}

OperatorSystem load_system(const Options& o, const std::optional<Fixture>& fx, const Tolerances& tol) {
  if (!o.system.empty()) return system_from_json(read_json_file(o.system), tol);
  if (fx) return fx->system;
  throw Error(ErrorKind::ParseError, "missing --system (or --fixture)");
}

// With a fixture, --point / --function may name a built-in object instead of a file.
bool names_builtin(const std::optional<Fixture>& fx, const std::string& arg) {
  return fx && !std::filesystem::exists(arg);
}

ParsedPoint load_point(const Options& o, const std::optional<Fixture>& fx, const OperatorSystem& sys,
                       const Tolerances& tol) {
  require(o.point, "--point");
  if (names_builtin(fx, o.point)) return {fx->point(o.point), false, {}};
  return point_from_json(sys, read_json_file(o.point), tol);
}

std::vector<NcPoint> load_atoms(const Options& o, const OperatorSystem& sys, const Tolerances& tol) {
  require(o.atoms, "--atoms");
  return atoms_from_json(sys, read_json_file(o.atoms), tol);
}

NcPolynomial load_function(const Options& o, const std::optional<Fixture>& fx) {
  require(o.function, "--function");
  if (names_builtin(fx, o.function)) return fx->function(o.function);
  return polynomial_from_json(read_json_file(o.function));
}

std::string yes(bool b) { return b ? "true" : "false"; }

void print_verdict(const char* name, bool value, const Verdict& v) {
  std::cout << "  " << std::left << std::setw(30) << name << std::setw(6) << yes(value);
  if (v.threshold > 0.0) {
    std::cout << " measure " << v.measure << " vs " << v.threshold;
    if (std::isfinite(v.margin)) std::cout << " (margin " << v.margin << "x)";
    if (v.indeterminate) std::cout << " INDETERMINATE";
  }
  std::cout << "\n";
}

void print_flag(const char* name, bool value) {
  std::cout << "  " << std::left << std::setw(30) << name << yes(value) << "\n";
}

void print_classification(const Classification& c) {
  print_verdict("member", c.member, c.member_verdict);
  print_flag("irreducible_real", c.irreducible_real);
  print_flag("irreducible_complex", c.irreducible_complex);
  std::cout << "  " << std::left << std::setw(30) << "commutant_type" << to_string(c.commutant) << "\n";
  print_verdict("pure", c.pure, c.pure_verdict);
  print_verdict("maximal", c.maximal, c.maximal_verdict);
  print_flag("extreme", c.extreme);
  print_flag("extreme_in_complexification", c.extreme_in_complexification);
  if (c.indeterminate) std::cout << "  (some verdict is within 10x of its threshold)\n";
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_classify(const Options& o) {
  const Tolerances tol = tolerances(o);
  const auto fx = fixture_of(o);
  const OperatorSystem sys = load_system(o, fx, tol);
  const ParsedPoint p = load_point(o, fx, sys, tol);
  SystemContext ctx = make_context(sys, tol, o.seed);
  const Classification c = classify(ctx, p.point);
  std::optional<MaximalityCertificate> cm;
  if (p.is_complex) cm = complex_maximal(ctx, p.complex_point);
  if (o.json) {
    Json j = classification_to_json(c);
    if (cm) j["complex_maximal"] = {{"value", cm->value}, {"verdict", verdict_to_json(cm->verdict)}};
    emit(j);
  } else {
    std::cout << "level " << p.point.level << (p.is_complex ? " (realified complex point)" : "") << "\n";
    print_classification(c);
    if (cm) print_verdict("complex_maximal", cm->value, cm->verdict);
  }
  return o.strict && !c.extreme ? kFalse : kOk;
}

int cmd_dilate(const Options& o) {
  const Tolerances tol = tolerances(o);
  const auto fx = fixture_of(o);
  const OperatorSystem sys = load_system(o, fx, tol);
  const ParsedPoint p = load_point(o, fx, sys, tol);
  SystemContext ctx = make_context(sys, tol, o.seed);
  const DilationResult d = maximal_dilation(ctx, p.point, !o.full);
  if (o.json) {
    emit(dilation_to_json(d));
  } else {
    std::cout << "dilated level " << d.dilated.level << " from level " << p.point.level << ", Kraus rank " << d.kraus_rank
              << ", compression residual " << d.compression_residual << (d.minimality ? ", minimal" : "") << "\n";
    print_classification(d.maximal_certificate);
  }
  return o.strict && !d.maximal_certificate.maximal ? kFalse : kOk;
}

int cmd_envelope(const Options& o) {
  const Tolerances tol = tolerances(o);
  const auto fx = fixture_of(o);
  const OperatorSystem sys = load_system(o, fx, tol);
  const ParsedPoint p = load_point(o, fx, sys, tol);
  const NcPolynomial f = load_function(o, fx);
  const AtomSet atoms = make_atom_set(sys, load_atoms(o, sys, tol), f, tol);
  MatrixList grid;
  if (!o.direction.empty()) {
    grid.push_back(matrix_from_json(read_json_file(o.direction), "direction"));
  } else {
    grid = direction_grid(p.point.level * f.dim);
  }
  const std::vector<EnvelopeResult> rs = envelope_over_grid(sys, f, p.point, atoms, grid, tol);
  bool jensen_ok = true;
  Json arr = Json::array();
  for (const auto& r : rs) {
    const double jr = jensen_check(f, p.point, r);
    jensen_ok = jensen_ok && jr <= tol.opt;
    Json j = envelope_result_to_json(r);
    j["jensen_residual"] = jr;
    arr.push_back(j);
  }
  if (o.json) {
    emit(o.direction.empty() ? arr : arr[0]);
  } else {
    for (std::size_t k = 0; k < rs.size(); ++k) {
      std::cout << "direction " << k << ": envelope " << rs[k].value << ", <H, f(x)> - envelope " << rs[k].gap_to_f
                << ", atoms used " << rs[k].atoms_used << ", barycenter residual " << rs[k].barycenter_residual << "\n";
    }
  }
  // The boolean here is "f agrees with its envelope at x" (Jensen gap within opt).
  return o.strict && !jensen_ok ? kFalse : kOk;
}

int cmd_cstar_env(const Options& o) {
  const Tolerances tol = tolerances(o);
  const auto fx = fixture_of(o);
  const OperatorSystem sys = load_system(o, fx, tol);
  SystemContext ctx = make_context(sys, tol, o.seed);
  const EnvelopeReport r = shilov_and_envelope(ctx);
  if (o.json) {
    emit(envelope_report_to_json(r));
  } else {
    std::cout << "C*-envelope blocks:";
    for (const auto& b : r.blocks) {
      if (b.boundary) std::cout << " {size " << b.block_size << ", type " << to_string(b.division_type) << "}";
    }
    std::cout << "\nShilov ideal blocks:";
    for (int b : r.shilov_ideal_blocks) std::cout << " " << b;
    std::cout << "\n";
    for (const auto& b : r.inventory) {
      std::cout << "  block " << b.block << " (class " << b.cls << ", size " << b.block_size << ", type "
                << to_string(b.division_type) << "): " << (b.boundary ? "boundary" : "not boundary") << "\n";
    }
    std::cout << "dilation route:";
    for (const auto& b : r.dilation_route) std::cout << " {size " << b.block_size << ", type " << to_string(b.division_type) << "}";
    std::cout << "\ncross-check " << (r.cross_check_ok ? "ok" : "MISMATCH") << "\n";
  }
  if (!r.cross_check_ok) {
    std::cerr << "error: CrossCheckMismatch: Shilov route and dilation route disagree\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_hull(const Options& o) {
  const Tolerances tol = tolerances(o);
  const auto fx = fixture_of(o);
  const OperatorSystem sys = load_system(o, fx, tol);
  const ParsedPoint p = load_point(o, fx, sys, tol);
  const std::vector<NcPoint> atoms = load_atoms(o, sys, tol);
  const HullResult h = hull_membership(atoms, p.point, tol);
  if (o.json) {
    Json w = Json::array();
    for (const auto& b : h.blocks) w.push_back(matrix_to_json(b));
    emit({{"member", h.member}, {"verdict", verdict_to_json(h.verdict)}, {"t_star", h.t_star}, {"witness", w}});
  } else {
    print_verdict("in nc convex hull", h.member, h.verdict);
  }
  return o.strict && !h.member ? kFalse : kOk;
}

Json report_to_json(const VerifyReport& r) {
  Json fails = Json::array();
  for (const auto& f : r.failures) fails.push_back({{"case", f.case_name}, {"seed", f.seed}, {"message", f.message}});
  return {{"suite", r.suite},          {"cases", r.cases},    {"passed", r.passed},
          {"indeterminate", r.indeterminate}, {"failures", fails}, {"seconds", r.seconds}};
}

int cmd_verify(const Options& o) {
  if (!o.case_name.empty()) {
    const CaseOutcome c = run_case(o.case_name, o.seed);
    if (o.json) {
      emit({{"case", o.case_name}, {"seed", o.seed}, {"pass", c.pass}, {"indeterminate", c.indeterminate}, {"message", c.message}});
    } else {
      std::cout << o.case_name << " seed " << o.seed << ": " << (c.pass ? "pass" : "FAIL")
                << (c.indeterminate ? " (indeterminate)" : "") << (c.message.empty() ? "" : " - " + c.message) << "\n";
    }
    return c.pass ? kOk : kFalse;
  }
  const VerifyReport r = run_suite(o.suite, o.seed, !o.serial);
  if (o.json) {
    emit(report_to_json(r));
  } else {
    std::cout << "suite " << r.suite << " seed " << o.seed << ": " << r.passed << "/" << r.cases << " passed, "
              << r.indeterminate << " indeterminate, " << r.failures.size() << " failed (" << std::setprecision(3)
              << r.seconds << " s)\n";
    for (const auto& f : r.failures) {
      std::cout << "  FAIL " << f.case_name << ": " << f.message << "\n    replay: realnc verify --case " << f.case_name
                << " --seed " << f.seed << "\n";
    }
  }
  return r.failures.empty() ? kOk : kFalse;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

int cmd_examples(const Options& o) {
  std::vector<std::string> names = fixture_names();
  if (!o.fixture.empty()) names = {o.fixture};
  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  Json index = Json::array();
  for (const auto& name : names) {
    const Fixture fx = load_fixture(name);
    std::vector<std::string> files;
    auto put = [&](const std::string& file, const Json& j) {
      write_json(dir / file, j);
      files.push_back(file);
    };
    put(name + ".system.json", system_to_json(fx.system));
    Json atoms = Json::array();
    for (const auto& p : fx.points) {
      put(name + ".point." + p.name + ".json", point_to_json(p.point));
      atoms.push_back(point_to_json(p.point));
    }
    put(name + ".atoms.json", atoms);
    for (const auto& f : fx.functions) put(name + ".function." + f.name + ".json", polynomial_to_json(f.f));
    index.push_back({{"fixture", name}, {"description", fx.provenance}, {"files", files}});
    if (!o.json) {
      std::cout << name << ": " << fx.provenance << "\n";
      for (const auto& f : files) std::cout << "  " << (dir / f).string() << "\n";
    }
  }
  if (o.json) emit(index);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme points, dilations and envelopes of real operator systems"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool with_point) {
    c->add_option("--system", o.system, "system JSON file");
    c->add_option("--fixture", o.fixture, "built-in fixture: skew, quaternion, interval, segment3");
    if (with_point) c->add_option("--point", o.point, "point JSON file, or a fixture point name");
    c->add_option("--tol", o.tol, "tolerance override NAME=VALUE (repeatable)");
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--max-level", o.max_level, "largest admissible level");
    c->add_flag("--strict", o.strict, "exit 1 when the answer is false");
    c->add_flag("--json", o.json, "JSON output");
  };

  auto* classify_cmd = app.add_subcommand("classify", "purity, maximality and extremality of a point");
  common(classify_cmd, true);
  auto* dilate_cmd = app.add_subcommand("dilate", "maximal dilation of a point");
  common(dilate_cmd, true);
  dilate_cmd->add_flag("--full", o.full, "skip the cyclic-subspace restriction");
  auto* env_cmd = app.add_subcommand("envelope", "convex envelope of an nc function at a point");
  common(env_cmd, true);
  env_cmd->add_option("--function", o.function, "function JSON file, or a fixture function name");
  env_cmd->add_option("--atoms", o.atoms, "atom-set JSON file");
  env_cmd->add_option("--direction", o.direction, "direction matrix JSON file (default: the direction grid)");
  auto* cstar_cmd = app.add_subcommand("cstar-env", "C*-envelope and Shilov ideal");
  common(cstar_cmd, false);
  auto* hull_cmd = app.add_subcommand("hull", "nc convex hull membership");
  common(hull_cmd, true);
  hull_cmd->add_option("--atoms", o.atoms, "atom-set JSON file");
  auto* verify_cmd = app.add_subcommand("verify", "randomized property suites");
  verify_cmd->add_option("--suite", o.suite, "systems, sdp, structure, extremal, envelope or all");
  verify_cmd->add_option("--case", o.case_name, "replay a single case with its instance seed");
  verify_cmd->add_option("--seed", o.seed, "master seed (instance seed with --case)");
  verify_cmd->add_flag("--serial", o.serial, "run instances serially");
  verify_cmd->add_flag("--json", o.json, "JSON output");
  auto* examples_cmd = app.add_subcommand("examples", "write fixture files");
  examples_cmd->add_option("--fixture", o.fixture, "one fixture (default: all)");
  examples_cmd->add_option("--out", o.out, "output directory");
  examples_cmd->add_flag("--json", o.json, "JSON index output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*classify_cmd) return cmd_classify(o);
    if (*dilate_cmd) return cmd_dilate(o);
    if (*env_cmd) return cmd_envelope(o);
    if (*cstar_cmd) return cmd_cstar_env(o);
    if (*hull_cmd) return cmd_hull(o);
    if (*verify_cmd) return cmd_verify(o);
    if (*examples_cmd) return cmd_examples(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numerical(e.kind()) ? kNumerical : kInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kInput;
}
