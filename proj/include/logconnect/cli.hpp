#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "normalization.hpp"

namespace logconnect::cli {

using io::Json;

inline constexpr double kDefaultTolerance = 1e-10;

inline const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v{"check-flat",    "residues",       "monodromy",        "projectivize",
                                          "reconstruct",   "lift-trace-free", "predicates",      "pullback",
                                          "normalize",     "realize-local",  "realize-fuchsian", "lift-rep",
                                          "exponent"};
  return v;
}

struct Options {
  std::string verb;
  std::string input;
  std::optional<double> tol;
  std::size_t order = 10;
  std::optional<unsigned> nu;
  std::size_t var = 0;
  std::string loops;
  std::string basepoint;
  bool projective = false;
  std::string output = "-";
};

struct Verdict {
  std::string status = "ok";
  std::string verb;
  Json payload = Json::object();
  std::vector<std::string> diagnostics;

  int exit_code() const { return status == "ok" ? 0 : status == "fail" ? 1 : 2; }

  Json to_json() const {
    Json out = Json::object();
    out["status"] = status;
    out["verb"] = verb;
    out["payload"] = payload;
    out["diagnostics"] = diagnostics;
    return out;
  }
};

/// --tol, else LOGCONNECT_TOL, else the built-in default.
inline double tolerance(const Options& o) {
  if (o.tol) return *o.tol;
  if (const char* env = std::getenv("LOGCONNECT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) raise(ErrorCode::InvalidArgument, "LOGCONNECT_TOL is not a positive number");
    return v;
  }
  return kDefaultTolerance;
}

inline Json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::InvalidArgument, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("/", std::string("malformed JSON: ") + e.what());
  }
}

inline Complex parse_point(const std::string& text) {
  std::stringstream ss(text);
  double re = 0.0;
  double im = 0.0;
  char comma = 0;
  ss >> re;
  if (ss.fail()) raise(ErrorCode::InvalidArgument, "malformed point '" + text + "'");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) raise(ErrorCode::InvalidArgument, "malformed point '" + text + "'");
  }
  return {re, im};
}

namespace detail {

inline Json matrices_json(const std::vector<ComplexMatrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(io::matrix_json(m));
  return out;
}

template <class Element>
Json rep_json(const MonodromyRep<Element>& rep, bool with_relation) {
  auto mat = [](const Element& e) -> ComplexMatrix {
    if constexpr (std::is_same_v<Element, ProjectiveClass>) return e.canonical();
    else return e;
  };
  Json out = Json::object();
  out["convention"] = "antirepresentation";
  out["projective"] = std::is_same_v<Element, ProjectiveClass>;
  out["basepoint"] = io::complex_json(rep.basepoint);
  Json loops = Json::array();
  for (const auto& l : rep.loops) loops.push_back(io::to_json(l));
  out["loops"] = std::move(loops);
  Json ms = Json::array();
  for (const auto& e : rep.matrices) ms.push_back(io::matrix_json(mat(e)));
  out["matrices"] = std::move(ms);
  if (rep.infinity) out["infinity"] = io::matrix_json(mat(*rep.infinity));
  if (!rep.product_order.empty()) out["product_order"] = rep.product_order;
  if (with_relation) out["relation"] = relation_check(rep);
  return out;
}

inline MonodromyRep<ProjectiveClass> project(const MonodromyRep<ComplexMatrix>& lin) {
  return logconnect::detail::project(lin);
}

inline std::vector<Complex> slice_poles(const LogConnection& c) {
  std::vector<Complex> poles;
  for (const auto& b : c.divisor()) poles.push_back(b.at.to_complex());
  return poles;
}

inline Verdict monodromy(const Options& o, const io::System& sys, Verdict v) {
  const double tol = tolerance(o);
  std::optional<Complex> base;
  if (!o.basepoint.empty()) base = parse_point(o.basepoint);
  const ChartSlice slice{o.var, {}};
  if (const auto* r = std::get_if<RiccatiSystem>(&sys)) {
    if (!o.loops.empty()) {
      v.payload = rep_json(projective_monodromy(*r, io::parse_loops(load(o.loops)), tol, slice), false);
      return v;
    }
    if (r->dim != 1) raise(ErrorCode::InvalidArgument, "multivariable Riccati systems need --loops");
    const LogConnection lin = reconstruct(*r, zero_form(1));
    const auto rep = projective_monodromy(*r, standard_loops(slice_poles(lin), base), tol);
    v.payload = rep_json(rep, true);
    if (!v.payload["relation"].get<bool>()) v.status = "fail";
    return v;
  }
  const LogConnection c = io::to_connection(sys);
  MonodromyRep<ComplexMatrix> rep;
  bool sphere = false;
  if (!o.loops.empty()) {
    rep = monodromy_rep(c, io::parse_loops(load(o.loops)), tol, slice);
  } else if (std::holds_alternative<LocalModel>(sys)) {
    rep = local_monodromy(c, tol);
  } else if (c.dim() == 1) {
    rep = monodromy_rep(c, standard_loops(slice_poles(c), base), tol);
    sphere = true;
  } else {
    raise(ErrorCode::InvalidArgument, "multivariable connections need --loops");
  }
  if (o.projective) v.payload = rep_json(project(rep), sphere);
  else v.payload = rep_json(rep, sphere);
  if (sphere && !v.payload["relation"].get<bool>()) v.status = "fail";
  return v;
}

inline Json predicate_item(const std::string& name, const ComplexMatrix& m) {
  Json item = Json::object();
  item["name"] = name;
  const bool pm = property_Pm(m);
  item["P_m"] = pm;
  item["scaled_log_nonresonant"] = nonresonant(double(m.rows()) * mat_log_normalized(m));
  return item;
}

inline Verdict predicates(const Json& doc, Verdict v) {
  Json items = Json::array();
  bool all = true;
  if (doc.is_object() && doc.contains("type")) {
    const LogConnection c = io::to_connection(io::parse_system(doc));
    for (std::size_t b = 0; b < c.divisor().size(); ++b) {
      Json item = Json::object();
      item["var"] = c.divisor()[b].var;
      item["at"] = io::scalar_json(c.divisor()[b].at);
      const bool nr = nonresonant(residue(c, b));
      item["nonresonant"] = nr;
      all = all && nr;
      items.push_back(std::move(item));
    }
  } else if (doc.is_object() && doc.contains("generators")) {
    const auto p = io::parse_presentation(doc);
    for (std::size_t g = 0; g < p.generators().size(); ++g) {
      items.push_back(predicate_item(p.names()[g], p.generators()[g].rep()));
      all = all && items.back()["P_m"].get<bool>();
    }
  } else {
    const Json& list = io::detail::array(io::detail::field(doc, "", "matrices"), "/matrices");
    for (std::size_t i = 0; i < list.size(); ++i) {
      items.push_back(predicate_item(std::to_string(i), io::parse_matrix(list[i], "/matrices/" + std::to_string(i))));
      all = all && items.back()["P_m"].get<bool>();
    }
  }
  v.payload["items"] = std::move(items);
  if (!all) v.status = "fail";
  return v;
}

inline Verdict normalize(const Options& o, const LogConnection& c, Verdict v) {
  auto parts = split_residue_and_holomorphic_part(c);
  const ComplexMatrix a = parts.front();
  parts.erase(parts.begin());
  const GaugeSeries g = poincare_normalize(a, parts, o.order);
  const auto defect = normalization_defect(a, parts, g);
  double worst = 0.0;
  for (std::size_t k = 0; k <= o.order && k < defect.size(); ++k) worst = std::max(worst, defect[k].norm());
  double scale = 1.0;
  for (const auto& c : g.coefficients) scale = std::max(scale, c.norm());
  v.payload["order"] = o.order;
  v.payload["residue"] = io::matrix_json(a);
  v.payload["gauge"] = matrices_json(g.coefficients);
  v.payload["defect_norm"] = worst;
  if (worst > 1e-8 * scale * (1.0 + a.norm())) {
    v.status = "fail";
    v.diagnostics.push_back("gauge leaves terms below the truncation order");
  }
  return v;
}

inline Verdict lift_rep(const Options& o, const ProjectivePresentation& p, Verdict v) {
  const int nu = int(o.nu.value_or(1));
  const auto report = verify_lift_after_power(p, nu);
  v.payload["nu"] = nu;
  v.payload["before"] = io::to_json(report.before);
  v.payload["after"] = io::to_json(report.after);
  try {
    v.payload["commuting"] = io::to_json(lift_commuting(p.generators()));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotProjectivelyCommuting) throw;
    v.payload["commuting"] = nullptr;
    v.diagnostics.push_back("generators do not commute projectively; commutator scalars omitted");
  }
  if (!report.after.success) v.status = "fail";
  return v;
}

}  // namespace detail

/// Runs one verb and returns its verdict; library errors become status error.
inline Verdict dispatch(const Options& o) {
  Verdict v;
  v.verb = o.verb;
  try {
    const Json doc = load(o.input);
    const std::string& verb = o.verb;
    if (verb == "check-flat") {
      const auto sys = io::parse_system(doc);
      bool flat = false;
      if (const auto* r = std::get_if<RiccatiSystem>(&sys)) flat = flatness_check(reconstruct(*r, io::parse_trace(doc, r->dim)));
      else flat = flatness_check(io::to_connection(sys));
      v.payload["flat"] = flat;
      if (!flat) v.status = "fail";
    } else if (verb == "residues") {
      const auto sys = io::parse_system(doc);
      const LogConnection c = io::to_connection(sys);
      Json list = Json::array();
      auto add = [&](Json at, std::size_t var, const ComplexMatrix& m) {
        Json item = Json::object();
        item["var"] = var;
        item["at"] = std::move(at);
        item["matrix"] = io::matrix_json(m);
        Json ev = Json::array();
        for (Complex z : eigenvalues(m)) ev.push_back(io::complex_json(z));
        item["eigenvalues"] = std::move(ev);
        list.push_back(std::move(item));
      };
      for (std::size_t b = 0; b < c.divisor().size(); ++b)
        add(io::scalar_json(c.divisor()[b].at), c.divisor()[b].var, residue(c, b));
      if (std::holds_alternative<FuchsianSystem>(sys)) add(Json("infinity"), 0, residue(c, kInfinityBranch));
      v.payload["residues"] = std::move(list);
    } else if (verb == "monodromy") {
      v = detail::monodromy(o, io::parse_system(doc), v);
    } else if (verb == "projectivize") {
      const LogConnection c = io::to_connection(io::parse_system(doc));
      Json r = io::to_json(projectivize(c));
      r["trace"] = io::form_json(trace(c), c.dim());
      v.payload = std::move(r);
    } else if (verb == "reconstruct") {
      const auto r = io::parse_riccati(doc);
      v.payload = io::to_json(reconstruct(r, io::parse_trace(doc, r.dim)));
    } else if (verb == "lift-trace-free") {
      const auto sys = io::parse_system(doc);
      const RiccatiSystem r = std::holds_alternative<RiccatiSystem>(sys) ? std::get<RiccatiSystem>(sys)
                                                                         : projectivize(io::to_connection(sys));
      v.payload = io::to_json(trace_free_lift(r));
    } else if (verb == "predicates") {
      v = detail::predicates(doc, v);
    } else if (verb == "pullback") {
      if (!o.nu) raise(ErrorCode::InvalidArgument, "pullback needs --nu");
      v.payload = io::to_json(pullback_power(io::to_connection(io::parse_system(doc)), o.var, *o.nu));
    } else if (verb == "normalize") {
      v = detail::normalize(o, io::to_connection(io::parse_system(doc)), v);
    } else if (verb == "realize-local") {
      v.payload = io::to_json(local_realize(io::parse_presentation(doc).generators(), tolerance(o)));
    } else if (verb == "realize-fuchsian") {
      v.payload = io::to_json(realize_fuchsian(io::parse_presentation(doc), tolerance(o)));
    } else if (verb == "lift-rep") {
      v = detail::lift_rep(o, io::parse_presentation(doc), v);
    } else if (verb == "exponent") {
      v.payload["nu"] = lifting_exponent(io::parse_presentation(doc));
    } else {
      raise(ErrorCode::InvalidArgument, "unknown verb " + verb);
    }
  } catch (const SchemaError& e) {
    v.status = "error";
    v.payload = Json::object();
    v.payload["error"] = std::string(error_name(e.code()));
    v.payload["pointer"] = e.pointer();
    v.diagnostics.push_back(e.what());
  } catch (const Error& e) {
    v.status = "error";
    v.payload = Json::object();
    v.payload["error"] = std::string(error_name(e.code()));
    v.diagnostics.push_back(e.what());
  }
  return v;
}

/// Parses arguments (without the program name), runs the verb and writes
/// the verdict. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flat logarithmic connections: monodromy, projectivization and lifting"};
  app.name("logconnect");
  Options o;
  double tol = 0.0;
  unsigned nu = 0;
  app.add_option("verb", o.verb, "Operation to run")->required()->check(CLI::IsMember(verbs()));
  app.add_option("input", o.input, "JSON input file")->required();
  auto* tol_opt = app.add_option("--tol", tol, "Tolerance (default 1e-10, or LOGCONNECT_TOL)")->check(CLI::PositiveNumber);
  app.add_option("--order", o.order, "Truncation order for normalize")->check(CLI::Range(0, 200));
  auto* nu_opt = app.add_option("--nu", nu, "Covering degree / power")->check(CLI::Range(1, 1000));
  app.add_option("--var", o.var, "Chart variable index");
  app.add_option("--loops", o.loops, "Loop file overriding the standard loops");
  app.add_option("--basepoint", o.basepoint, "Basepoint as re[,im]");
  app.add_flag("--projective", o.projective, "Report projective classes");
  app.add_option("--output", o.output, "Output path, - for standard output");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "logconnect: " << e.what() << "\n" << app.help();
    return 2;
  }
  if (*tol_opt) o.tol = tol;
  if (*nu_opt) o.nu = nu;

  Verdict v = dispatch(o);
  const std::string text = v.to_json().dump() + "\n";
  if (o.output == "-") {
    out << text;
  } else {
    std::ofstream file(o.output, std::ios::binary);
    if (!file) {
      err << "logconnect: cannot write " << o.output << "\n";
      return 2;
    }
    file << text;
  }
  for (const auto& d : v.diagnostics) err << d << "\n";
  return v.exit_code();
}

}  // namespace logconnect::cli
