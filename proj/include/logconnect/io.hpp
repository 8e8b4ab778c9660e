#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "lifting.hpp"
#include "monodromy.hpp"
#include "projective.hpp"

namespace logconnect::io {

using Json = nlohmann::ordered_json;

/// Parsed system description.
using System = std::variant<FuchsianSystem, LocalModel, LogConnection, RiccatiSystem>;

namespace detail {

inline std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
inline std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

[[noreturn]] inline void fail(const std::string& ptr, const std::string& what) {
  throw SchemaError(ptr.empty() ? "/" : ptr, what);
}

inline const Json& field(const Json& j, const std::string& ptr, const std::string& key) {
  if (!j.is_object()) fail(ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(at(ptr, key), "missing required field");
  return *it;
}

inline std::size_t positive(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(ptr, "expected a positive integer");
  return j.get<std::size_t>();
}

inline const Json& array(const Json& j, const std::string& ptr, std::optional<std::size_t> size = {}) {
  if (!j.is_array()) fail(ptr, "expected an array");
  if (size && j.size() != *size)
    fail(ptr, "expected " + std::to_string(*size) + " entries, found " + std::to_string(j.size()));
  return j;
}

inline mpq_class rational(const Json& j, const std::string& ptr) {
  if (j.is_number_integer()) return mpq_class(std::to_string(j.get<long long>()));
  if (j.is_number()) {
    const double d = j.get<double>();
    if (!std::isfinite(d)) fail(ptr, "non-finite number");
    return mpq_class(d);
  }
  if (j.is_string()) {
    try {
      mpq_class q(j.get<std::string>());
      if (q.get_den() == 0) fail(ptr, "zero denominator");
      q.canonicalize();
      return q;
    } catch (const std::invalid_argument&) {
      fail(ptr, "malformed rational literal");
    }
  }
  fail(ptr, "expected a number or a \"p/q\" string");
}

}  // namespace detail

/// A complex scalar: [re, im], a bare real number, or parts given as "p/q".
inline GaussianRational parse_scalar(const Json& j, const std::string& ptr) {
  if (j.is_array()) {
    detail::array(j, ptr, 2);
    return {detail::rational(j[0], detail::at(ptr, 0)), detail::rational(j[1], detail::at(ptr, 1))};
  }
  return {detail::rational(j, ptr)};
}

inline Complex parse_complex(const Json& j, const std::string& ptr) { return parse_scalar(j, ptr).to_complex(); }

inline ExactMatrix parse_exact_matrix(const Json& j, const std::string& ptr, std::size_t m) {
  detail::array(j, ptr, m);
  ExactMatrix out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::string row = detail::at(ptr, i);
    detail::array(j[i], row, m);
    for (std::size_t k = 0; k < m; ++k) out(i, k) = parse_scalar(j[i][k], detail::at(row, k));
  }
  return out;
}

inline ComplexMatrix parse_matrix(const Json& j, const std::string& ptr, std::optional<std::size_t> m = {}) {
  if (!m) {
    detail::array(j, ptr);
    m = j.size();
    if (*m == 0) detail::fail(ptr, "empty matrix");
  }
  return to_complex(parse_exact_matrix(j, ptr, *m));
}

/// Polynomial as {"e0,e1,...": scalar}; a bare scalar is a constant.
inline Polynomial<GaussianRational> parse_polynomial(const Json& j, const std::string& ptr, std::size_t dim) {
  if (!j.is_object()) return Polynomial<GaussianRational>::constant(dim, parse_scalar(j, ptr));
  Polynomial<GaussianRational> p(dim);
  for (const auto& [key, value] : j.items()) {
    const std::string here = detail::at(ptr, key);
    Monomial e;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        std::size_t used = 0;
        const long v = std::stol(part, &used);
        if (used != part.size() || v < 0) throw std::invalid_argument(part);
        e.push_back(unsigned(v));
      } catch (const std::exception&) {
        detail::fail(here, "exponent key must be comma-separated non-negative integers");
      }
    }
    if (e.size() != dim) detail::fail(here, "exponent key must have one entry per chart variable");
    p.add_term(std::move(e), parse_scalar(value, here));
  }
  return p;
}

/// Rational function {"num": poly, "den": poly}; a bare scalar is a constant.
inline RatFun parse_ratfun(const Json& j, const std::string& ptr, std::size_t dim) {
  if (!j.is_object() || !j.contains("num")) return RatFun(parse_polynomial(j, ptr, dim));
  auto num = parse_polynomial(j["num"], detail::at(ptr, "num"), dim);
  auto den = j.contains("den") ? parse_polynomial(j["den"], detail::at(ptr, "den"), dim)
                               : Polynomial<GaussianRational>::constant(dim, GaussianRational(1));
  if (den.is_zero()) detail::fail(detail::at(ptr, "den"), "zero denominator");
  return {std::move(num), std::move(den)};
}

inline Form parse_form(const Json& j, const std::string& ptr, std::size_t dim) {
  detail::array(j, ptr, dim);
  Form f;
  for (std::size_t v = 0; v < dim; ++v) f.push_back(parse_ratfun(j[v], detail::at(ptr, v), dim));
  return f;
}

inline std::vector<DivisorBranch> parse_divisor(const Json& j, const std::string& ptr, std::size_t dim) {
  detail::array(j, ptr);
  std::vector<DivisorBranch> out;
  for (std::size_t b = 0; b < j.size(); ++b) {
    const std::string here = detail::at(ptr, b);
    const Json& var = detail::field(j[b], here, "var");
    if (!var.is_number_integer() || var.get<long long>() < 0 || var.get<std::size_t>() >= dim)
      detail::fail(detail::at(here, "var"), "variable index out of range");
    DivisorBranch br{var.get<std::size_t>(), parse_scalar(detail::field(j[b], here, "at"), detail::at(here, "at"))};
    for (std::size_t k = 0; k < out.size(); ++k)
      if (out[k] == br) detail::fail(here, "duplicate divisor branch");
    out.push_back(std::move(br));
  }
  return out;
}

inline FuchsianSystem parse_fuchsian(const Json& j, const std::string& ptr = "") {
  FuchsianSystem f;
  f.rank = detail::positive(detail::field(j, ptr, "rank"), detail::at(ptr, "rank"));
  const Json& poles = detail::array(detail::field(j, ptr, "poles"), detail::at(ptr, "poles"));
  const Json& res =
      detail::array(detail::field(j, ptr, "residues"), detail::at(ptr, "residues"), poles.size());
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const std::string here = detail::at(detail::at(ptr, "poles"), i);
    f.poles.push_back(parse_scalar(poles[i], here));
    for (std::size_t k = 0; k < i; ++k)
      if (std::abs(f.poles[k].to_complex() - f.poles[i].to_complex()) <= 1e-9)
        detail::fail(here, "poles must be pairwise distinct (duplicates pole " + std::to_string(k) + ")");
  }
  for (std::size_t i = 0; i < res.size(); ++i)
    f.residues.push_back(parse_exact_matrix(res[i], detail::at(detail::at(ptr, "residues"), i), f.rank));
  return f;
}

inline LocalModel parse_local_model(const Json& j, const std::string& ptr = "") {
  LocalModel l;
  l.rank = detail::positive(detail::field(j, ptr, "rank"), detail::at(ptr, "rank"));
  l.dim = detail::positive(detail::field(j, ptr, "dim"), detail::at(ptr, "dim"));
  const Json& res = detail::array(detail::field(j, ptr, "residues"), detail::at(ptr, "residues"));
  if (res.size() > l.dim) detail::fail(detail::at(ptr, "residues"), "more residues than chart dimensions");
  for (std::size_t i = 0; i < res.size(); ++i)
    l.residues.push_back(parse_exact_matrix(res[i], detail::at(detail::at(ptr, "residues"), i), l.rank));
  return l;
}

inline LogConnection parse_log_connection(const Json& j, const std::string& ptr = "") {
  const std::size_t m = detail::positive(detail::field(j, ptr, "rank"), detail::at(ptr, "rank"));
  const std::size_t n = detail::positive(detail::field(j, ptr, "dim"), detail::at(ptr, "dim"));
  auto divisor = parse_divisor(detail::field(j, ptr, "divisor"), detail::at(ptr, "divisor"), n);
  const std::string cptr = detail::at(ptr, "components");
  const Json& comps = detail::array(detail::field(j, ptr, "components"), cptr, n);
  std::vector<FormMatrix> out;
  for (std::size_t v = 0; v < n; ++v) {
    const std::string vp = detail::at(cptr, v);
    detail::array(comps[v], vp, m);
    FormMatrix c(m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::string rp = detail::at(vp, i);
      detail::array(comps[v][i], rp, m);
      for (std::size_t k = 0; k < m; ++k) c(i, k) = parse_ratfun(comps[v][i][k], detail::at(rp, k), n);
    }
    out.push_back(std::move(c));
  }
  LogConnection conn(m, n, std::move(divisor), std::move(out), j.value("approximate", false));
  try {
    conn.validate_poles();
  } catch (const Error& e) {
    detail::fail(cptr, e.what());
  }
  return conn;
}

inline RiccatiSystem parse_riccati(const Json& j, const std::string& ptr = "") {
  RiccatiSystem r;
  r.rank = detail::positive(detail::field(j, ptr, "rank"), detail::at(ptr, "rank"));
  r.dim = detail::positive(detail::field(j, ptr, "dim"), detail::at(ptr, "dim"));
  r.chart = r.rank - 1;
  const std::size_t k = r.rank - 1;
  auto forms = [&](const std::string& key) {
    const std::string here = detail::at(ptr, key);
    const Json& a = detail::array(detail::field(j, ptr, key), here, k);
    std::vector<Form> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(parse_form(a[i], detail::at(here, i), r.dim));
    return out;
  };
  r.b = forms("b");
  r.delta = forms("delta");
  r.c = forms("c");
  r.offdiag = Grid<Form>(k, zero_form(r.dim));
  const std::string op = detail::at(ptr, "offdiag");
  const Json& off = detail::array(detail::field(j, ptr, "offdiag"), op, k);
  for (std::size_t i = 0; i < k; ++i) {
    detail::array(off[i], detail::at(op, i), k);
    for (std::size_t l = 0; l < k; ++l) {
      const std::string here = detail::at(detail::at(op, i), l);
      if (i == l) {
        if (!off[i][l].is_null()) detail::fail(here, "diagonal of offdiag must be null");
        continue;
      }
      r.offdiag(i, l) = parse_form(off[i][l], here, r.dim);
    }
  }
  if (j.contains("divisor")) r.divisor = parse_divisor(j["divisor"], detail::at(ptr, "divisor"), r.dim);
  r.approximate = j.value("approximate", false);
  return r;
}

/// Optional "trace" form of a Riccati document; zero when absent.
inline Form parse_trace(const Json& j, std::size_t dim) {
  if (!j.contains("trace")) return zero_form(dim);
  return parse_form(j["trace"], "/trace", dim);
}

inline System parse_system(const Json& j) {
  const Json& type = detail::field(j, "", "type");
  if (!type.is_string()) detail::fail("/type", "expected a string");
  const auto t = type.get<std::string>();
  if (t == "fuchsian") return parse_fuchsian(j);
  if (t == "local_model") return parse_local_model(j);
  if (t == "log_connection") return parse_log_connection(j);
  if (t == "riccati") return parse_riccati(j);
  detail::fail("/type", "unknown system type '" + t + "'");
}

inline LogConnection to_connection(const System& s) {
  if (auto f = std::get_if<FuchsianSystem>(&s)) return LogConnection::from(*f);
  if (auto l = std::get_if<LocalModel>(&s)) return LogConnection::from(*l);
  if (auto c = std::get_if<LogConnection>(&s)) return *c;
  raise(ErrorCode::InvalidArgument, "a linear connection is required, not a Riccati system");
}

inline LoopPath parse_loop(const Json& j, const std::string& ptr = "") {
  const Complex base = parse_complex(detail::field(j, ptr, "basepoint"), detail::at(ptr, "basepoint"));
  const std::string sp = detail::at(ptr, "segments");
  const Json& segs = detail::array(detail::field(j, ptr, "segments"), sp);
  std::vector<Segment> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string here = detail::at(sp, i);
    const Json& kind = detail::field(segs[i], here, "kind");
    if (kind == "line") {
      out.push_back(Segment::line(parse_complex(detail::field(segs[i], here, "to"), detail::at(here, "to"))));
    } else if (kind == "arc") {
      auto num = [&](const std::string& key) {
        const Json& v = detail::field(segs[i], here, key);
        if (!v.is_number()) detail::fail(detail::at(here, key), "expected a number");
        return v.get<double>();
      };
      out.push_back(Segment::arc(parse_complex(detail::field(segs[i], here, "center"), detail::at(here, "center")),
                                 num("radius"), num("from_angle"), num("to_angle")));
    } else {
      detail::fail(detail::at(here, "kind"), "segment kind must be \"line\" or \"arc\"");
    }
  }
  try {
    return {base, std::move(out)};
  } catch (const Error& e) {
    detail::fail(sp, e.what());
  }
}

/// A single loop object, an array of loops, or {"loops": [...]}.
inline std::vector<LoopPath> parse_loops(const Json& j) {
  if (j.is_object() && j.contains("segments")) return {parse_loop(j)};
  const Json& list = j.is_object() ? detail::field(j, "", "loops") : j;
  const std::string ptr = j.is_object() ? "/loops" : "";
  detail::array(list, ptr);
  std::vector<LoopPath> out;
  for (std::size_t i = 0; i < list.size(); ++i) out.push_back(parse_loop(list[i], detail::at(ptr, i)));
  return out;
}

inline Word parse_word(const ProjectivePresentation& p, const Json& j, const std::string& ptr) {
  detail::array(j, ptr);
  Word w;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) detail::fail(detail::at(ptr, i), "expected a generator token");
    try {
      w.push_back(p.parse_letter(j[i].get<std::string>()));
    } catch (const Error& e) {
      detail::fail(detail::at(ptr, i), e.what());
    }
  }
  return w;
}

inline ProjectivePresentation parse_presentation(const Json& j) {
  const std::size_t m = detail::positive(detail::field(j, "", "rank"), "/rank");
  const Json& gens = detail::field(j, "", "generators");
  if (!gens.is_object() || gens.empty()) detail::fail("/generators", "expected a non-empty object");
  std::vector<std::string> names;
  std::vector<ProjectiveClass> classes;
  for (const auto& [name, mat] : gens.items()) {
    const std::string here = "/generators/" + name;
    try {
      classes.emplace_back(parse_matrix(mat, here, m));
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      detail::fail(here, e.what());
    }
    names.push_back(name);
  }
  std::optional<std::vector<Complex>> poles;
  if (j.contains("poles")) {
    const Json& pj = j["poles"];
    if (!pj.is_object()) detail::fail("/poles", "expected an object keyed by generator name");
    std::vector<Complex> list;
    for (std::size_t g = 0; g < names.size(); ++g) {
      const std::string here = "/poles/" + names[g];
      if (!pj.contains(names[g])) detail::fail(here, "missing pole for generator");
      list.push_back(parse_complex(pj[names[g]], here));
      for (std::size_t k = 0; k < g; ++k)
        if (std::abs(list[k] - list[g]) <= 1e-9) detail::fail(here, "poles must be pairwise distinct");
    }
    poles = std::move(list);
  }
  ProjectivePresentation bare(m, names, classes, {}, poles);
  std::vector<Word> relations;
  if (j.contains("relations")) {
    const Json& rj = detail::array(j["relations"], "/relations");
    for (std::size_t r = 0; r < rj.size(); ++r) relations.push_back(parse_word(bare, rj[r], detail::at("/relations", r)));
  }
  try {
    return {m, std::move(names), std::move(classes), std::move(relations), std::move(poles)};
  } catch (const Error& e) {
    detail::fail("/relations", e.what());
  }
}

// ---- emitters ----

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

namespace detail {

inline Json rational_json(const mpq_class& q) {
  const double d = q.get_d();
  if (std::isfinite(d) && mpq_class(d) == q) {
    if (q.get_den() == 1 && std::abs(d) < 9e15) return Json(static_cast<long long>(d));
    return Json(d);
  }
  return Json(q.get_str());
}

}  // namespace detail

/// Exact scalars are written as numbers when a double holds them exactly and
/// as "p/q" strings otherwise, so exact artifacts round-trip losslessly.
inline Json scalar_json(const GaussianRational& z) {
  return Json::array({detail::rational_json(z.real()), detail::rational_json(z.imag())});
}

inline Json matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json matrix_json(const ExactMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.size(); ++k) row.push_back(scalar_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json polynomial_json(const Polynomial<GaussianRational>& p, std::size_t dim) {
  Json out = Json::object();
  const auto q = p.promote(p.nvars() == 0 ? dim : p.nvars());
  for (const auto& [e, c] : q.terms()) {
    std::string key;
    for (std::size_t i = 0; i < e.size(); ++i) key += (i ? "," : "") + std::to_string(e[i]);
    out[key] = scalar_json(c);
  }
  return out;
}

inline Json ratfun_json(const RatFun& f, std::size_t dim) {
  Json out = Json::object();
  out["num"] = polynomial_json(f.num(), dim);
  out["den"] = polynomial_json(f.den(), dim);
  return out;
}

inline Json form_json(const Form& f, std::size_t dim) {
  Json out = Json::array();
  for (const auto& e : f) out.push_back(ratfun_json(e, dim));
  return out;
}

inline Json divisor_json(const std::vector<DivisorBranch>& d) {
  Json out = Json::array();
  for (const auto& b : d) {
    Json br = Json::object();
    br["var"] = b.var;
    br["at"] = scalar_json(b.at);
    out.push_back(std::move(br));
  }
  return out;
}

inline Json to_json(const FuchsianSystem& f) {
  Json out = Json::object();
  out["type"] = "fuchsian";
  out["rank"] = f.rank;
  Json poles = Json::array();
  for (const auto& p : f.poles) poles.push_back(scalar_json(p));
  out["poles"] = std::move(poles);
  Json res = Json::array();
  for (const auto& r : f.residues) res.push_back(matrix_json(r));
  out["residues"] = std::move(res);
  return out;
}

inline Json to_json(const LocalModel& l) {
  Json out = Json::object();
  out["type"] = "local_model";
  out["rank"] = l.rank;
  out["dim"] = l.dim;
  Json res = Json::array();
  for (const auto& r : l.residues) res.push_back(matrix_json(r));
  out["residues"] = std::move(res);
  return out;
}

inline Json to_json(const LogConnection& c) {
  Json out = Json::object();
  out["type"] = "log_connection";
  out["rank"] = c.rank();
  out["dim"] = c.dim();
  out["divisor"] = divisor_json(c.divisor());
  Json comps = Json::array();
  for (const auto& comp : c.components()) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < c.rank(); ++i) {
      Json row = Json::array();
      for (std::size_t k = 0; k < c.rank(); ++k) row.push_back(ratfun_json(comp(i, k), c.dim()));
      rows.push_back(std::move(row));
    }
    comps.push_back(std::move(rows));
  }
  out["components"] = std::move(comps);
  if (c.approximate()) out["approximate"] = true;
  return out;
}

inline Json to_json(const RiccatiSystem& r) {
  Json out = Json::object();
  out["type"] = "riccati";
  out["rank"] = r.rank;
  out["dim"] = r.dim;
  auto forms = [&](const std::vector<Form>& fs) {
    Json a = Json::array();
    for (const auto& f : fs) a.push_back(form_json(f, r.dim));
    return a;
  };
  out["b"] = forms(r.b);
  out["delta"] = forms(r.delta);
  Json off = Json::array();
  for (std::size_t i = 0; i < r.rank - 1; ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < r.rank - 1; ++k) row.push_back(i == k ? Json() : form_json(r.offdiag(i, k), r.dim));
    off.push_back(std::move(row));
  }
  out["offdiag"] = std::move(off);
  out["c"] = forms(r.c);
  out["divisor"] = divisor_json(r.divisor);
  if (r.approximate) out["approximate"] = true;
  return out;
}

inline Json to_json(const LoopPath& l) {
  Json out = Json::object();
  out["basepoint"] = complex_json(l.basepoint());
  Json segs = Json::array();
  for (const auto& s : l.segments()) {
    Json j = Json::object();
    if (s.kind == Segment::Kind::Line) {
      j["kind"] = "line";
      j["to"] = complex_json(s.to);
    } else {
      j["kind"] = "arc";
      j["center"] = complex_json(s.center);
      j["radius"] = s.radius;
      j["from_angle"] = s.from_angle;
      j["to_angle"] = s.to_angle;
    }
    segs.push_back(std::move(j));
  }
  out["segments"] = std::move(segs);
  return out;
}

inline Json to_json(const LiftReport& r) {
  Json out = Json::object();
  Json lifts = Json::array();
  for (const auto& l : r.lifts) lifts.push_back(matrix_json(l));
  out["lifts"] = std::move(lifts);
  Json sc = Json::array();
  for (Complex z : r.obstruction_scalars) sc.push_back(complex_json(z));
  out["obstruction_scalars"] = std::move(sc);
  out["success"] = r.success;
  return out;
}

}  // namespace logconnect::io
