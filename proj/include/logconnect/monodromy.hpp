#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "connection.hpp"
#include "projective.hpp"

namespace logconnect {

/// Line segment to `to`, or a circular arc of `radius` about `center`
/// swept from `from_angle` to `to_angle` (radians; counterclockwise when
/// to_angle > from_angle).
struct Segment {
  enum class Kind { Line, Arc };
  Kind kind = Kind::Line;
  Complex to{};
  Complex center{};
  double radius = 0.0;
  double from_angle = 0.0;
  double to_angle = 0.0;

  static Segment line(Complex to) { return {Kind::Line, to, {}, 0.0, 0.0, 0.0}; }
  static Segment arc(Complex center, double radius, double from, double to) {
    return {Kind::Arc, {}, center, radius, from, to};
  }
};

/// Closed piecewise path in a one-dimensional slice of the chart.
class LoopPath {
 public:
  LoopPath() = default;
  LoopPath(Complex basepoint, std::vector<Segment> segments)
      : basepoint_(basepoint), segments_(std::move(segments)) {
    if (segments_.empty()) raise(ErrorCode::InvalidArgument, "loop needs at least one segment");
    Complex cur = basepoint_;
    for (const auto& s : segments_) {
      if (s.kind == Segment::Kind::Arc) {
        if (!(s.radius > 0.0)) raise(ErrorCode::InvalidArgument, "arc radius must be positive");
        const Complex start = s.center + std::polar(s.radius, s.from_angle);
        if (std::abs(start - cur) > 1e-9 * std::max(1.0, std::abs(cur)))
          raise(ErrorCode::InvalidArgument, "arc does not start where the previous segment ended");
      }
      cur = end_point(s, cur);
    }
    if (std::abs(cur - basepoint_) > 1e-12 * std::max(1.0, std::abs(basepoint_)))
      raise(ErrorCode::InvalidArgument, "loop is not closed");
  }

  Complex basepoint() const { return basepoint_; }
  const std::vector<Segment>& segments() const { return segments_; }

  Complex start_of(std::size_t i) const {
    if (i == 0) return basepoint_;
    return end_of(i - 1);
  }

  Complex end_of(std::size_t i) const {
    Complex cur = basepoint_;
    for (std::size_t k = 0; k <= i; ++k) cur = end_point(segments_[k], cur);
    return cur;
  }

  /// Point and velocity of segment i at parameter t in [0, 1].
  std::pair<Complex, Complex> evaluate(std::size_t i, Complex start, double t) const {
    const auto& s = segments_[i];
    if (s.kind == Segment::Kind::Line) return {start + t * (s.to - start), s.to - start};
    const double sweep = s.to_angle - s.from_angle;
    const Complex rot = std::polar(s.radius, s.from_angle + t * sweep);
    return {s.center + rot, Complex(0.0, sweep) * rot};
  }

  LoopPath reversed() const {
    std::vector<Segment> out;
    for (std::size_t i = segments_.size(); i-- > 0;) {
      const auto& s = segments_[i];
      if (s.kind == Segment::Kind::Line) out.push_back(Segment::line(start_of(i)));
      else out.push_back(Segment::arc(s.center, s.radius, s.to_angle, s.from_angle));
    }
    return {basepoint_, std::move(out)};
  }

  /// Same geometric path with every segment split into `pieces` parts.
  LoopPath refined(int pieces) const {
    std::vector<Segment> out;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const auto& s = segments_[i];
      const Complex a = start_of(i);
      for (int k = 1; k <= pieces; ++k) {
        const double t = double(k) / pieces;
        if (s.kind == Segment::Kind::Line) {
          out.push_back(Segment::line(k == pieces ? s.to : a + t * (s.to - a)));
        } else {
          const double sweep = s.to_angle - s.from_angle;
          out.push_back(Segment::arc(s.center, s.radius, s.from_angle + (t - 1.0 / pieces) * sweep,
                                     s.from_angle + t * sweep));
        }
      }
    }
    return {basepoint_, std::move(out)};
  }

  /// Minimum distance from the path to any of the given points.
  double clearance(const std::vector<Complex>& poles) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      const Complex a = start_of(i);
      for (Complex p : poles) best = std::min(best, distance_to(segments_[i], a, p));
    }
    return best;
  }

 private:
  static Complex end_point(const Segment& s, Complex) {
    if (s.kind == Segment::Kind::Line) return s.to;
    return s.center + std::polar(s.radius, s.to_angle);
  }

  static double distance_to(const Segment& s, Complex a, Complex p) {
    if (s.kind == Segment::Kind::Line) return point_segment_distance(p, a, s.to);
    const double lo = std::min(s.from_angle, s.to_angle);
    const double hi = std::max(s.from_angle, s.to_angle);
    const double radial = std::abs(std::abs(p - s.center) - s.radius);
    if (hi - lo >= 2.0 * kPi || p == s.center) return radial;
    double phi = std::arg(p - s.center);
    while (phi < lo) phi += 2.0 * kPi;
    while (phi > lo + 2.0 * kPi) phi -= 2.0 * kPi;
    if (phi <= hi) return radial;
    return std::min(std::abs(p - (s.center + std::polar(s.radius, s.from_angle))),
                    std::abs(p - (s.center + std::polar(s.radius, s.to_angle))));
  }

 public:
  static double point_segment_distance(Complex p, Complex a, Complex b) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
  }

 private:
  Complex basepoint_{};
  std::vector<Segment> segments_;
};

/// Counterclockwise circle of `radius` about `center`, based at its
/// rightmost point.
inline LoopPath circle_loop(Complex center, double radius) {
  return {center + radius, {Segment::arc(center, radius, 0.0, 2.0 * kPi)}};
}

/// One-dimensional slice of the chart along which a loop runs: coordinate
/// `var` moves, the others stay at `point` (default 1).
struct ChartSlice {
  std::size_t var = 0;
  std::vector<Complex> point;
};

/// Records that loop matrices compose as an antirepresentation:
/// the concatenation a.b (a first) maps to M_b * M_a.
enum class Convention { Antirepresentation };

template <class Element>
struct MonodromyRep {
  Complex basepoint{};
  std::vector<LoopPath> loops;
  std::vector<Element> matrices;
  /// Loop around infinity, present for one-variable systems on the sphere.
  std::optional<Element> infinity;
  /// Concatenation order of the loops that encircles every finite pole.
  std::vector<std::size_t> product_order;
  Convention convention = Convention::Antirepresentation;
};

/// Lassos around each pole: a corridor from the basepoint, a full
/// counterclockwise circle, and the corridor back.
struct LoopSet {
  Complex basepoint{};
  std::vector<LoopPath> loops;
  std::vector<std::size_t> product_order;
  /// Corridor polylines (basepoint first, circle entry point last).
  std::vector<std::vector<Complex>> corridors;
};

inline Complex default_basepoint(const std::vector<Complex>& poles) {
  double r = 0.0;
  for (Complex p : poles) r = std::max(r, std::abs(p));
  return {1.0 + r, 0.0};
}

namespace detail {

inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on = [](Complex p, Complex q, Complex r) {
    return LoopPath::point_segment_distance(r, p, q) <= 1e-12 * std::max(1.0, std::abs(r));
  };
  return on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b);
}

inline double polyline_distance(const std::vector<Complex>& line, Complex p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < line.size(); ++k)
    best = std::min(best, LoopPath::point_segment_distance(p, line[k], line[k + 1]));
  return best;
}

inline bool corridors_cross(const std::vector<Complex>& u, const std::vector<Complex>& v) {
  for (std::size_t i = 0; i + 1 < u.size(); ++i)
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
      if (i == 0 && j == 0) {
        // Both leave the basepoint; they meet only there unless they overlap.
        const double ang = std::abs(std::arg((u[1] - u[0]) / (v[1] - v[0])));
        if (ang < 1e-9) return true;
        if (segments_intersect(u[0] + 1e-9 * (u[1] - u[0]), u[1], v[0] + 1e-9 * (v[1] - v[0]), v[1]))
          return true;
        continue;
      }
      if (segments_intersect(u[i], u[i + 1], v[j], v[j + 1])) return true;
    }
  return false;
}

}  // namespace detail

/// Standard lassos around the given poles. Corridors that would pass a
/// pole collinear with the basepoint are rotated about the basepoint until
/// they keep clear of every other pole and circle.
inline LoopSet standard_loops(const std::vector<Complex>& poles, std::optional<Complex> basepoint = std::nullopt,
                              std::optional<double> clearance = std::nullopt) {
  const Complex b = basepoint.value_or(default_basepoint(poles));
  const std::size_t k = poles.size();
  for (Complex p : poles)
    if (std::abs(p - b) <= 1e-12 * std::max(1.0, std::abs(b)))
      raise(ErrorCode::InvalidArgument, "basepoint coincides with a pole");

  std::vector<double> radius(k);
  for (std::size_t i = 0; i < k; ++i) {
    double nearest = std::abs(b - poles[i]);
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) nearest = std::min(nearest, std::abs(poles[i] - poles[j]));
    radius[i] = nearest / 3.0;
    if (clearance) radius[i] = std::min(radius[i], *clearance);
  }

  LoopSet out;
  out.basepoint = b;
  std::vector<double> departure(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Complex p = poles[i];
    const double d = std::abs(p - b);
    const double theta = std::arg(p - b);
    std::optional<std::vector<Complex>> corridor;
    for (int step = 0; step < 157 && !corridor; ++step) {
      const double delta = 0.02 * ((step + 1) / 2) * (step % 2 ? 1.0 : -1.0);
      std::vector<Complex> line{b};
      if (step == 0) {
        line.push_back(p - radius[i] * (p - b) / d);
      } else {
        const Complex w = b + std::polar(d, theta + delta);
        if (std::abs(w - p) < 1.5 * radius[i]) continue;
        if (LoopPath::point_segment_distance(p, b, w) < radius[i]) continue;
        line.push_back(w);
        line.push_back(p + radius[i] * (w - p) / std::abs(w - p));
      }
      bool clear = true;
      for (std::size_t j = 0; j < k && clear; ++j)
        if (j != i && detail::polyline_distance(line, poles[j]) < 1.5 * radius[j]) clear = false;
      for (std::size_t j = 0; j < out.corridors.size() && clear; ++j)
        if (detail::corridors_cross(line, out.corridors[j])) clear = false;
      if (clear) {
        corridor = std::move(line);
        departure[i] = theta + delta;
      }
    }
    if (!corridor) raise(ErrorCode::DegenerateConfiguration, "no clear corridor to pole " + std::to_string(i));
    out.corridors.push_back(*corridor);
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (detail::corridors_cross(out.corridors[i], out.corridors[j]))
        raise(ErrorCode::DegenerateConfiguration, "corridors to poles " + std::to_string(i) + " and " +
                                                      std::to_string(j) + " cross");

  for (std::size_t i = 0; i < k; ++i) {
    const auto& line = out.corridors[i];
    std::vector<Segment> segs;
    for (std::size_t v = 1; v < line.size(); ++v) segs.push_back(Segment::line(line[v]));
    const double a = std::arg(line.back() - poles[i]);
    segs.push_back(Segment::arc(poles[i], radius[i], a, a + 2.0 * kPi));
    for (std::size_t v = line.size() - 1; v-- > 0;) segs.push_back(Segment::line(line[v]));
    out.loops.emplace_back(b, std::move(segs));
  }

  // Concatenating the lassos by increasing departure angle, starting just
  // after the widest angular gap, encircles all poles counterclockwise.
  std::vector<double> ang(k);
  for (std::size_t i = 0; i < k; ++i) {
    ang[i] = std::fmod(departure[i], 2.0 * kPi);
    if (ang[i] < 0) ang[i] += 2.0 * kPi;
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ang[x] < ang[y]; });
  if (k > 1) {
    std::size_t start = 0;
    double widest = -1.0;
    for (std::size_t s = 0; s < k; ++s) {
      const double prev = ang[order[(s + k - 1) % k]];
      double gap = ang[order[s]] - prev;
      if (gap <= 0) gap += 2.0 * kPi;
      if (gap > widest) {
        widest = gap;
        start = s;
      }
    }
    std::rotate(order.begin(), order.begin() + std::ptrdiff_t(start), order.end());
  }
  out.product_order = order;
  return out;
}

inline LoopSet standard_loops(const FuchsianSystem& f, std::optional<Complex> basepoint = std::nullopt,
                              std::optional<double> clearance = std::nullopt) {
  return standard_loops(f.numeric_poles(), basepoint, clearance);
}

namespace detail {

// Entries of Omega_var restricted to a slice, as dense univariate complex
// polynomials in the moving coordinate.
class SliceField {
 public:
  SliceField(const LogConnection& c, const ChartSlice& slice) : m_(c.rank()), var_(slice.var) {
    if (slice.var >= c.dim()) raise(ErrorCode::InvalidArgument, "slice variable out of range");
    std::vector<Complex> point = slice.point;
    point.resize(c.dim(), Complex(1.0, 0.0));
    for (const auto& br : c.divisor()) {
      if (br.var == var_) {
        poles_.push_back(br.at.to_complex());
      } else if (std::abs(point[br.var] - br.at.to_complex()) < 1e-12) {
        raise(ErrorCode::PoleProximity, "slice lies inside the polar divisor");
      }
    }
    for (const auto& f : c.component(var_)) {
      num_.push_back(restrict(f.num(), point));
      den_.push_back(restrict(f.den(), point));
    }
  }

  const std::vector<Complex>& poles() const { return poles_; }

  void evaluate(Complex x, ComplexMatrix& out) const {
    out.resize(Eigen::Index(m_), Eigen::Index(m_));
    for (std::size_t i = 0; i < m_ * m_; ++i)
      out(Eigen::Index(i / m_), Eigen::Index(i % m_)) = horner(num_[i], x) / horner(den_[i], x);
  }

 private:
  std::vector<Complex> restrict(const Polynomial<GaussianRational>& p, const std::vector<Complex>& point) const {
    std::vector<Complex> out(p.degree(var_) + 1);
    for (const auto& [e, c] : p.terms()) {
      Complex t = c.to_complex();
      for (std::size_t i = 0; i < e.size(); ++i)
        if (i != var_)
          for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
      out[e[var_]] += t;
    }
    return out;
  }

  static Complex horner(const std::vector<Complex>& c, Complex x) {
    Complex acc{};
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
  }

  std::size_t m_;
  std::size_t var_;
  std::vector<Complex> poles_;
  std::vector<std::vector<Complex>> num_;
  std::vector<std::vector<Complex>> den_;
};

}  // namespace detail

/// Fundamental-solution transport T with Y(end) = T Y(start) for dY = omega Y
/// along the path, by an adaptive embedded Runge-Kutta (Dormand-Prince 5(4))
/// pair with absolute and relative local error `tol`.
inline ComplexMatrix transport(const LogConnection& c, const LoopPath& path, double tol = 1e-10,
                               const ChartSlice& slice = {}) {
  namespace ode = boost::numeric::odeint;
  using State = std::vector<Complex>;
  const detail::SliceField field(c, slice);
  const double clear = path.clearance(field.poles());
  if (clear < 1e-12) raise(ErrorCode::PoleProximity, "path passes through the polar divisor");

  const auto m = Eigen::Index(c.rank());
  State y(std::size_t(m * m));
  for (Eigen::Index i = 0; i < m; ++i) y[std::size_t(i * m + i)] = 1.0;

  ComplexMatrix omega;
  constexpr long kMaxSteps = 2'000'000;
  long steps = 0;
  for (std::size_t s = 0; s < path.segments().size(); ++s) {
    const Complex start = path.start_of(s);
    auto rhs = [&](const State& x, State& dx, double t) {
      const auto [pt, vel] = path.evaluate(s, start, t);
      field.evaluate(pt, omega);
      omega *= vel;
      // Y is stored column-major: column j occupies x[j*m .. j*m + m).
      Eigen::Map<const ComplexMatrix> ym(x.data(), m, m);
      Eigen::Map<ComplexMatrix> dym(dx.data(), m, m);
      dym.noalias() = omega * ym;
    };
    // Speed bound: a step never moves farther than a quarter of the
    // clearance, and never much farther than the local scale 1/|omega|.
    const auto [p0, v0] = path.evaluate(s, start, 0.0);
    field.evaluate(p0, omega);
    const double speed = std::max(std::abs(v0), 1e-300);
    const double dt_max = std::min(1.0, 0.25 * clear / speed);
    double dt = std::min(dt_max, 0.1 / (1.0 + (omega * speed).norm()));
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<State>());
    double t = 0.0;
    while (t < 1.0) {
      dt = std::min({dt, dt_max, 1.0 - t});
      const double before = t;
      if (stepper.try_step(rhs, y, t, dt) == ode::fail) {
        if (dt < 1e-14) raise(ErrorCode::PoleProximity, "adaptive step collapsed near the divisor");
      } else if (t == before) {
        break;
      }
      if (++steps > kMaxSteps) raise(ErrorCode::ToleranceNotMet, "step budget exhausted");
      if (1.0 - t < 1e-15) break;
    }
  }
  Eigen::Map<const ComplexMatrix> result(y.data(), m, m);
  ComplexMatrix out = result;
  if (!all_finite(out)) raise(ErrorCode::Overflow, "transport overflowed");
  return out;
}

inline MonodromyRep<ComplexMatrix> monodromy_rep(const LogConnection& c, const std::vector<LoopPath>& loops,
                                                 double tol = 1e-10, const ChartSlice& slice = {}) {
  MonodromyRep<ComplexMatrix> rep;
  rep.loops = loops;
  if (!loops.empty()) rep.basepoint = loops.front().basepoint();
  for (const auto& l : loops) rep.matrices.push_back(transport(c, l, tol, slice));
  return rep;
}

/// Monodromy of a one-variable system along its standard lassos, with the
/// loop around infinity given by the inverse ordered product.
inline MonodromyRep<ComplexMatrix> monodromy_rep(const LogConnection& c, const LoopSet& set, double tol = 1e-10) {
  if (c.dim() != 1) raise(ErrorCode::InvalidArgument, "lasso monodromy needs a one-variable chart");
  MonodromyRep<ComplexMatrix> rep = monodromy_rep(c, set.loops, tol);
  rep.basepoint = set.basepoint;
  rep.product_order = set.product_order;
  const auto m = Eigen::Index(c.rank());
  ComplexMatrix prod = ComplexMatrix::Identity(m, m);
  for (std::size_t i : rep.product_order) prod = rep.matrices[i] * prod;
  rep.infinity = prod.inverse();
  return rep;
}

inline MonodromyRep<ComplexMatrix> monodromy_rep(const FuchsianSystem& f, std::optional<Complex> basepoint = {},
                                                 double tol = 1e-10) {
  return monodromy_rep(LogConnection::from(f), standard_loops(f, basepoint), tol);
}

/// Monodromy of a local model around each coordinate circle |x_j| = 1.
inline MonodromyRep<ComplexMatrix> local_monodromy(const LogConnection& c, double tol = 1e-10) {
  MonodromyRep<ComplexMatrix> rep;
  rep.basepoint = 1.0;
  std::vector<std::size_t> seen;
  for (const auto& br : c.divisor()) {
    if (std::find(seen.begin(), seen.end(), br.var) != seen.end()) continue;
    seen.push_back(br.var);
    const LoopPath loop = circle_loop(0.0, 1.0);
    rep.loops.push_back(loop);
    rep.matrices.push_back(transport(c, loop, tol, ChartSlice{br.var, {}}));
  }
  return rep;
}

namespace detail {

// A closed scalar form with simple poles on the slice's branches, used to
// confirm that projective monodromy ignores the chosen trace.
inline Form probe_trace(const LogConnection& c, std::size_t var) {
  Form f = zero_form(c.dim());
  const GaussianRational half = GaussianRational(mpq_class(1, 2));
  bool any = false;
  for (const auto& br : c.divisor())
    if (br.var == var) {
      f[var] += RatFun::simple_pole(c.dim(), var, br.at, half);
      any = true;
    }
  if (!any) f[var] = RatFun::constant(c.dim(), half);
  return f;
}

inline MonodromyRep<ProjectiveClass> project(const MonodromyRep<ComplexMatrix>& lin) {
  MonodromyRep<ProjectiveClass> out;
  out.basepoint = lin.basepoint;
  out.loops = lin.loops;
  out.product_order = lin.product_order;
  for (const auto& m : lin.matrices) out.matrices.emplace_back(m);
  if (lin.infinity) out.infinity = ProjectiveClass(*lin.infinity);
  return out;
}

}  // namespace detail

/// Projective monodromy of a Riccati system: linear transport of a
/// reconstruction with zero trace, projected to PGL. When `verify` is set a
/// second reconstruction with a different trace must give equal classes.
inline MonodromyRep<ProjectiveClass> projective_monodromy(const RiccatiSystem& r, const std::vector<LoopPath>& loops,
                                                          double tol = 1e-10, const ChartSlice& slice = {},
                                                          bool verify = true) {
  const LogConnection lin = reconstruct(r, zero_form(r.dim));
  auto rep = detail::project(monodromy_rep(lin, loops, tol, slice));
  if (verify) {
    const LogConnection other = reconstruct(r, detail::probe_trace(lin, slice.var));
    const auto alt = monodromy_rep(other, loops, tol, slice);
    for (std::size_t i = 0; i < loops.size(); ++i)
      if (!proj_equal(rep.matrices[i].rep(), alt.matrices[i], 1e-7))
        raise(ErrorCode::ToleranceNotMet, "projective monodromy depends on the chosen trace");
  }
  return rep;
}

inline MonodromyRep<ProjectiveClass> projective_monodromy(const RiccatiSystem& r, const LoopSet& set,
                                                          double tol = 1e-10, bool verify = true) {
  auto rep = projective_monodromy(r, set.loops, tol, {}, verify);
  rep.basepoint = set.basepoint;
  rep.product_order = set.product_order;
  const auto m = Eigen::Index(r.rank);
  ComplexMatrix prod = ComplexMatrix::Identity(m, m);
  for (std::size_t i : rep.product_order) prod = rep.matrices[i].canonical() * prod;
  rep.infinity = ProjectiveClass(prod.inverse());
  return rep;
}

inline MonodromyRep<ProjectiveClass> projective_monodromy(const LogConnection& c, const LoopSet& set,
                                                          double tol = 1e-10, bool verify = true) {
  return projective_monodromy(projectivize(c), set, tol, verify);
}

/// Checks the sphere relation: the ordered loop product times the loop
/// around infinity is the identity.
inline bool relation_check(const MonodromyRep<ComplexMatrix>& rep, double tol = 1e-7) {
  if (!rep.infinity || rep.matrices.empty()) return rep.matrices.empty();
  const auto m = rep.matrices.front().rows();
  ComplexMatrix prod = ComplexMatrix::Identity(m, m);
  for (std::size_t i : rep.product_order) prod = rep.matrices[i] * prod;
  prod = *rep.infinity * prod;
  return (prod - ComplexMatrix::Identity(m, m)).norm() <= tol * std::sqrt(double(m));
}

inline bool relation_check(const MonodromyRep<ProjectiveClass>& rep, double tol = 1e-7) {
  if (!rep.infinity || rep.matrices.empty()) return rep.matrices.empty();
  const auto m = rep.matrices.front().rep().rows();
  ComplexMatrix prod = ComplexMatrix::Identity(m, m);
  for (std::size_t i : rep.product_order) prod = rep.matrices[i].canonical() * prod;
  prod = rep.infinity->canonical() * prod;
  return proj_equal(prod, ComplexMatrix::Identity(m, m), tol);
}

}  // namespace logconnect
