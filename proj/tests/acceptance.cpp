// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "corpus.hpp"
#include "support.hpp"

using namespace logconnect;
using support::Gen;

namespace {

struct Check {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

GaussianRational q(long p, long d = 1) { return {mpq_class(p, d)}; }

FuchsianSystem small_fuchsian(Gen& g, std::size_t m, std::size_t k) {
  FuchsianSystem f = support::random_fuchsian(g, m, k);
  for (auto& r : f.residues) r = g.small_matrix(m);
  return f;
}

bool all_proj_equal(const MonodromyRep<ProjectiveClass>& a, const MonodromyRep<ProjectiveClass>& b, double tol) {
  if (a.matrices.size() != b.matrices.size()) return false;
  for (std::size_t i = 0; i < a.matrices.size(); ++i)
    if (!proj_equal(a.matrices[i], b.matrices[i], tol)) return false;
  return true;
}

// omega = (A + sum_k tau_k x^(k+1)) dx / x with exact coefficients.
LogConnection with_holomorphic_part(const ExactMatrix& a, const std::vector<ExactMatrix>& tau) {
  const std::size_t m = a.size();
  using P = Polynomial<GaussianRational>;
  FormMatrix omega(m, RatFun::constant(1, GaussianRational{}));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      P num(1);
      num.add_term({0}, a(i, j));
      for (std::size_t k = 0; k < tau.size(); ++k) num.add_term({unsigned(k + 1)}, tau[k](i, j));
      omega(i, j) = RatFun(num, P::variable(1, 0));
    }
  return {m, 1, {{0, GaussianRational{}}}, {omega}};
}

// --- criteria ---

Check reconstruct_round_trip() {
  Check c;
  Gen g(1001);
  for (int trial = 0; trial < 500; ++trial) {
    const auto f = support::random_fuchsian(g, std::size_t(g.integer(2, 4)), std::size_t(g.integer(1, 3)));
    const LogConnection w = LogConnection::from(f);
    c.require(reconstruct(projectivize(w), trace(w)) == w, "round trip differs on instance " + std::to_string(trial));
  }
  return c;
}

Check trace_free_lift_monodromy() {
  Check c;
  Gen g(1002);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = small_fuchsian(g, std::size_t(g.integer(2, 3)), std::size_t(g.integer(1, 3)));
    const LogConnection w = LogConnection::from(f);
    const LogConnection lift = trace_free_lift(projectivize(w));
    bool trace_free = true;
    for (const auto& e : trace(lift)) trace_free = trace_free && e.is_zero();
    c.require(trace_free, "lift has nonzero trace");
    c.require(flatness_check(lift), "lift is not flat");
    const LoopSet loops = standard_loops(f);
    const auto original = logconnect::detail::project(monodromy_rep(w, loops));
    const auto lifted = logconnect::detail::project(monodromy_rep(lift, loops));
    c.require(all_proj_equal(original, lifted, 1e-7), "projective monodromy differs on instance " + std::to_string(trial));
  }
  return c;
}

Check local_model_monodromy() {
  Check c;
  Gen g(1003);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index m = g.integer(1, 4);
    const ComplexMatrix a = g.bounded(m, 2.0);
    const LogConnection d = LogConnection::from(LocalModel::from_numeric(1, {a}));
    const ComplexMatrix t = transport(d, circle_loop(0.0, 1.0), 1e-12);
    const double err = support::rel_diff(t, mat_exp(kTwoPiI * a));
    worst = std::max(worst, err);
    c.require(err < 1e-8, "instance " + std::to_string(trial) + " differs by " + std::to_string(err));
  }
  if (c.ok) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst relative error %.2e", worst);
    c.note = buf;
  }
  return c;
}

Check covering_pullback() {
  Check c;
  Gen g(1004);
  for (int trial = 0; trial < 50; ++trial) {
    FuchsianSystem f;
    f.rank = std::size_t(g.integer(2, 3));
    f.poles = {q(0)};
    f.residues = {g.small_matrix(f.rank, 3)};
    const LogConnection w = LogConnection::from(f);
    const ComplexMatrix base = transport(w, circle_loop(0.0, 1.0), 1e-12);
    for (unsigned nu : {2u, 3u, 4u}) {
      const ComplexMatrix pulled = transport(pullback_power(w, 0, nu), circle_loop(0.0, 1.0), 1e-12);
      const double err = support::rel_diff(pulled, support::int_power(base, int(nu)));
      c.require(err < 1e-7, "instance " + std::to_string(trial) + " nu " + std::to_string(nu));
    }
  }
  return c;
}

Check pm_bridge() {
  Check c;
  Gen g(1005);
  int tested = 0;
  while (tested < 200) {
    const Eigen::Index m = g.integer(2, 4);
    const ComplexMatrix mat = g.matrix(m, 2.0);
    if (std::abs(mat.determinant()) < 1e-2 || !property_Pm(mat)) continue;
    ++tested;
    c.require(nonresonant(double(m) * mat_log_normalized(mat)), "scaled log resonant");
  }
  c.require(!property_Pm(diag({1.0, -1.0}), 2), "diag(1,-1) should violate P_2");
  return c;
}

Check commutator_scalar() {
  Check c;
  Gen g(1006);
  int pm_pairs = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index m = g.integer(2, 4);
    const auto [a, b] = support::commuting_pair(g, m, trial % 2 == 0);
    const LiftReport r = lift_commuting({ProjectiveClass(a), ProjectiveClass(b)});
    for (Complex lambda : r.obstruction_scalars)
      c.require(std::abs(std::pow(lambda, double(m)) - 1.0) < 1e-8, "scalar is not an m-th root of unity");
    if (property_Pm(a) && property_Pm(b)) {
      ++pm_pairs;
      for (Complex lambda : r.obstruction_scalars) c.require(std::abs(lambda - 1.0) < 1e-8, "P_m pair with lambda != 1");
      c.require(r.success, "P_m pair did not lift");
    }
  }
  c.require(pm_pairs >= 50, "too few P_m pairs generated");
  return c;
}

Check heisenberg() {
  Check c;
  const ComplexMatrix swap = to_matrix({{0.0, 1.0}, {1.0, 0.0}});
  const ComplexMatrix flip = diag({1.0, -1.0});
  const ProjectivePresentation p(2, {"g1", "g2"}, {ProjectiveClass(swap), ProjectiveClass(flip)},
                                 {{{0, 1}, {1, 1}, {0, -1}, {1, -1}}});
  c.require(lifting_exponent(p) == 2, "lifting exponent is not 2");
  const LiftReport direct = lift_commuting(p.generators());
  c.require(!direct.success && std::abs(direct.obstruction_scalars.at(0) + 1.0) < 1e-12, "commutator scalar is not -1");
  const PowerLiftReport one = verify_lift_after_power(p, 1);
  c.require(!one.after.success && std::abs(one.after.obstruction_scalars.at(0) + 1.0) < 1e-12,
            "nu = 1 should fail with scalar -1");
  const PowerLiftReport two = verify_lift_after_power(p, 2);
  c.require(two.after.success && std::abs(two.after.obstruction_scalars.at(0) - 1.0) < 1e-12, "nu = 2 should succeed");
  return c;
}

// Horizontal sections solve dY = omega Y, so Y = G Z normalizes when
// x G' = (A + x T(x)) G - G A, i.e. coefficientwise
// n G_n - A G_n + G_n A - sum_{k < n} tau_k G_{n-1-k} = 0.
double gauge_defect(const ComplexMatrix& a, const std::vector<ComplexMatrix>& tau, const GaugeSeries& g,
                    std::size_t n) {
  const ComplexMatrix& gn = g.coefficients[n];
  ComplexMatrix d = double(n) * gn - a * gn + gn * a;
  for (std::size_t k = 0; k < n && k < tau.size(); ++k) d -= tau[k] * g.coefficients[n - 1 - k];
  return d.norm();
}

Check poincare() {
  Check c;
  Gen g(1008);
  int done = 0;
  while (done < 50) {
    const std::size_t m = std::size_t(g.integer(1, 3));
    const ExactMatrix a = g.small_matrix(m, 4);
    const ComplexMatrix ac = to_complex(a);
    if (!nonresonant(ac)) continue;
    std::vector<ExactMatrix> tau;
    const int degree = g.integer(0, 3);
    for (int k = 0; k <= degree; ++k) tau.push_back(g.small_matrix(m, 4));
    std::vector<ComplexMatrix> tc;
    for (const auto& t : tau) tc.push_back(to_complex(t));
    const GaugeSeries gs = poincare_normalize(with_holomorphic_part(a, tau), 10);
    double scale = 1.0;
    for (const auto& x : gs.coefficients) scale = std::max(scale, x.norm());
    c.require((gs.coefficients[0] - ComplexMatrix::Identity(Eigen::Index(m), Eigen::Index(m))).norm() == 0.0,
              "gauge does not start at the identity");
    for (std::size_t n = 1; n <= 10; ++n)
      c.require(gauge_defect(ac, tc, gs, n) < 1e-10 * scale, "defect below order 10 on instance " + std::to_string(done));
    ++done;
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index m = g.integer(2, 3);
    ComplexMatrix d = ComplexMatrix::Zero(m, m);
    const Complex lambda = g.complex(0.5);
    for (Eigen::Index i = 0; i < m; ++i) d(i, i) = lambda + double(i);
    const ComplexMatrix p = g.basis(m);
    const ComplexMatrix resonant = p * d * p.inverse();
    try {
      poincare_normalize(resonant, {g.matrix(m)}, 10);
      c.require(false, "resonant residue was accepted");
    } catch (const Error& e) {
      c.require(e.code() == ErrorCode::ResonantResidue, "wrong error for resonant residue");
    }
  }
  return c;
}

Check realization() {
  Check c;
  Gen g(1009);
  int done = 0;
  while (done < 50) {
    const Eigen::Index m = g.integer(2, 3);
    const std::size_t k = std::size_t(g.integer(1, 3));
    const ComplexMatrix p = g.basis(m);
    const ComplexMatrix pinv = p.inverse();
    std::vector<ProjectiveClass> gens;
    std::vector<std::string> names;
    std::vector<Complex> poles;
    while (poles.size() < k) {
      const Complex z(g.integer(-2, 2), g.integer(-2, 2));
      if (std::find(poles.begin(), poles.end(), z) == poles.end()) poles.push_back(z);
    }
    bool pm = true;
    for (std::size_t j = 0; j < k; ++j) {
      gens.push_back(ProjectiveClass(p * support::random_diagonal(g, m) * pinv));
      names.push_back("g" + std::to_string(j));
      pm = pm && property_Pm(gens.back().rep());
    }
    if (!pm) continue;
    const FuchsianSystem f = realize_fuchsian({std::size_t(m), names, gens, {}, poles});
    for (const auto& r : f.residues)
      for (Complex mu : eigenvalues(to_complex(r)))
        c.require(mu.real() > -1e-9 && mu.real() < 1.0, "residue eigenvalue outside the strip");
    const auto rep = projective_monodromy(LogConnection::from(f), standard_loops(f));
    for (std::size_t j = 0; j < k; ++j)
      c.require(proj_equal(rep.matrices[j], gens[j], 1e-7), "monodromy differs on instance " + std::to_string(done));
    ++done;
  }
  return c;
}

Check cli_corpus() {
  Check c;
  const auto entries = corpus::manifest();
  for (const auto& e : entries) {
    const auto first = corpus::run(e);
    const auto second = corpus::run(e);
    const std::string id = e.verb + " " + e.input;
    c.require(first.exit == e.exit, id + ": exit " + std::to_string(first.exit) + ", expected " + std::to_string(e.exit));
    c.require(first.out == second.out, id + ": output differs between runs");
    c.require(!first.out.empty() && first.out.back() == '\n', id + ": no verdict written");
  }
  if (c.ok) c.note = std::to_string(entries.size()) + " runs";
  return c;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Check()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "reconstruct(projectivize(w), trace(w)) = w on 500 Fuchsian systems", 10.0, reconstruct_round_trip},
      {2, "trace-free lift is flat with proj-equal monodromy (50 instances)", 60.0, trace_free_lift_monodromy},
      {3, "local-model circle monodromy matches exp(2 pi i A) (100 instances)", 60.0, local_model_monodromy},
      {4, "pullback monodromy is the nu-th power (50 systems, nu = 2, 3, 4)", 0.0, covering_pullback},
      {5, "P_m implies m log M nonresonant (200 instances); diag(1,-1) fails P_2", 0.0, pm_bridge},
      {6, "commutator scalars satisfy lambda^m = 1; lambda = 1 under P_m (200 pairs)", 0.0, commutator_scalar},
      {7, "Heisenberg pair: exponent 2, scalar -1 at nu = 1, lift at nu = 2", 1.0, heisenberg},
      {8, "order-10 normalizing gauge for 50 nonresonant residues; resonant rejected", 30.0, poincare},
      {9, "abelian realization on P^1 reproduces 50 presentations", 0.0, realization},
      {10, "CLI corpus exit codes and byte-stable output", 0.0, cli_corpus},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = c.body();
    } catch (const std::exception& e) {
      result.ok = false;
      result.note = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && seconds > c.budget_s) result.require(false, "exceeded " + std::to_string(c.budget_s) + " s");
    if (!result.ok) ++failed;
    std::printf("%s criterion %d: %s [%.2f s]%s%s\n", result.ok ? "PASS" : "FAIL", c.id, c.name, seconds,
                result.note.empty() ? "" : " - ", result.note.c_str());
  }
  return failed == 0 ? 0 : 1;
}
