#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "monodromy.hpp"
#include "predicates.hpp"

namespace logconnect {

/// Generator index raised to a nonzero integer power.
struct Letter {
  std::size_t generator = 0;
  int power = 1;
};

using Word = std::vector<Letter>;

/// Images of simple loops in PGL_m with relations among them.
///
/// Words are read left to right as loop concatenation, so under the
/// antirepresentation convention the word l1 l2 ... lk evaluates to
/// M_lk ... M_l1.
class ProjectivePresentation {
 public:
  ProjectivePresentation(std::size_t rank, std::vector<std::string> names, std::vector<ProjectiveClass> generators,
                         std::vector<Word> relations = {}, std::optional<std::vector<Complex>> poles = std::nullopt)
      : rank_(rank),
        names_(std::move(names)),
        generators_(std::move(generators)),
        relations_(std::move(relations)),
        poles_(std::move(poles)) {
    if (rank_ < 1) raise(ErrorCode::InvalidArgument, "rank must be positive");
    if (names_.size() != generators_.size()) raise(ErrorCode::DimensionMismatch, "one name per generator");
    for (const auto& g : generators_)
      if (g.dim() != rank_) raise(ErrorCode::DimensionMismatch, "generator size differs from rank");
    if (poles_ && poles_->size() != generators_.size())
      raise(ErrorCode::DimensionMismatch, "one pole per generator");
    for (std::size_t r = 0; r < relations_.size(); ++r) {
      for (const auto& l : relations_[r])
        if (l.generator >= generators_.size() || l.power == 0)
          raise(ErrorCode::InvalidArgument, "relation " + std::to_string(r) + " has an invalid letter");
      const ComplexMatrix w = evaluate(relations_[r], canonical_lifts());
      if (!proj_equal(w, ComplexMatrix::Identity(w.rows(), w.cols()), 1e-8))
        raise(ErrorCode::InvalidArgument, "relation " + std::to_string(r) + " does not hold projectively");
    }
  }

  std::size_t rank() const { return rank_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<ProjectiveClass>& generators() const { return generators_; }
  const std::vector<Word>& relations() const { return relations_; }
  const std::optional<std::vector<Complex>>& poles() const { return poles_; }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    raise(ErrorCode::InvalidArgument, "unknown generator " + name);
  }

  /// Parses "g", "g^k" or "g^-k".
  Letter parse_letter(const std::string& token) const {
    const auto caret = token.find('^');
    Letter l;
    l.generator = index_of(token.substr(0, caret));
    if (caret != std::string::npos) {
      try {
        std::size_t used = 0;
        l.power = std::stoi(token.substr(caret + 1), &used);
        if (used != token.size() - caret - 1) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        raise(ErrorCode::InvalidArgument, "bad exponent in " + token);
      }
      if (l.power == 0) raise(ErrorCode::InvalidArgument, "zero exponent in " + token);
    }
    return l;
  }

  std::vector<ComplexMatrix> canonical_lifts() const {
    std::vector<ComplexMatrix> out;
    for (const auto& g : generators_) out.push_back(g.canonical());
    return out;
  }

  /// Antirepresentation evaluation of a word in the given matrices.
  static ComplexMatrix evaluate(const Word& w, const std::vector<ComplexMatrix>& mats) {
    const auto m = mats.empty() ? Eigen::Index(0) : mats.front().rows();
    ComplexMatrix acc = ComplexMatrix::Identity(m, m);
    for (const auto& l : w) {
      const ComplexMatrix base = l.power > 0 ? mats[l.generator] : ComplexMatrix(mats[l.generator].inverse());
      for (int k = 0; k < std::abs(l.power); ++k) acc = base * acc;
    }
    return acc;
  }

  /// Same names and relations, generators replaced by their nu-th powers.
  ProjectivePresentation powered(int nu) const {
    std::vector<ProjectiveClass> gens;
    for (const auto& g : generators_) gens.push_back(g.power(nu));
    std::vector<Word> kept;
    for (const auto& w : relations_) {
      std::vector<ComplexMatrix> lifts;
      for (const auto& g : gens) lifts.push_back(g.canonical());
      const ComplexMatrix v = evaluate(w, lifts);
      if (!proj_equal(v, ComplexMatrix::Identity(v.rows(), v.cols()), 1e-8))
        raise(ErrorCode::InvalidArgument, "a relation does not survive raising generators to the power " +
                                              std::to_string(nu));
      kept.push_back(w);
    }
    return {rank_, names_, std::move(gens), std::move(kept), poles_};
  }

 private:
  std::size_t rank_;
  std::vector<std::string> names_;
  std::vector<ProjectiveClass> generators_;
  std::vector<Word> relations_;
  std::optional<std::vector<Complex>> poles_;
};

struct LiftReport {
  std::vector<ComplexMatrix> lifts;
  std::vector<Complex> obstruction_scalars;
  bool success = true;
};

struct PowerLiftReport {
  int nu = 1;
  LiftReport before;
  LiftReport after;
};

namespace detail {

inline constexpr double kLiftTolerance = 1e-8;

inline bool is_one(Complex z) { return std::abs(z - 1.0) < kLiftTolerance; }

}  // namespace detail

/// Commutator scalars of the det-one lifts of a projectively commuting
/// tuple: N_i N_j N_i^-1 = lambda N_j for each pair i < j.
inline LiftReport lift_commuting(const std::vector<ProjectiveClass>& tuple) {
  LiftReport report;
  for (const auto& g : tuple) report.lifts.push_back(g.canonical());
  for (std::size_t i = 0; i < tuple.size(); ++i)
    for (std::size_t j = i + 1; j < tuple.size(); ++j) {
      const ComplexMatrix& a = report.lifts[i];
      const ComplexMatrix& b = report.lifts[j];
      const ComplexMatrix conj = a * b * a.inverse();
      if (!proj_equal(conj, b, 1e-8))
        raise(ErrorCode::NotProjectivelyCommuting,
              "generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute projectively");
      const Complex lambda = best_scalar(conj, b);
      report.obstruction_scalars.push_back(lambda);
      if (!detail::is_one(lambda)) report.success = false;
    }
  if (!report.success) {
    bool all_pm = true;
    for (const auto& l : report.lifts) all_pm = all_pm && property_Pm(l);
    if (all_pm) raise(ErrorCode::ToleranceNotMet, "commutator scalar differs from 1 although P_m holds");
  }
  return report;
}

namespace detail {

inline LiftReport evaluate_relations(const ProjectivePresentation& p, std::vector<ComplexMatrix> lifts) {
  LiftReport report;
  report.lifts = std::move(lifts);
  const double m = double(p.rank());
  for (const auto& w : p.relations()) {
    const ComplexMatrix v = ProjectivePresentation::evaluate(w, report.lifts);
    const Complex lambda = v.trace() / m;
    report.obstruction_scalars.push_back(lambda);
    if (!is_one(lambda) || (v - ComplexMatrix::Identity(v.rows(), v.cols())).norm() > kLiftTolerance * std::sqrt(m))
      report.success = false;
  }
  return report;
}

// SL_m lifts are determined up to m-th roots of unity. Starting from the
// canonical lifts, try every rescaling (when there are few enough) and keep
// the first that satisfies all relations.
inline LiftReport lift_relations(const ProjectivePresentation& p) {
  const auto base = p.canonical_lifts();
  LiftReport report = evaluate_relations(p, base);
  const long m = long(p.rank());
  const std::size_t k = base.size();
  if (report.success || m == 1 || k == 0) return report;
  double combos = std::pow(double(m), double(k));
  if (combos > 65536.0) return report;
  std::vector<long> shift(k, 0);
  for (long n = 1; n < long(combos); ++n) {
    long rest = n;
    for (std::size_t g = 0; g < k; ++g) {
      shift[g] = rest % m;
      rest /= m;
    }
    std::vector<ComplexMatrix> lifts = base;
    for (std::size_t g = 0; g < k; ++g) lifts[g] *= std::polar(1.0, 2.0 * kPi * double(shift[g]) / double(m));
    LiftReport trial = evaluate_relations(p, std::move(lifts));
    if (trial.success) return trial;
  }
  return report;
}

inline void require_pairwise_commuting(const std::vector<ProjectiveClass>& gens, ErrorCode code) {
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const ComplexMatrix& a = gens[i].canonical();
      const ComplexMatrix& b = gens[j].canonical();
      if (!proj_equal(a * b, b * a, 1e-8))
        raise(code, "generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute projectively");
    }
}

// Normalized logarithms of commuting representatives, checked to commute.
inline std::vector<ComplexMatrix> commuting_logs(const std::vector<ProjectiveClass>& gens) {
  std::vector<ComplexMatrix> logs;
  for (const auto& g : gens) {
    if (!is_diagonalizable(g.rep())) raise(ErrorCode::NonDiagonalizableFamily, "a lift is not diagonalizable");
    logs.push_back(mat_log_normalized(g.rep()));
  }
  if (!commuting(std::span<const ComplexMatrix>(logs), 1e-8))
    raise(ErrorCode::NonDiagonalizableFamily, "logarithms of the lifts do not commute");
  return logs;
}

}  // namespace detail

/// Local model D_A whose coordinate-circle monodromy realizes the tuple.
/// Residues are normalized logarithms of the given representatives.
/// P_m on every element guarantees the linear lifts commute; tuples that
/// commute linearly without it are accepted too.
inline LocalModel local_realize(const std::vector<ProjectiveClass>& tuple, double tol = 1e-10) {
  if (tuple.empty()) raise(ErrorCode::InvalidArgument, "empty tuple");
  const std::size_t m = tuple.front().dim();
  for (const auto& g : tuple)
    if (g.dim() != m) raise(ErrorCode::DimensionMismatch, "tuple elements differ in size");
  const LiftReport lift = lift_commuting(tuple);
  if (!lift.success) raise(ErrorCode::InvalidArgument, "lifts commute only up to a nontrivial scalar");
  const auto logs = detail::commuting_logs(tuple);

  LocalModel model = LocalModel::from_numeric(tuple.size(), logs);
  const auto rep = local_monodromy(LogConnection::from(model), tol);
  for (std::size_t j = 0; j < tuple.size(); ++j)
    if (!proj_equal(rep.matrices[j], tuple[j].rep(), 1e-7))
      raise(ErrorCode::ToleranceNotMet, "local model monodromy does not reproduce generator " + std::to_string(j));
  return model;
}

/// lcm of the finite orders of eigenvalue ratios of the lifts.
inline long lifting_exponent(const std::vector<ComplexMatrix>& lifts, int k_max = 360) {
  constexpr double kTol = 1e-9;
  long nu = 1;
  for (const auto& mat : lifts) {
    const auto ev = eigenvalues(mat);
    for (Complex lam : ev)
      if (std::abs(lam) == 0.0) raise(ErrorCode::SingularMatrix, "lift is not invertible");
    for (std::size_t a = 0; a < ev.size(); ++a)
      for (std::size_t b = 0; b < ev.size(); ++b) {
        if (a == b) continue;
        Complex r = ev[a] / ev[b];
        if (std::abs(std::abs(r) - 1.0) > kTol) continue;
        r /= std::abs(r);
        int order = 0;
        Complex pw = 1.0;
        for (int k = 1; k <= k_max && order == 0; ++k) {
          pw *= r;
          if (std::abs(pw - 1.0) < kTol) order = k;
        }
        if (order > 0) {
          nu = std::lcm(nu, long(order));
          continue;
        }
        // Unit-modulus ratio without small order: ambiguous if its angle is
        // numerically a rational with a moderately larger denominator.
        const double turns = std::arg(r) / (2.0 * kPi);
        for (long q = k_max + 1; q <= 4L * k_max; ++q) {
          const double p = std::round(turns * double(q));
          if (std::abs(turns - p / double(q)) < kTol && std::gcd(long(std::abs(p)), q) == 1)
            raise(ErrorCode::OrderOverflow, "eigenvalue ratio looks like a root of unity of order " +
                                                std::to_string(q) + " > " + std::to_string(k_max));
        }
      }
  }
  return nu;
}

inline long lifting_exponent(const ProjectivePresentation& p, int k_max = 360) {
  return lifting_exponent(p.canonical_lifts(), k_max);
}

/// Obstruction scalars of the relations before and after replacing every
/// generator by its nu-th power.
inline PowerLiftReport verify_lift_after_power(const ProjectivePresentation& p, int nu) {
  if (nu < 1) raise(ErrorCode::InvalidArgument, "nu must be at least 1");
  PowerLiftReport out;
  out.nu = nu;
  out.before = detail::lift_relations(p);
  out.after = detail::lift_relations(p.powered(nu));
  return out;
}

/// Fuchsian system on the projective line with abelian monodromy realizing
/// the presentation at its poles.
inline FuchsianSystem realize_fuchsian(const ProjectivePresentation& p, double tol = 1e-10) {
  if (!p.poles()) raise(ErrorCode::InvalidArgument, "presentation carries no pole list");
  detail::require_pairwise_commuting(p.generators(), ErrorCode::NonAbelianUnsupported);
  const LiftReport lift = lift_commuting(p.generators());
  if (!lift.success) raise(ErrorCode::NonAbelianUnsupported, "lifts commute only up to a nontrivial scalar");
  const auto logs = detail::commuting_logs(p.generators());

  FuchsianSystem f = FuchsianSystem::from_numeric(*p.poles(), logs);
  for (const auto& a : logs)
    for (Complex mu : eigenvalues(a))
      if (mu.real() < -1e-12 || mu.real() >= 1.0)
        raise(ErrorCode::ToleranceNotMet, "residue eigenvalue outside the strip 0 <= Re < 1");
  const auto rep = projective_monodromy(LogConnection::from(f), standard_loops(f), tol);
  for (std::size_t j = 0; j < logs.size(); ++j)
    if (!proj_equal(rep.matrices[j], p.generators()[j], 1e-7))
      raise(ErrorCode::ToleranceNotMet, "realized monodromy does not reproduce generator " + p.names()[j]);
  return f;
}

}  // namespace logconnect
