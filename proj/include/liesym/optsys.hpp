#ifndef LIESYM_OPTSYS_HPP
#define LIESYM_OPTSYS_HPP

#include "liesym/liealg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace liesym {

/// Adjoint maps of every basis direction, built once.
struct AdjointAction {
  const LieAlgebra* alg = nullptr;
  AdjointSign sign = AdjointSign::series;
  std::vector<AdjointMap> maps;
  /// Coordinates spanning [g, g] when it is a coordinate subspace, else empty
  /// with derived_is_coordinate false.
  std::vector<std::size_t> derived;
  std::vector<std::size_t> quotient;
  bool derived_is_coordinate = true;

  std::size_t dimension() const { return maps.size(); }
};

AdjointAction make_action(const LieAlgebra& alg, AdjointSign sign = AdjointSign::series);

struct AdjointImage {
  VectorQ exact;           // valid when is_exact
  Eigen::VectorXd numeric; // always filled
  bool is_exact = true;
};

/// Ad(exp(eps X_i)) applied to a. Each coordinate is collected as one
/// exponential polynomial before evaluation, so cancellations stay exact.
AdjointImage adjoint_apply(const AdjointAction& act, std::size_t i, const GroupParam& eps, const VectorQ& a);

/// "X2-X1", "2/3*X3+X4": positive terms first, each group by basis index.
std::string element_label(const VectorQ& a, const std::vector<std::string>& labels);
/// Parses a label such as "X4-X3" or "X4 + 2/3*X3" into coordinates.
VectorQ parse_element(const std::string& text, const LieAlgebra& alg);

struct Move {
  enum class Kind { scale, adjoint };
  Kind kind = Kind::scale;
  std::size_t direction = 0;  // adjoint moves
  GroupParam eps;             // adjoint moves
  Rational factor;            // scale moves
  VectorQ after;
  std::string purpose;        // "kill a1", "scale |a2| to 1", "overall"

  std::string str(const std::vector<std::string>& labels) const;
};

struct Normalization {
  VectorQ input;
  VectorQ normal;
  std::string label;
  std::string proof_case;
  std::vector<Move> transcript;
};

/// Greedy normal form: overall scaling fixes the last nonzero coordinate
/// outside [g, g] (or the last nonzero one) to 1, then each [g, g] coordinate
/// from the first is killed by an adjoint move that changes only that
/// coordinate and is affine in eps, or scaled to magnitude 1 by a move that
/// multiplies only that coordinate by exp(lambda eps).
Normalization normalize_element(const AdjointAction& act, const VectorQ& a);

/// Case label in the proof's numbering: a_n != 0 is "1", else "2"; then
/// a_{n-1} != 0 is "a", else "b"; then a_{n-2} != 0 is "1", else "2". The
/// a_n != 0 branch is not split below a_{n-1}.
std::string proof_case(const VectorQ& normal);

/// Replays a transcript; false when any step disagrees with its recorded state.
bool replay(const AdjointAction& act, const Normalization& n);

struct OrbitInvariants {
  std::vector<Rational> quotient;  // projective, last nonzero entry 1
  long ad_rank = 0;
  long normalizer_dim = 0;
  std::vector<Rational> character;  // only when the span is an ideal
  std::vector<int> signs;           // sign-preserved [g, g] coordinates, relative
  friend bool operator==(const OrbitInvariants&, const OrbitInvariants&) = default;
};

OrbitInvariants orbit_invariants(const AdjointAction& act, const VectorQ& a);

struct Representative {
  VectorQ element;
  std::string label;
  std::string provenance;  // "paper" or "derived"
};

struct InequivalenceReport {
  std::vector<Representative> reps;
  /// Empty string when not separated; otherwise the invariant that differs.
  std::vector<std::vector<std::string>> reason;
  bool all_distinct() const;
};

InequivalenceReport verify_inequivalent(const AdjointAction& act, const std::vector<Representative>& reps);

/// Deterministic integers from mt19937_64 by rejection, independent of the
/// standard library's distribution implementations.
class SampleRng {
public:
  explicit SampleRng(std::uint64_t seed) : g_(seed) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// Numerator in [-9, 9] without 0, denominator in [1, 9].
  Rational rational();

private:
  std::mt19937_64 g_;
};

/// Sample k draws support pattern (k mod (2^n - 1)) + 1, as a bit mask over the
/// coordinates, and fills the support with random rationals.
std::vector<VectorQ> draw_samples(std::size_t dimension, std::size_t samples, std::uint64_t seed);

struct NormalFormCount {
  VectorQ normal;
  std::string label;
  std::string proof_case;
  std::size_t count = 0;
  bool in_paper = false;
};

struct ClassifyReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<NormalFormCount> forms;  // ordered by first appearance
  std::map<std::string, std::size_t> case_counts;
  std::vector<Normalization> runs;
  bool replay_ok = true;
};

ClassifyReport classify(const AdjointAction& act, std::size_t samples, std::uint64_t seed,
                        const std::vector<VectorQ>& paper = {});

/// base + t * direction over t != 0, all sharing one normal-form shape.
struct NormalFamily {
  VectorQ base, direction;
  std::string label;              // e.g. "X4+a*X3"
  std::vector<Rational> seen;     // t values met in the samples
  /// t where ad restricted to [g, g] is singular: some derived coordinate
  /// survives normalization there.
  std::vector<Rational> degenerate;
  std::vector<Representative> exceptional;
};

/// Normal forms of a report that are not in the reference list.
struct ExtraClasses {
  std::vector<Representative> singles;
  std::vector<NormalFamily> families;
};

ExtraClasses extra_classes(const AdjointAction& act, const ClassifyReport& rep);

/// det of ad(base + t dir) on [g, g], coefficients low to high in t.
std::vector<Rational> derived_determinant(const AdjointAction& act, const VectorQ& base, const VectorQ& dir);

}  // namespace liesym

#endif  // LIESYM_OPTSYS_HPP
