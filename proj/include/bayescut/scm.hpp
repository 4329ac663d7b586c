#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

#include "bayescut/graph.hpp"
#include "bayescut/random.hpp"

namespace bayescut {

/// One value per vertex.
using Assignment = std::vector<int>;

inline constexpr double kDefaultPositivityFloor = 0.01;
inline constexpr std::size_t kDefaultTableBudget = std::size_t{1} << 24;
/// Absolute per-entry tolerance under which two distributions count as equal.
inline constexpr double kDistributionTolerance = 1e-9;

/// Perfect intervention do(targets = values). Empty targets is observational.
struct Intervention {
  VertexSet targets;
  std::vector<int> values;

  bool consistent_with(std::span<const int> assignment) const;
};

/// Dense probability table over all joint assignments. Vertex 0 is the
/// fastest-varying index.
class JointTable {
 public:
  JointTable() = default;
  /// Validates entries >= 0 and total mass 1 within 1e-9 (InvalidArgument).
  JointTable(std::vector<int> cardinalities, std::vector<double> probabilities);

  int num_vars() const { return static_cast<int>(cardinalities_.size()); }
  std::size_t size() const { return probabilities_.size(); }
  const std::vector<int>& cardinalities() const { return cardinalities_; }
  std::span<const double> probabilities() const { return probabilities_; }
  double operator[](std::size_t index) const { return probabilities_[index]; }

  std::size_t index_of(std::span<const int> assignment) const;
  Assignment assignment_of(std::size_t index) const;
  double probability(std::span<const int> assignment) const {
    return probabilities_[index_of(assignment)];
  }

  /// Marginal over `vars` (in the given order, first fastest).
  std::vector<double> marginal(std::span<const Vertex> vars) const;

 private:
  std::vector<int> cardinalities_;
  std::vector<std::size_t> strides_;
  std::vector<double> probabilities_;
};

/// Number of entries of a dense table over `cardinalities`; throws
/// ResourceError above `budget`.
std::size_t table_size(std::span<const int> cardinalities, std::size_t budget = kDefaultTableBudget);

/// Discrete structural causal model: a DAG with one conditional probability
/// table per vertex. cpt(v) is row-major with the vertex's own value fastest;
/// the row index enumerates parent assignments with the lowest-numbered
/// parent fastest.
class DiscreteScm {
 public:
  /// Throws InvalidArgument if the graph is not a DAG, a cardinality is below
  /// 2, a table has the wrong shape, a row does not sum to 1 within 1e-9, or
  /// any entry is below `positivity_floor`.
  DiscreteScm(MixedGraph dag, std::vector<int> cardinalities, std::vector<std::vector<double>> cpts,
              double positivity_floor = kDefaultPositivityFloor);

  int size() const { return dag_.size(); }
  const MixedGraph& dag() const { return dag_; }
  const std::vector<int>& cardinalities() const { return cardinalities_; }
  const VertexSet& parents(Vertex v) const { return parents_[v]; }
  const std::vector<double>& cpt(Vertex v) const { return cpts_[v]; }
  const std::vector<std::vector<double>>& cpts() const { return cpts_; }
  double positivity_floor() const { return positivity_floor_; }

  /// Row of cpt(v) selected by the parent values in `assignment`.
  std::size_t parent_row(Vertex v, std::span<const int> assignment) const;

 private:
  MixedGraph dag_;
  std::vector<int> cardinalities_;
  std::vector<VertexSet> parents_;
  std::vector<std::vector<double>> cpts_;
  double positivity_floor_;
};

/// {"dag": {...}, "cardinalities": [...], "cpts": [[[row], ...], ...],
///  "positivity_floor": eps}
nlohmann::json to_json(const DiscreteScm& scm);
DiscreteScm scm_from_json(const nlohmann::json& doc);

/// Exact joint via the Markov factorization. Throws ResourceError when the
/// table would exceed `budget` entries.
JointTable joint_distribution(const DiscreteScm& scm, std::size_t budget = kDefaultTableBudget);

/// P(target | given = given_values), read off the joint. Throws NumericError
/// if the conditioning event has zero mass.
std::vector<double> conditional(const JointTable& joint, Vertex target, std::span<const Vertex> given,
                                std::span<const int> given_values);

/// Conditional probability tables P(v | pa(v)) for every vertex, with parent
/// sets taken from an arbitrary DAG over the joint's variables and values
/// read from the joint. Evaluates the truncated factorization one
/// assignment at a time.
class DagConditionals {
 public:
  DagConditionals(const JointTable& joint, const MixedGraph& dag);

  const MixedGraph& dag() const { return dag_; }
  const VertexSet& parents(Vertex v) const { return parents_[v]; }
  const std::vector<double>& cpt(Vertex v) const { return cpts_[v]; }

  /// prod_{v not in iv.targets} P(x_v | x_pa(v)) when x agrees with iv, else 0.
  double interventional_probability(std::span<const int> x, const Intervention& iv) const;
  double log_interventional_probability(std::span<const int> x, const Intervention& iv) const;

 private:
  double factor(Vertex v, std::span<const int> x) const;

  MixedGraph dag_;
  std::vector<int> cardinalities_;
  std::vector<VertexSet> parents_;
  std::vector<std::vector<double>> cpts_;
};

/// Interventional distribution by the truncated factorization over `dag`,
/// with every conditional computed from `joint`.
JointTable truncated_factorization(const JointTable& joint, const MixedGraph& dag, const Intervention& iv);

/// Ancestral sampling from the mutilated model.
Assignment sample_interventional(const DiscreteScm& scm, const Intervention& iv, Rng& rng);

/// Natural-log KL divergence. Throws NumericError when q = 0 where p > 0 and
/// InvalidArgument on a shape mismatch.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const JointTable& p, const JointTable& q);

/// Total variation distance, half the L1 distance.
double tvd(std::span<const double> p, std::span<const double> q);
double tvd(const JointTable& p, const JointTable& q);

/// Relative frequencies of `samples` as a table.
JointTable empirical_table(std::span<const int> cardinalities, std::span<const Assignment> samples);

}  // namespace bayescut
