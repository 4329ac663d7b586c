#include "bayescut/scm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bayescut/errors.hpp"
#include "bayescut/graph_io.hpp"

namespace bayescut {

bool Intervention::consistent_with(std::span<const int> assignment) const {
  for (std::size_t i = 0; i < targets.size(); ++i)
    if (assignment[targets[i]] != values[i]) return false;
  return true;
}

namespace {

void check_intervention(const Intervention& iv, std::span<const int> cardinalities) {
  if (iv.targets.size() != iv.values.size())
    throw InvalidArgument("intervention: targets and values differ in length");
  for (std::size_t i = 0; i < iv.targets.size(); ++i) {
    const Vertex v = iv.targets[i];
    if (v < 0 || v >= static_cast<int>(cardinalities.size()))
      throw InvalidArgument("intervention: target out of range");
    if (i > 0 && iv.targets[i - 1] >= v) throw InvalidArgument("intervention: targets must be sorted and unique");
    if (iv.values[i] < 0 || iv.values[i] >= cardinalities[v])
      throw InvalidArgument("intervention: value out of range for vertex " + std::to_string(v));
  }
}

}  // namespace

std::size_t table_size(std::span<const int> cardinalities, std::size_t budget) {
  std::size_t size = 1;
  for (int c : cardinalities) {
    if (c < 1) throw InvalidArgument("table_size: cardinality must be positive");
    if (size > budget / static_cast<std::size_t>(c))
      throw ResourceError("joint table exceeds the budget of " + std::to_string(budget) + " entries");
    size *= static_cast<std::size_t>(c);
  }
  return size;
}

JointTable::JointTable(std::vector<int> cardinalities, std::vector<double> probabilities)
    : cardinalities_(std::move(cardinalities)), probabilities_(std::move(probabilities)) {
  std::size_t stride = 1;
  strides_.reserve(cardinalities_.size());
  for (int c : cardinalities_) {
    if (c < 1) throw InvalidArgument("JointTable: cardinality must be positive");
    strides_.push_back(stride);
    stride *= static_cast<std::size_t>(c);
  }
  if (probabilities_.size() != stride) throw InvalidArgument("JointTable: size does not match cardinalities");
  double mass = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0)) throw InvalidArgument("JointTable: negative or NaN entry");
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-9) throw InvalidArgument("JointTable: total mass is " + std::to_string(mass));
}

std::size_t JointTable::index_of(std::span<const int> assignment) const {
  if (assignment.size() != cardinalities_.size()) throw InvalidArgument("JointTable: assignment length mismatch");
  std::size_t index = 0;
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] < 0 || assignment[v] >= cardinalities_[v])
      throw InvalidArgument("JointTable: value out of range");
    index += strides_[v] * static_cast<std::size_t>(assignment[v]);
  }
  return index;
}

Assignment JointTable::assignment_of(std::size_t index) const {
  Assignment out(cardinalities_.size());
  for (std::size_t v = 0; v < out.size(); ++v) {
    out[v] = static_cast<int>(index % cardinalities_[v]);
    index /= cardinalities_[v];
  }
  return out;
}

std::vector<double> JointTable::marginal(std::span<const Vertex> vars) const {
  std::vector<std::size_t> sub_strides(vars.size());
  std::size_t sub_size = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i] < 0 || vars[i] >= num_vars()) throw InvalidArgument("marginal: vertex out of range");
    sub_strides[i] = sub_size;
    sub_size *= static_cast<std::size_t>(cardinalities_[vars[i]]);
  }
  std::vector<double> out(sub_size, 0.0);
  for (std::size_t index = 0; index < probabilities_.size(); ++index) {
    std::size_t sub = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const Vertex v = vars[i];
      sub += sub_strides[i] * ((index / strides_[v]) % cardinalities_[v]);
    }
    out[sub] += probabilities_[index];
  }
  return out;
}

DiscreteScm::DiscreteScm(MixedGraph dag, std::vector<int> cardinalities, std::vector<std::vector<double>> cpts,
                         double positivity_floor)
    : dag_(std::move(dag)),
      cardinalities_(std::move(cardinalities)),
      cpts_(std::move(cpts)),
      positivity_floor_(positivity_floor) {
  const int n = dag_.size();
  if (!dag_.is_dag()) throw InvalidArgument("DiscreteScm: graph is not a DAG");
  if (static_cast<int>(cardinalities_.size()) != n || static_cast<int>(cpts_.size()) != n)
    throw InvalidArgument("DiscreteScm: cardinalities/cpts do not match the vertex count");
  if (!(positivity_floor_ > 0.0)) throw InvalidArgument("DiscreteScm: positivity floor must be positive");
  parents_.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    if (cardinalities_[v] < 2) throw InvalidArgument("DiscreteScm: cardinality below 2 at vertex " + std::to_string(v));
    parents_[v] = dag_.parents(v);
    std::size_t rows = 1;
    for (Vertex p : parents_[v]) rows *= static_cast<std::size_t>(cardinalities_[p]);
    const std::size_t card = static_cast<std::size_t>(cardinalities_[v]);
    if (cpts_[v].size() != rows * card)
      throw InvalidArgument("DiscreteScm: cpt of vertex " + std::to_string(v) + " has the wrong size");
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t k = 0; k < card; ++k) {
        const double p = cpts_[v][r * card + k];
        if (!(p >= positivity_floor_))
          throw InvalidArgument("DiscreteScm: cpt entry below the positivity floor at vertex " + std::to_string(v));
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw InvalidArgument("DiscreteScm: cpt row does not sum to 1 at vertex " + std::to_string(v));
    }
  }
}

std::size_t DiscreteScm::parent_row(Vertex v, std::span<const int> assignment) const {
  std::size_t row = 0;
  std::size_t stride = 1;
  for (Vertex p : parents_[v]) {
    row += stride * static_cast<std::size_t>(assignment[p]);
    stride *= static_cast<std::size_t>(cardinalities_[p]);
  }
  return row;
}

nlohmann::json to_json(const DiscreteScm& scm) {
  nlohmann::json doc;
  doc["dag"] = graph_to_json(scm.dag());
  doc["cardinalities"] = scm.cardinalities();
  nlohmann::json cpts = nlohmann::json::array();
  for (Vertex v = 0; v < scm.size(); ++v) {
    const std::size_t card = static_cast<std::size_t>(scm.cardinalities()[v]);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r * card < scm.cpt(v).size(); ++r)
      rows.push_back(std::vector<double>(scm.cpt(v).begin() + r * card, scm.cpt(v).begin() + (r + 1) * card));
    cpts.push_back(std::move(rows));
  }
  doc["cpts"] = std::move(cpts);
  doc["positivity_floor"] = scm.positivity_floor();
  return doc;
}

DiscreteScm scm_from_json(const nlohmann::json& doc) {
  try {
    MixedGraph dag = graph_from_json(doc.at("dag"));
    auto cards = doc.at("cardinalities").get<std::vector<int>>();
    std::vector<std::vector<double>> cpts;
    for (const auto& rows : doc.at("cpts")) {
      std::vector<double> flat;
      for (const auto& row : rows)
        for (const auto& p : row) flat.push_back(p.get<double>());
      cpts.push_back(std::move(flat));
    }
    const double floor = doc.value("positivity_floor", kDefaultPositivityFloor);
    return DiscreteScm(std::move(dag), std::move(cards), std::move(cpts), floor);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("scm json: ") + e.what());
  }
}

JointTable joint_distribution(const DiscreteScm& scm, std::size_t budget) {
  const std::size_t size = table_size(scm.cardinalities(), budget);
  std::vector<double> probabilities(size);
  Assignment x(scm.size(), 0);
  for (std::size_t index = 0; index < size; ++index) {
    double p = 1.0;
    for (Vertex v = 0; v < scm.size(); ++v)
      p *= scm.cpt(v)[scm.parent_row(v, x) * scm.cardinalities()[v] + x[v]];
    probabilities[index] = p;
    // Advance the little-endian counter.
    for (std::size_t v = 0; v < x.size(); ++v) {
      if (++x[v] < scm.cardinalities()[v]) break;
      x[v] = 0;
    }
  }
  return JointTable(scm.cardinalities(), std::move(probabilities));
}

std::vector<double> conditional(const JointTable& joint, Vertex target, std::span<const Vertex> given,
                                std::span<const int> given_values) {
  if (given.size() != given_values.size()) throw InvalidArgument("conditional: given/values length mismatch");
  std::vector<Vertex> vars{target};
  vars.insert(vars.end(), given.begin(), given.end());
  const auto& cards = joint.cardinalities();
  std::size_t offset = 0;
  std::size_t stride = static_cast<std::size_t>(cards.at(target));
  for (std::size_t i = 0; i < given.size(); ++i) {
    if (given[i] == target) throw InvalidArgument("conditional: target among the conditioning set");
    if (given_values[i] < 0 || given_values[i] >= cards.at(given[i]))
      throw InvalidArgument("conditional: given value out of range");
    offset += stride * static_cast<std::size_t>(given_values[i]);
    stride *= static_cast<std::size_t>(cards[given[i]]);
  }
  const std::vector<double> m = joint.marginal(vars);
  std::vector<double> out(m.begin() + offset, m.begin() + offset + cards[target]);
  const double mass = std::accumulate(out.begin(), out.end(), 0.0);
  if (!(mass > 0.0)) throw NumericError("conditional: conditioning event has zero mass");
  for (double& p : out) p /= mass;
  return out;
}

DagConditionals::DagConditionals(const JointTable& joint, const MixedGraph& dag)
    : dag_(dag), cardinalities_(joint.cardinalities()) {
  const int n = dag.size();
  if (n != joint.num_vars()) throw InvalidArgument("DagConditionals: graph and table sizes differ");
  if (!dag.is_dag()) throw InvalidArgument("DagConditionals: graph is not a DAG");
  parents_.resize(n);
  cpts_.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    parents_[v] = dag.parents(v);
    std::vector<Vertex> vars{v};
    vars.insert(vars.end(), parents_[v].begin(), parents_[v].end());
    std::vector<double> m = joint.marginal(vars);
    const std::size_t card = static_cast<std::size_t>(cardinalities_[v]);
    for (std::size_t r = 0; r * card < m.size(); ++r) {
      double mass = 0.0;
      for (std::size_t k = 0; k < card; ++k) mass += m[r * card + k];
      if (!(mass > 0.0)) throw NumericError("DagConditionals: parent configuration with zero mass");
      for (std::size_t k = 0; k < card; ++k) m[r * card + k] /= mass;
    }
    cpts_[v] = std::move(m);
  }
}

double DagConditionals::factor(Vertex v, std::span<const int> x) const {
  std::size_t row = 0;
  std::size_t stride = 1;
  for (Vertex p : parents_[v]) {
    row += stride * static_cast<std::size_t>(x[p]);
    stride *= static_cast<std::size_t>(cardinalities_[p]);
  }
  return cpts_[v][row * cardinalities_[v] + x[v]];
}

double DagConditionals::interventional_probability(std::span<const int> x, const Intervention& iv) const {
  if (!iv.consistent_with(x)) return 0.0;
  double p = 1.0;
  std::size_t next = 0;
  for (Vertex v = 0; v < dag_.size(); ++v) {
    if (next < iv.targets.size() && iv.targets[next] == v) {
      ++next;
      continue;
    }
    p *= factor(v, x);
  }
  return p;
}

double DagConditionals::log_interventional_probability(std::span<const int> x, const Intervention& iv) const {
  if (!iv.consistent_with(x)) return -INFINITY;
  double lp = 0.0;
  std::size_t next = 0;
  for (Vertex v = 0; v < dag_.size(); ++v) {
    if (next < iv.targets.size() && iv.targets[next] == v) {
      ++next;
      continue;
    }
    lp += std::log(factor(v, x));
  }
  return lp;
}

JointTable truncated_factorization(const JointTable& joint, const MixedGraph& dag, const Intervention& iv) {
  check_intervention(iv, joint.cardinalities());
  const DagConditionals factors(joint, dag);
  std::vector<double> probabilities(joint.size());
  for (std::size_t index = 0; index < joint.size(); ++index)
    probabilities[index] = factors.interventional_probability(joint.assignment_of(index), iv);
  return JointTable(joint.cardinalities(), std::move(probabilities));
}

Assignment sample_interventional(const DiscreteScm& scm, const Intervention& iv, Rng& rng) {
  check_intervention(iv, scm.cardinalities());
  Assignment x(scm.size(), 0);
  std::vector<int> fixed(scm.size(), -1);
  for (std::size_t i = 0; i < iv.targets.size(); ++i) fixed[iv.targets[i]] = iv.values[i];
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Vertex v : topological_order(scm.dag())) {
    if (fixed[v] >= 0) {
      x[v] = fixed[v];
      continue;
    }
    const int card = scm.cardinalities()[v];
    const double* row = scm.cpt(v).data() + scm.parent_row(v, x) * card;
    const double u = unit(rng);
    double cumulative = 0.0;
    int value = card - 1;
    for (int k = 0; k < card; ++k) {
      cumulative += row[k];
      if (u < cumulative) {
        value = k;
        break;
      }
    }
    x[v] = value;
  }
  return x;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("kl_divergence: shape mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) throw NumericError("kl_divergence: q vanishes where p is positive");
    total += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(total, 0.0);
}

double kl_divergence(const JointTable& p, const JointTable& q) {
  if (p.cardinalities() != q.cardinalities()) throw InvalidArgument("kl_divergence: shape mismatch");
  return kl_divergence(p.probabilities(), q.probabilities());
}

double tvd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("tvd: shape mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
  return 0.5 * total;
}

double tvd(const JointTable& p, const JointTable& q) {
  if (p.cardinalities() != q.cardinalities()) throw InvalidArgument("tvd: shape mismatch");
  return tvd(p.probabilities(), q.probabilities());
}

JointTable empirical_table(std::span<const int> cardinalities, std::span<const Assignment> samples) {
  if (samples.empty()) throw InvalidArgument("empirical_table: no samples");
  std::vector<int> cards(cardinalities.begin(), cardinalities.end());
  std::vector<double> counts(table_size(cards), 0.0);
  JointTable shape(cards, [&] {
    std::vector<double> uniform(counts.size(), 1.0 / counts.size());
    return uniform;
  }());
  for (const auto& x : samples) counts[shape.index_of(x)] += 1.0;
  for (double& c : counts) c /= static_cast<double>(samples.size());
  return JointTable(std::move(cards), std::move(counts));
}

}  // namespace bayescut
