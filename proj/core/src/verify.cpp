#include "cat5/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <thread>

#include "cat5/assoc_form.hpp"
#include "cat5/error.hpp"

namespace cat5 {

// ---------------------------------------------------------------------------
// Sampled geodesics

namespace {

void enumerate_keys(const std::vector<std::size_t>& verts, int remaining, std::size_t pos,
                    std::array<int, 5>& key, const std::function<void()>& emit) {
  if (pos + 1 == verts.size()) {
    key[verts[pos]] = remaining;
    emit();
    key[verts[pos]] = 0;
    return;
  }
  for (int a = 0; a <= remaining; ++a) {
    key[verts[pos]] = a;
    enumerate_keys(verts, remaining - a, pos + 1, key, emit);
  }
  key[verts[pos]] = 0;
}

}  // namespace

SampledComplexGraph build_sampled_graph(const SpacelikeComplex& cx, int resolution) {
  if (resolution < 1) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  SampledComplexGraph g;
  g.resolution = resolution;
  const auto emb = cx.embedding();
  const std::size_t dim = emb.ambient_dim();
  std::map<std::array<int, 5>, std::size_t> index;

  for (std::size_t s = 0; s < cx.simplices.size(); ++s) {
    const auto verts = cx.simplices[s].vertices();
    std::vector<std::size_t> members;
    std::array<int, 5> key{};
    enumerate_keys(verts, resolution, 0, key, [&] {
      auto [it, fresh] = index.try_emplace(key, g.nodes.size());
      if (fresh) {
        SampledComplexGraph::Node node;
        node.key = key;
        node.point.assign(dim, 0.0);
        for (std::size_t v = 0; v < 5; ++v)
          if (key[v] != 0)
            for (std::size_t k = 0; k < dim; ++k)
              node.point[k] += (static_cast<double>(key[v]) / resolution) * emb.coords[v][k];
        g.nodes.push_back(std::move(node));
      }
      g.nodes[it->second].simplices.push_back(s);
      members.push_back(it->second);
    });
    g.simplex_nodes.push_back(std::move(members));
  }
  for (std::size_t v = 0; v < 5; ++v) {
    std::array<int, 5> key{};
    key[v] = resolution;
    const auto it = index.find(key);
    if (it == index.end())
      throw Error(ErrorCode::EdgesNotCovered, "vertex " + std::to_string(v) + " not in the complex");
    g.vertex_node[v] = it->second;
  }

  double min_w = std::numeric_limits<double>::infinity();
  std::vector<double> diff(dim);
  for (const auto& members : g.simplex_nodes)
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto& pa = g.nodes[members[a]].point;
        const auto& pb = g.nodes[members[b]].point;
        for (std::size_t k = 0; k < dim; ++k) diff[k] = pa[k] - pb[k];
        min_w = std::min(min_w, emb.form(diff));
      }
  g.min_arc_form = std::isfinite(min_w) ? min_w : 0.0;
  return g;
}

std::vector<double> shortest_paths_from(const SampledComplexGraph& g, const SpacelikeComplex& cx,
                                        std::size_t source) {
  const auto emb = cx.embedding();
  const std::size_t dim = emb.ambient_dim();
  std::vector<double> dist(g.nodes.size(), std::numeric_limits<double>::infinity());
  std::vector<bool> done(g.nodes.size(), false);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.emplace(0.0, source);
  std::vector<double> diff(dim);
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = true;
    const auto& pu = g.nodes[u].point;
    for (std::size_t s : g.nodes[u].simplices)
      for (std::size_t w : g.simplex_nodes[s]) {
        if (done[w]) continue;
        const auto& pw = g.nodes[w].point;
        for (std::size_t k = 0; k < dim; ++k) diff[k] = pu[k] - pw[k];
        const double nd = du + std::sqrt(std::max(0.0, emb.form(diff)));
        if (nd < dist[w]) {
          dist[w] = nd;
          pq.emplace(nd, w);
        }
      }
  }
  return dist;
}

DistanceTable geodesic_upper_bounds(const SpacelikeComplex& cx, int resolution) {
  DistanceTable out{};
  const auto emb = cx.embedding();
  if (cx.ambient_geodesics) {
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        out[i][j] = i == j ? 0.0 : std::sqrt(std::max(0.0, emb.squared_distance(i, j)));
    return out;
  }
  const auto g = build_sampled_graph(cx, resolution);
  for (std::size_t i = 0; i < 5; ++i) {
    const auto dist = shortest_paths_from(g, cx, g.vertex_node[i]);
    for (std::size_t j = 0; j < 5; ++j) out[i][j] = dist[g.vertex_node[j]];
  }
  // Symmetrize: both directions bound the same intrinsic distance.
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      const double m = std::min(out[i][j], out[j][i]);
      out[i][j] = out[j][i] = m;
    }
  return out;
}

PreservationReport check_distance_preservation(const SpacelikeComplex& cx,
                                               const FiniteMetricSpace& space, int resolution) {
  if (space.size() != 5)
    throw Error(ErrorCode::InvalidArgument, "distance preservation needs a 5-point space");
  PreservationReport rep;
  rep.resolution = resolution;
  const double diam = space.diameter();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      const double d = space(i, j);
      const double r = std::abs(cx.edge_lengths[i][j] - d) / d;
      if (!rep.worst_edge || r > rep.max_edge_residual) {
        rep.max_edge_residual = r;
        rep.worst_edge = {i, j};
      }
      if (!(r <= 1e-9)) {
        std::ostringstream os;
        os.precision(17);
        os << "edge (" << i << "," << j << "): length " << cx.edge_lengths[i][j]
           << " vs distance " << d;
        rep.failures.push_back(os.str());
      }
    }

  rep.bounds = geodesic_upper_bounds(cx, resolution);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      const double gap = (rep.bounds[i][j] - space(i, j)) / diam;
      if (!rep.worst_geodesic_pair || gap < rep.min_geodesic_gap) {
        rep.min_geodesic_gap = gap;
        rep.worst_geodesic_pair = {i, j};
      }
      if (!(gap >= -1e-9)) {
        std::ostringstream os;
        os.precision(17);
        os << "pair (" << i << "," << j << "): geodesic bound " << rep.bounds[i][j]
           << " below distance " << space(i, j);
        rep.failures.push_back(os.str());
      }
    }
  rep.pass = rep.failures.empty();
  return rep;
}

PreservationReport check_distance_preservation(const EmbeddingResult& result, int resolution) {
  return check_distance_preservation(result.complex, result.space, resolution);
}

// ---------------------------------------------------------------------------
// Random metrics

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty range");
  // Rejection keeps the draw unbiased and library independent.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ index);
}

GeneratorOptions parse_generator(const std::string& name) {
  GeneratorOptions s;
  if (name == "tree") {
    s.kind = MetricKind::Tree;
  } else if (name == "perturbed_tree") {
    s.kind = MetricKind::PerturbedTree;
  } else if (name == "general") {
    s.kind = MetricKind::General;
  } else if (name.starts_with("euclidean_")) {
    s.kind = MetricKind::Euclidean;
    const auto digits = std::string_view(name).substr(10);
    int k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || k < 1 || k > 16)
      throw Error(ErrorCode::InvalidArgument, "bad euclidean dimension in '" + name + "'");
    s.euclidean_dim = k;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown generator '" + name + "'");
  }
  return s;
}

std::string generator_name(const GeneratorOptions& gen) {
  switch (gen.kind) {
    case MetricKind::Euclidean: return "euclidean_" + std::to_string(gen.euclidean_dim);
    case MetricKind::Tree: return "tree";
    case MetricKind::PerturbedTree: return "perturbed_tree";
    case MetricKind::General: return "general";
  }
  return "?";
}

namespace {

Matrix euclidean_sample(Rng& rng, std::size_t n, int k) {
  std::vector<std::vector<double>> pts(n, std::vector<double>(k));
  for (auto& p : pts)
    for (auto& c : p) c = rng.uniform();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (int c = 0; c < k; ++c) s += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
      d(i, j) = d(j, i) = std::sqrt(s);
    }
  return d;
}

// n points placed uniformly by length on the edges of a random weighted tree
// with 2n nodes.
Matrix tree_sample(Rng& rng, std::size_t n) {
  const std::size_t m = 2 * n;
  std::vector<std::size_t> parent(m, 0);
  std::vector<std::size_t> depth(m, 0);
  std::vector<double> weight(m, 0.0);  // weight[v]: edge v - parent[v]
  double total = 0.0;
  for (std::size_t v = 1; v < m; ++v) {
    parent[v] = rng.below(v);
    depth[v] = depth[parent[v]] + 1;
    weight[v] = rng.uniform(0.1, 1.0);
    total += weight[v];
  }
  auto node_dist = [&](std::size_t a, std::size_t b) {
    double s = 0.0;
    while (a != b) {
      if (depth[a] >= depth[b]) {
        s += weight[a];
        a = parent[a];
      } else {
        s += weight[b];
        b = parent[b];
      }
    }
    return s;
  };
  struct Pt {
    std::size_t edge;  // child endpoint
    double offset;     // distance from parent[edge]
  };
  std::vector<Pt> pts(n);
  for (auto& p : pts) {
    double u = rng.uniform() * total;
    p.edge = m - 1;
    for (std::size_t v = 1; v < m; ++v) {
      if (u < weight[v]) {
        p.edge = v;
        break;
      }
      u -= weight[v];
    }
    p.offset = rng.uniform() * weight[p.edge];
  }
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Pt& a = pts[i];
      const Pt& b = pts[j];
      double v;
      if (a.edge == b.edge) {
        v = std::abs(a.offset - b.offset);
      } else {
        const std::array<std::pair<std::size_t, double>, 2> ea{
            {{parent[a.edge], a.offset}, {a.edge, weight[a.edge] - a.offset}}};
        const std::array<std::pair<std::size_t, double>, 2> eb{
            {{parent[b.edge], b.offset}, {b.edge, weight[b.edge] - b.offset}}};
        v = std::numeric_limits<double>::infinity();
        for (const auto& [na, da] : ea)
          for (const auto& [nb, db] : eb) v = std::min(v, da + node_dist(na, nb) + db);
      }
      d(i, j) = d(j, i) = v;
    }
  return d;
}

}  // namespace

FiniteMetricSpace random_metric(const GeneratorOptions& gen, std::size_t n, std::uint64_t seed) {
  if (n < 2 || n > kMaxPoints)
    throw Error(ErrorCode::InvalidArgument, "point count must be in [2, 16]");
  Rng rng(seed);
  switch (gen.kind) {
    case MetricKind::Euclidean:
      for (std::size_t attempt = 0; attempt < gen.rejection_budget; ++attempt) {
        try {
          return validate_metric(euclidean_sample(rng, n, gen.euclidean_dim));
        } catch (const Error&) {
        }
      }
      break;
    case MetricKind::Tree:
      for (std::size_t attempt = 0; attempt < gen.rejection_budget; ++attempt) {
        try {
          return validate_metric(tree_sample(rng, n));
        } catch (const Error&) {
        }
      }
      break;
    case MetricKind::PerturbedTree: {
      for (std::size_t attempt = 0; attempt < gen.rejection_budget; ++attempt) {
        const Matrix base = tree_sample(rng, n);
        Matrix d = base;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j)
            d(i, j) = d(j, i) = base(i, j) * (1.0 + gen.perturbation * rng.uniform());
        try {
          return validate_metric(d);
        } catch (const Error&) {
        }
      }
      break;
    }
    case MetricKind::General:
      for (std::size_t attempt = 0; attempt < gen.rejection_budget; ++attempt) {
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = rng.uniform(0.05, 1.0);
        try {
          return validate_metric(d);
        } catch (const Error&) {
        }
      }
      break;
  }
  throw Error(ErrorCode::RejectionBudgetExceeded,
              "no valid " + generator_name(gen) + " metric within " +
                  std::to_string(gen.rejection_budget) + " attempts");
}

FiniteMetricSpace random_metric(const std::string& kind, std::size_t n, std::uint64_t seed) {
  return random_metric(parse_generator(kind), n, seed);
}

// ---------------------------------------------------------------------------
// Hunts

std::string to_string(HuntPredicate p) {
  switch (p) {
    case HuntPredicate::NegativePairAndComparison: return "neg2_and_cat0";
    case HuntPredicate::C4PassesC5Infeasible: return "c4_all_but_c5_infeasible";
    case HuntPredicate::C4PassesO3Infeasible: return "c4_all_but_o3_infeasible";
  }
  return "?";
}

HuntPredicate parse_predicate(const std::string& name) {
  for (auto p : {HuntPredicate::NegativePairAndComparison, HuntPredicate::C4PassesC5Infeasible,
                 HuntPredicate::C4PassesO3Infeasible})
    if (to_string(p) == name) return p;
  throw Error(ErrorCode::InvalidArgument, "unknown hunt predicate '" + name + "'");
}

namespace {

enum class Outcome { GenerationFailed, NotCandidate, Miss, Hit, Undecided };

struct Evaluation {
  Outcome outcome = Outcome::NotCandidate;
  HuntSample sample;
};

double max_sq(const FiniteMetricSpace& s) { return s.diameter() * s.diameter(); }

Matrix sub_distances(const FiniteMetricSpace& space, const std::vector<std::size_t>& idx) {
  Matrix m(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) m(a, b) = space(idx[a], idx[b]);
  return m;
}

void subsets(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

// Gamma predicates: hit when some labeling is Infeasible.
void gamma_predicate(const FiniteMetricSpace& space, const HuntConfig& cfg, Evaluation& ev) {
  const std::size_t k = cfg.predicate == HuntPredicate::C4PassesC5Infeasible ? 5 : 6;
  if (space.size() < k) throw Error(ErrorCode::InvalidArgument, "too few points for the predicate");
  const ComparisonGraph graph =
      k == 5 ? builtin_graph("cycle", 5) : builtin_graph("O3");
  double worst = 0.0;
  std::string worst_detail;
  bool hit = false;
  bool undecided = false;
  subsets(space.size(), k, [&](const std::vector<std::size_t>& subset) {
    const auto orders = k == 5 ? cyclic_labelings(subset) : octahedron_labelings(subset);
    for (const auto& order : orders) {
      const auto w = gamma_feasible(graph, sub_distances(space, order), cfg.gamma);
      if (w.status == GammaStatus::Infeasible && !hit) {
        hit = true;
        worst_detail = "Infeasible labeling " + join(order);
      }
      if (w.status == GammaStatus::Undecided) undecided = true;
      if (w.residual > worst || worst_detail.empty()) {
        worst = std::max(worst, w.residual);
        if (!hit) worst_detail = "largest residual at labeling " + join(order);
      }
    }
  });
  ev.sample.margin = cfg.gamma.infeas_floor_rel - worst / max_sq(space);
  ev.sample.detail = worst_detail;
  ev.outcome = hit ? Outcome::Hit : (undecided ? Outcome::Undecided : Outcome::Miss);
}

Evaluation evaluate(const HuntConfig& cfg, std::size_t index) {
  Evaluation ev;
  ev.sample.index = index;
  ev.sample.seed = sample_seed(cfg.seed, index);
  std::optional<FiniteMetricSpace> space;
  try {
    space = random_metric(cfg.generator, cfg.points, ev.sample.seed);
  } catch (const Error&) {
    ev.outcome = Outcome::GenerationFailed;
    return ev;
  }
  ev.sample.distances = space->distances().to_rows();
  if (!cat0_comparison_all(*space, cfg.tol_compare).holds) return ev;
  try {
    if (cfg.predicate == HuntPredicate::NegativePairAndComparison) {
      const auto spectrum = eigendecompose(associated_form(*space), cfg.tol_zero);
      auto vals = spectrum.eigenvalues;
      std::sort(vals.begin(), vals.end());
      const double second = vals.size() >= 2 ? vals[1] : 0.0;
      ev.sample.margin = second / max_sq(*space);
      ev.sample.detail = "negative eigenvalues: " + std::to_string(spectrum.signature.n_neg);
      ev.outcome = spectrum.signature.n_neg >= 2 ? Outcome::Hit : Outcome::Miss;
    } else {
      gamma_predicate(*space, cfg, ev);
    }
  } catch (const Error& e) {
    ev.outcome = Outcome::Undecided;
    ev.sample.detail = std::string(to_string(e.code())) + ": " + e.what();
  }
  return ev;
}

}  // namespace

HuntReport hunt_counterexamples(const HuntConfig& cfg, unsigned workers) {
  HuntReport rep;
  rep.config = cfg;
  std::vector<Evaluation> results(cfg.budget);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, cfg.budget))));
  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < cfg.budget; i += workers) results[i] = evaluate(cfg, i);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  std::vector<HuntSample> misses;
  for (auto& ev : results) {
    ++rep.evaluated;
    switch (ev.outcome) {
      case Outcome::GenerationFailed: ++rep.generation_failures; break;
      case Outcome::NotCandidate: break;
      case Outcome::Hit:
        ++rep.candidates;
        rep.hits.push_back(std::move(ev.sample));
        break;
      case Outcome::Miss:
        ++rep.candidates;
        misses.push_back(std::move(ev.sample));
        break;
      case Outcome::Undecided:
        ++rep.candidates;
        ++rep.undecided;
        break;
    }
  }
  std::stable_sort(misses.begin(), misses.end(), [](const HuntSample& a, const HuntSample& b) {
    return a.margin != b.margin ? a.margin < b.margin : a.index < b.index;
  });
  if (misses.size() > cfg.near_misses) misses.resize(cfg.near_misses);
  rep.near_misses = std::move(misses);
  return rep;
}

}  // namespace cat5
