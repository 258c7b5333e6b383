#include "cat5/gamma_cmp.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>

#include "cat5/error.hpp"

namespace cat5 {

ComparisonGraph ComparisonGraph::from_edges(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    std::string name) {
  ComparisonGraph g;
  g.n_ = n;
  g.adj_.assign(n * n, false);
  g.name_ = std::move(name);
  for (auto [i, j] : edges) {
    if (i >= n || j >= n)
      throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    if (i == j) throw Error(ErrorCode::InvalidArgument, "self-loop in comparison graph");
    g.adj_[i * n + j] = true;
    g.adj_[j * n + i] = true;
  }
  return g;
}

std::vector<std::pair<std::size_t, std::size_t>> ComparisonGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (adjacent(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> ComparisonGraph::non_edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (!adjacent(i, j)) out.emplace_back(i, j);
  return out;
}

namespace {

std::optional<std::size_t> parse_suffix(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

ComparisonGraph cycle(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::UnknownGraph, "cycles need at least 3 vertices");
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return ComparisonGraph::from_edges(n, e, "C" + std::to_string(n));
}

ComparisonGraph star(std::size_t k, std::string name) {
  if (k < 1) throw Error(ErrorCode::UnknownGraph, "star needs at least one leaf");
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 1; i <= k; ++i) e.emplace_back(0, i);
  return ComparisonGraph::from_edges(k + 1, e, std::move(name));
}

}  // namespace

ComparisonGraph builtin_graph(std::string_view name, std::optional<std::size_t> param) {
  if (name == "cycle") {
    if (!param) throw Error(ErrorCode::UnknownGraph, "cycle needs a vertex count");
    return cycle(*param);
  }
  if (name == "O3" || name == "O_3" || name == "octahedron") {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j)
        if (j != i + 3) e.emplace_back(i, j);
    return ComparisonGraph::from_edges(6, e, "O3");
  }
  if (name == "tripod" || name == "3-tree") return star(3, "tripod");
  if (name == "4-tree") return star(4, "4-tree");
  if (name == "star") {
    if (!param) throw Error(ErrorCode::UnknownGraph, "star needs a leaf count");
    return star(*param, "star_" + std::to_string(*param));
  }
  if (name.starts_with("star_")) {
    if (auto k = parse_suffix(name.substr(5))) return star(*k, std::string(name));
  }
  if (name.starts_with("C_")) {
    if (auto k = parse_suffix(name.substr(2))) return cycle(*k);
  } else if (name.starts_with("C")) {
    if (auto k = parse_suffix(name.substr(1))) return cycle(*k);
  }
  throw Error(ErrorCode::UnknownGraph, "unknown graph '" + std::string(name) + "'");
}

std::string_view to_string(GammaStatus status) {
  switch (status) {
    case GammaStatus::Feasible: return "Feasible";
    case GammaStatus::Infeasible: return "Infeasible";
    case GammaStatus::Undecided: return "Undecided";
  }
  return "?";
}

Matrix project_psd(const Matrix& a) {
  const std::size_t n = a.rows();
  auto eig = jacobi_eigen(a);
  if (!eig) throw Error(ErrorCode::NoConvergence, "eigensolver did not converge in PSD projection");
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig->values[k];
    if (lam <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vi = lam * eig->vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * eig->vectors(j, k);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = m;
      out(j, i) = m;
    }
  return out;
}

namespace {

void check_instance(const ComparisonGraph& graph, const Matrix& d) {
  const std::size_t n = graph.size();
  if (!d.square() || d.rows() != n)
    throw Error(ErrorCode::BadDistances, "distance matrix does not match the graph size");
  if (n < 2) throw Error(ErrorCode::BadDistances, "need at least two vertices");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = d(i, j);
      if (!std::isfinite(v)) throw Error(ErrorCode::BadDistances, "non-finite distance");
      if (i == j) continue;
      if (!(v > 0.0)) throw Error(ErrorCode::BadDistances, "off-diagonal distance not positive");
      if (std::abs(v - d(j, i)) > 1e-12 * std::max(v, d(j, i)))
        throw Error(ErrorCode::BadDistances, "distance matrix is not symmetric");
    }
}

double squared_dist(const Matrix& g, std::size_t i, std::size_t j) {
  return g(i, i) + g(j, j) - 2.0 * g(i, j);
}

struct PairConstraint {
  std::size_t i, j;
  double bound;  // d^2
  bool upper;    // sd <= bound (adjacent) or sd >= bound
};

// Levenberg-Marquardt on G = X X^T with squared slacks turning every
// constraint into an equation: sd(i,j) - d^2 = -s^2 (adjacent) or +s^2.
// Dykstra crawls when the feasible set has no interior (collinear triples
// force equalities); this smooth system still converges fast there. Returns
// a Gram matrix once the worst violation is at most `target`.
std::optional<Matrix> polish(const std::vector<PairConstraint>& cons, const Matrix& start,
                             std::size_t n, double scale, double target) {
  auto eig = jacobi_eigen(start);
  if (!eig) return std::nullopt;
  const std::size_t m = cons.size();
  const std::size_t nx = n * n;
  std::vector<double> z(nx + m, 0.0);  // row-major X, then slacks
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      z[i * n + k] = eig->vectors(i, k) * std::sqrt(std::max(0.0, eig->values[k]));

  auto sq = [&](const std::vector<double>& v, std::size_t c) {
    double sd = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = v[cons[c].i * n + k] - v[cons[c].j * n + k];
      sd += t * t;
    }
    return sd;
  };
  for (std::size_t c = 0; c < m; ++c) {
    const double room = cons[c].upper ? cons[c].bound - sq(z, c) : sq(z, c) - cons[c].bound;
    z[nx + c] = std::sqrt(std::max(room, 1e-2 * scale));
  }
  auto residuals = [&](const std::vector<double>& v) {
    std::vector<double> r(m);
    for (std::size_t c = 0; c < m; ++c) {
      const double sl = v[nx + c] * v[nx + c];
      r[c] = sq(v, c) - cons[c].bound + (cons[c].upper ? sl : -sl);
    }
    return r;
  };
  auto violation = [&](const std::vector<double>& v) {
    double worst = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      const double e = cons[c].upper ? sq(v, c) - cons[c].bound : cons[c].bound - sq(v, c);
      worst = std::max(worst, e);
    }
    return worst;
  };
  auto norm2 = [](const std::vector<double>& r) {
    double f = 0.0;
    for (double v : r) f += v * v;
    return f;
  };

  std::vector<double> r = residuals(z);
  double f = norm2(r);
  double mu = 1e-3 * scale * scale;
  for (int it = 0; it < 5000 && violation(z) > target; ++it) {
    // Underdetermined step: dz = -J^T (J J^T + mu I)^-1 r.
    Matrix jac(m, nx + m);
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t k = 0; k < n; ++k) {
        const double t = 2.0 * (z[cons[c].i * n + k] - z[cons[c].j * n + k]);
        jac(c, cons[c].i * n + k) += t;
        jac(c, cons[c].j * n + k) -= t;
      }
      jac(c, nx + c) = (cons[c].upper ? 2.0 : -2.0) * z[nx + c];
    }
    const Matrix jjt = jac * jac.transposed();
    bool improved = false;
    for (int tries = 0; tries < 20 && !improved; ++tries) {
      Matrix lhs = jjt;
      for (std::size_t c = 0; c < m; ++c) lhs(c, c) += mu;
      auto y = solve_linear(lhs, r);
      if (!y) {
        mu *= 10.0;
        continue;
      }
      std::vector<double> trial = z;
      for (std::size_t a = 0; a < nx + m; ++a) {
        double step = 0.0;
        for (std::size_t c = 0; c < m; ++c) step += jac(c, a) * (*y)[c];
        trial[a] -= step;
      }
      auto tr = residuals(trial);
      const double tf = norm2(tr);
      if (tf < f) {
        z = std::move(trial);
        r = std::move(tr);
        f = tf;
        mu = std::max(mu / 10.0, 1e-15 * scale * scale);
        improved = true;
      } else {
        mu *= 10.0;
      }
    }
    if (!improved) break;
  }
  if (violation(z) > target) return std::nullopt;
  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) v += z[i * n + k] * z[j * n + k];
      gram(i, j) = v;
    }
  return gram;
}

bool polish_checkpoint(int it) {
  return it == 50 || it == 500 || it == 5000 || it % 20000 == 0;
}

}  // namespace

double constraint_residual(const ComparisonGraph& graph, const Matrix& d, const Matrix& g) {
  double r = 0.0;
  for (std::size_t i = 0; i < graph.size(); ++i)
    for (std::size_t j = i + 1; j < graph.size(); ++j) {
      const double sd = squared_dist(g, i, j);
      const double b = d(i, j) * d(i, j);
      r = std::max(r, graph.adjacent(i, j) ? sd - b : b - sd);
    }
  return r;
}

GramWitness gamma_feasible(const ComparisonGraph& graph, const Matrix& d,
                           const GammaOptions& opt) {
  check_instance(graph, d);
  const std::size_t n = graph.size();

  double scale = 0.0;
  std::vector<PairConstraint> cons;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double b = 0.5 * (d(i, j) * d(i, j) + d(j, i) * d(j, i));
      scale = std::max(scale, b);
      cons.push_back({i, j, b, graph.adjacent(i, j)});
    }
  const double feas_tol = opt.feas_tol_rel * scale;
  const double floor = opt.infeas_floor_rel * scale;

  // Classical scaling: -1/2 J D2 J.
  Matrix x(n, n);
  {
    std::vector<double> row_mean(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) row_mean[i] += d(i, j) * d(i, j);
      total += row_mean[i];
      row_mean[i] /= static_cast<double>(n);
    }
    total /= static_cast<double>(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        x(i, j) = -0.5 * (d(i, j) * d(i, j) - row_mean[i] - row_mean[j] + total);
  }

  std::vector<double> inc(cons.size(), 0.0);  // Dykstra increments, multiples of A_ij
  Matrix psd_inc(n, n);
  std::deque<double> history;

  GramWitness w;
  w.scale = scale;
  w.status = GammaStatus::Undecided;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    for (std::size_t c = 0; c < cons.size(); ++c) {
      const auto& k = cons[c];
      const double sd = squared_dist(x, k.i, k.j) + 4.0 * inc[c];
      const double excess = (sd - k.bound) / 4.0;
      const double next = k.upper ? std::max(0.0, excess) : std::min(0.0, excess);
      const double step = inc[c] - next;
      if (step != 0.0) {
        x(k.i, k.i) += step;
        x(k.j, k.j) += step;
        x(k.i, k.j) -= step;
        x(k.j, k.i) -= step;
      }
      inc[c] = next;
    }
    Matrix z = x + psd_inc;
    x = project_psd(z);
    psd_inc = z - x;

    const double r = constraint_residual(graph, d, x);
    w.iterations = it;
    w.residual = r;
    if (r <= feas_tol) {
      w.status = GammaStatus::Feasible;
      break;
    }
    history.push_back(r);
    bool settled = false;
    if (history.size() > static_cast<std::size_t>(opt.patience)) {
      const double old = history.front();
      history.pop_front();
      settled = r > floor && std::abs(old - r) <= 1e-3 * r;
    }
    if (settled || polish_checkpoint(it) || it == opt.max_iterations) {
      if (auto g = polish(cons, x, n, scale, feas_tol)) {
        const double pr = constraint_residual(graph, d, *g);
        if (pr <= feas_tol) {
          x = *g;
          w.residual = pr;
          w.status = GammaStatus::Feasible;
          break;
        }
      }
    }
    if (settled) {
      w.status = GammaStatus::Infeasible;
      break;
    }
  }
  w.gram = x;
  if (auto eig = jacobi_eigen(x)) w.min_eigenvalue = eig->values.back();
  return w;
}

namespace {

Matrix sub_distances(const FiniteMetricSpace& space, const std::vector<std::size_t>& idx) {
  Matrix m(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) m(a, b) = space(idx[a], idx[b]);
  return m;
}

void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

C4EquivalenceReport c4_equivalence_check(const FiniteMetricSpace& space,
                                         const GammaOptions& opt, double tol_compare) {
  C4EquivalenceReport rep;
  const std::size_t n = space.size();
  if (n < 4) return rep;
  const double band = opt.feas_tol_rel * space.diameter();
  const ComparisonGraph c4 = builtin_graph("C4");
  for_each_subset(n, 4, [&](const std::vector<std::size_t>& q) {
    for (const Labeling& l : pair_splits(q[0], q[1], q[2], q[3])) {
      C4Entry e;
      e.labeling = l;
      const auto quad = quad_comparison(space, l.p, l.q, l.x, l.y, tol_compare);
      e.slack = quad.slack;
      e.in_band = std::abs(quad.slack) <= band;
      const auto w = gamma_feasible(c4, sub_distances(space, {l.p, l.x, l.q, l.y}), opt);
      e.status = w.status;
      e.residual = w.residual;
      ++rep.checked;
      if (e.in_band) ++rep.in_band;
      if (w.status == GammaStatus::Undecided) ++rep.solver_undecided;
      if (e.in_band || w.status == GammaStatus::Undecided) {
        ++rep.undecided;
      } else {
        e.agrees = quad.holds == (w.status == GammaStatus::Feasible);
        if (e.agrees) ++rep.agreements;
        else ++rep.disagreements;
      }
      rep.entries.push_back(e);
    }
  });
  return rep;
}

std::vector<std::vector<std::size_t>> cyclic_labelings(const std::vector<std::size_t>& v) {
  std::vector<std::vector<std::size_t>> out;
  if (v.size() < 3) return out;
  std::vector<std::size_t> rest(v.begin() + 1, v.end());
  std::sort(rest.begin(), rest.end());
  do {
    if (rest.front() < rest.back()) {
      std::vector<std::size_t> c{v.front()};
      c.insert(c.end(), rest.begin(), rest.end());
      out.push_back(std::move(c));
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

std::vector<std::vector<std::size_t>> octahedron_labelings(const std::vector<std::size_t>& six) {
  if (six.size() != 6) throw Error(ErrorCode::InvalidArgument, "octahedron labeling needs 6 points");
  std::vector<std::vector<std::size_t>> out;
  // Perfect matchings: pair six[0] with each partner, then recurse on four.
  for (std::size_t a = 1; a < 6; ++a) {
    std::vector<std::size_t> r4;
    for (std::size_t i = 1; i < 6; ++i)
      if (i != a) r4.push_back(i);
    for (std::size_t b = 1; b < 4; ++b) {
      std::vector<std::size_t> r2;
      for (std::size_t i = 1; i < 4; ++i)
        if (i != b) r2.push_back(r4[i]);
      out.push_back({six[0], six[r4[0]], six[r2[0]], six[a], six[r4[b]], six[r2[1]]});
    }
  }
  return out;
}

CycleImplicationReport cycle_implication_check(const FiniteMetricSpace& space,
                                               std::size_t max_cycle,
                                               const GammaOptions& opt, double tol_compare) {
  CycleImplicationReport rep;
  const auto cmp = cat0_comparison_all(space, tol_compare);
  if (!cmp.holds) {
    rep.skip_reason = "space fails the CAT(0) comparison";
    if (cmp.witness) {
      const auto& w = *cmp.witness;
      rep.skip_reason += " at (p,q,x,y) = (" + std::to_string(w.p) + "," + std::to_string(w.q) +
                         "," + std::to_string(w.x) + "," + std::to_string(w.y) + ")";
    }
    return rep;
  }
  rep.precondition_met = true;
  const std::size_t n = space.size();
  for (std::size_t k = 5; k <= std::min(max_cycle, n); ++k) {
    const ComparisonGraph ck = builtin_graph("cycle", k);
    for_each_subset(n, k, [&](const std::vector<std::size_t>& subset) {
      for (const auto& order : cyclic_labelings(subset)) {
        const auto w = gamma_feasible(ck, sub_distances(space, order), opt);
        ++rep.instances;
        switch (w.status) {
          case GammaStatus::Feasible: ++rep.feasible; break;
          case GammaStatus::Infeasible:
            ++rep.infeasible;
            rep.anomalies.push_back({order, w.residual});
            break;
          case GammaStatus::Undecided:
            ++rep.undecided;
            rep.undecided_cycles.push_back({order, w.residual});
            break;
        }
      }
    });
  }
  return rep;
}

}  // namespace cat5
