#include "geocake/dividen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "geocake/cover.hpp"
#include "geocake/svalue.hpp"

namespace geocake {

namespace {

Box twin_low(const Box& b, double t) { return {b.xmin, b.ymin, b.xmin + t * b.width(), b.ymin + t * b.height()}; }
Box twin_high(const Box& b, double t) { return {b.xmax - t * b.width(), b.ymax - t * b.height(), b.xmax, b.ymax}; }

void clear_range(const KnifeTuple& tp, int lo, int hi, std::vector<Region>& out) {
  for (int l = lo; l < hi; ++l) {
    const int p = tp.leaf_piece[static_cast<std::size_t>(l)];
    if (p >= 0) out[static_cast<std::size_t>(p)] = Region{};
  }
}

void split_squares(const KnifeTuple& tp, const std::vector<double>& leaf_t, const Region& parent,
                   const std::vector<Box>& squares, bool anti, int lo, int hi, std::vector<Region>& out) {
  if (hi - lo == 1) {
    const int p = tp.leaf_piece[static_cast<std::size_t>(lo)];
    if (p >= 0) out[static_cast<std::size_t>(p)] = parent;
    return;
  }
  const int mid = (lo + hi) / 2;
  const double tl = std::accumulate(leaf_t.begin() + lo, leaf_t.begin() + mid, 0.0);
  const double tr = std::accumulate(leaf_t.begin() + mid, leaf_t.begin() + hi, 0.0);
  if (tl + tr <= 0 || parent.is_empty()) {
    clear_range(tp, lo, hi, out);
    return;
  }
  const double tau = std::clamp(tl / (tl + tr), 0.0, 1.0);
  std::vector<Box> twins, rest;
  for (const Box& q : squares) {
    const double w = q.width(), h = q.height();
    Box a, b, r1, r2;
    if (!anti) {
      a = twin_low(q, tau);
      b = twin_high(q, tau);
      r1 = {q.xmin + tau * w, q.ymin, q.xmax, q.ymax - tau * h};
      r2 = {q.xmin, q.ymin + tau * h, q.xmax - tau * w, q.ymax};
    } else {
      a = {q.xmax - tau * w, q.ymin, q.xmax, q.ymin + tau * h};
      b = {q.xmin, q.ymax - tau * h, q.xmin + tau * w, q.ymax};
      r1 = {q.xmin, q.ymin, q.xmax - tau * w, q.ymax - tau * h};
      r2 = {q.xmin + tau * w, q.ymin + tau * h, q.xmax, q.ymax};
    }
    for (const Box& x : {a, b}) {
      if (!x.empty()) twins.push_back(x);
    }
    for (const Box& x : {r1, r2}) {
      if (!x.empty()) rest.push_back(x);
    }
  }
  const Region left = intersect(parent, Region::rectilinear(twins));
  const Region right = subtract(parent, left);
  split_squares(tp, leaf_t, left, twins, !anti, lo, mid, out);
  split_squares(tp, leaf_t, right, rest, anti, mid, hi, out);
}

std::vector<Region> eval_fat(const KnifeTuple& tp, const std::vector<double>& t) {
  const int n = tp.n;
  std::vector<Region> out(static_cast<std::size_t>(n));
  Region parent = tp.cake;
  double scale = 1;
  const auto& cubes = tp.grid.cubes;
  for (int l = 0; l < n - 1; ++l) {
    const double s = std::accumulate(t.begin() + l, t.end(), 0.0);
    if (s <= 0 || parent.is_empty()) return out;
    const double tau = std::clamp(t[static_cast<std::size_t>(l)] / s, 0.0, 1.0);
    ThreePhaseFat k{parent, dilate(cubes[static_cast<std::size_t>(l)], scale, tp.grid.center), {}, tp.grid.center};
    for (std::size_t c = static_cast<std::size_t>(l) + 1; c < cubes.size(); ++c) {
      k.rest.push_back(dilate(cubes[c], scale, tp.grid.center));
    }
    const auto e = eval_knife({tp.cake, k}, tau);
    out[static_cast<std::size_t>(l)] = e.piece;
    parent = subtract(parent, e.piece);
    if (tau >= 2.0 / 3) scale *= 3 * (1 - tau);
  }
  if (t.back() > 0) out.back() = parent;
  return out;
}

std::vector<double> checked_point(const KnifeTuple& tp, std::span<const double> t) {
  if (static_cast<int>(t.size()) != tp.n) throw std::invalid_argument("simplex point has the wrong dimension");
  double sum = 0;
  for (double x : t) {
    if (!(x >= -1e-9)) throw std::invalid_argument("simplex point has a negative coordinate");
    sum += x;
  }
  if (std::abs(sum - 1) > 1e-9) throw std::invalid_argument("simplex point does not sum to 1");
  std::vector<double> out(t.begin(), t.end());
  for (auto& x : out) x = std::max(0.0, x) / sum;
  return out;
}

}  // namespace

KnifeTuple build_square_tuple(const Region& cake, int n) {
  if (n < 2) throw std::invalid_argument("knife tuples need n >= 2");
  const auto boxes = cake.boxes();
  if (cake.is_polygon() || boxes.size() != 1) throw std::invalid_argument("square tuples need a rectangular cake");
  KnifeTuple tp;
  tp.kind = KnifeTuple::Kind::squares;
  tp.cake = cake;
  tp.n = n;
  tp.box = boxes.front();
  const int leaves = static_cast<int>(std::bit_ceil(static_cast<unsigned>(n)));
  tp.leaf_piece.assign(static_cast<std::size_t>(leaves), -1);
  int zero = leaves - n, piece = 0;
  for (int l = 0; l < leaves; ++l) {
    if (l % 2 == 1 && zero > 0) {
      --zero;
      continue;
    }
    tp.leaf_piece[static_cast<std::size_t>(l)] = piece++;
  }
  const double aspect = tp.box.long_side() / tp.box.short_side();
  tp.family = tp.box.is_square() ? PieceFamily::squares() : PieceFamily::fat_rects(aspect);
  tp.loss_bound = Rational::of(static_cast<std::int64_t>(leaves) * leaves, 1);
  return tp;
}

KnifeTuple build_fat_tuple(const Region& cake, int n) {
  if (n < 2) throw std::invalid_argument("knife tuples need n >= 2");
  const int m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-12));
  if (m > 3) throw std::invalid_argument("fat tuples support at most 9 agents");
  KnifeTuple tp;
  tp.kind = KnifeTuple::Kind::fat;
  tp.cake = cake;
  tp.n = n;
  tp.grid_m = m;
  tp.grid = subcube_grid(cake, m);
  const double r = fatness(cake).s_out / tp.grid.outer.width();
  tp.family = PieceFamily::fat_objects(m * r);
  tp.loss_bound = Rational::of(n, 1);
  return tp;
}

std::vector<Region> eval_tuple(const KnifeTuple& tuple, std::span<const double> t) {
  const auto p = checked_point(tuple, t);
  if (tuple.kind == KnifeTuple::Kind::fat) return eval_fat(tuple, p);
  std::vector<double> leaf_t(tuple.leaf_piece.size(), 0.0);
  for (std::size_t l = 0; l < leaf_t.size(); ++l) {
    if (tuple.leaf_piece[l] >= 0) leaf_t[l] = p[static_cast<std::size_t>(tuple.leaf_piece[l])];
  }
  std::vector<Region> out(static_cast<std::size_t>(tuple.n));
  split_squares(tuple, leaf_t, tuple.cake, {tuple.box}, false, 0, static_cast<int>(leaf_t.size()), out);
  return out;
}

Rational sampled_tuple_loss(const KnifeTuple& tuple, const std::vector<std::vector<double>>& points) {
  int worst = 0;
  for (const auto& t : points) {
    int sum = 0;
    for (const auto& piece : eval_tuple(tuple, t)) {
      const auto c = cover_number(piece, tuple.family);
      if (!c) return Rational::unbounded();
      sum += *c;
    }
    worst = std::max(worst, sum);
  }
  return Rational::of(worst, 1);
}

int vertex_owner(std::span<const int> x, int n) {
  long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<long>(i) * x[i];
  return static_cast<int>(s % n);
}

namespace {

// Cumulative coordinates y_j = x_0 + ... + x_j for j < n - 1.
std::vector<int> to_x(const std::vector<int>& y, int n, int k) {
  std::vector<int> x(static_cast<std::size_t>(n));
  int prev = 0;
  for (int j = 0; j < n - 1; ++j) {
    x[static_cast<std::size_t>(j)] = y[static_cast<std::size_t>(j)] - prev;
    prev = y[static_cast<std::size_t>(j)];
  }
  x.back() = k - prev;
  return x;
}

bool valid_y(const std::vector<int>& y, int k) {
  int prev = 0;
  for (int v : y) {
    if (v < prev) return false;
    prev = v;
  }
  return prev <= k;
}

// Vertices of the cell with base b and coordinate order perm, or empty if
// the cell leaves the simplex.
std::vector<std::vector<int>> cell_vertices(const std::vector<int>& base, const std::vector<int>& perm, int k) {
  std::vector<std::vector<int>> out{base};
  if (!valid_y(base, k)) return {};
  for (int axis : perm) {
    auto next = out.back();
    ++next[static_cast<std::size_t>(axis)];
    if (!valid_y(next, k)) return {};
    out.push_back(std::move(next));
  }
  return out;
}

// Calls f(base) for every base in the box [lo, hi] (inclusive, per axis).
template <class F>
void for_each_base(const std::vector<int>& lo, const std::vector<int>& hi, F&& f) {
  const std::size_t d = lo.size();
  std::vector<int> b = lo;
  if (d == 0) return;
  while (true) {
    f(b);
    std::size_t j = 0;
    while (j < d && b[j] == hi[j]) b[j] = lo[j], ++j;
    if (j == d) return;
    ++b[j];
  }
}

struct Labeler {
  const KnifeTuple& tuple;
  const std::vector<AgentValuation>& agents;
  double resolution;
  int k;
  std::map<std::vector<int>, int> cache;  // keyed by x

  int compute(const std::vector<int>& x) const {
    const int n = tuple.n;
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(x[static_cast<std::size_t>(i)]) / k;
    const auto pieces = eval_tuple(tuple, t);
    const int owner = vertex_owner(x, n);
    int best = -1;
    double best_v = -1;
    for (int j = 0; j < n; ++j) {
      if (x[static_cast<std::size_t>(j)] == 0) continue;
      const double v = s_value(agents[static_cast<std::size_t>(owner)].density, pieces[static_cast<std::size_t>(j)],
                               tuple.family, resolution, Exec::serial)
                           .value;
      if (v > best_v) best = j, best_v = v;
    }
    return best;
  }

  void ensure(const std::vector<std::vector<int>>& xs, Exec exec) {
    std::vector<std::vector<int>> todo;
    for (const auto& x : xs) {
      if (!cache.contains(x)) todo.push_back(x);
    }
    std::sort(todo.begin(), todo.end());
    todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
    std::vector<int> labels(todo.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (std::size_t i = 0; i < todo.size(); ++i) labels[i] = compute(todo[i]);
    for (std::size_t i = 0; i < todo.size(); ++i) cache[todo[i]] = labels[i];
  }
};

struct FoundCell {
  std::vector<std::vector<int>> xs;  // n lattice points
  std::vector<int> owners;
  std::vector<int> labels;
};

bool fully_labeled(const std::vector<int>& labels, int n) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int l : labels) {
    if (l < 0 || l >= n || seen[static_cast<std::size_t>(l)]) return false;
    seen[static_cast<std::size_t>(l)] = 1;
  }
  return true;
}

// Fully labelled cell with base inside the window around center (in y
// units), closest to the centre; the window doubles until one is found.
std::optional<FoundCell> window_search(Labeler& lab, const std::vector<double>& center, int radius) {
  const int n = lab.tuple.n, k = lab.k, d = n - 1;
  std::vector<int> perm0(static_cast<std::size_t>(d));
  std::iota(perm0.begin(), perm0.end(), 0);
  for (int r = radius;; r *= 2) {
    std::vector<int> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    bool whole = true;
    for (int j = 0; j < d; ++j) {
      const int c = static_cast<int>(std::floor(center[static_cast<std::size_t>(j)]));
      lo[static_cast<std::size_t>(j)] = std::max(0, c - r);
      hi[static_cast<std::size_t>(j)] = std::min(k - 1, c + r);
      whole = whole && lo[static_cast<std::size_t>(j)] == 0 && hi[static_cast<std::size_t>(j)] == k - 1;
    }
    std::vector<std::vector<std::vector<int>>> cells;
    for_each_base(lo, hi, [&](const std::vector<int>& b) {
      auto perm = perm0;
      do {
        auto ys = cell_vertices(b, perm, k);
        if (!ys.empty()) cells.push_back(std::move(ys));
      } while (std::next_permutation(perm.begin(), perm.end()));
    });
    std::vector<std::vector<int>> xs;
    for (const auto& c : cells) {
      for (const auto& y : c) xs.push_back(to_x(y, n, k));
    }
    lab.ensure(xs, Exec::parallel);
    std::optional<FoundCell> best;
    double best_dist = 0;
    for (const auto& c : cells) {
      FoundCell f;
      std::vector<double> bary(static_cast<std::size_t>(d), 0.0);
      for (const auto& y : c) {
        auto x = to_x(y, n, k);
        f.owners.push_back(vertex_owner(x, n));
        f.labels.push_back(lab.cache.at(x));
        f.xs.push_back(std::move(x));
        for (int j = 0; j < d; ++j) bary[static_cast<std::size_t>(j)] += static_cast<double>(y[static_cast<std::size_t>(j)]) / n;
      }
      if (!fully_labeled(f.labels, n)) continue;
      double dist = 0;
      for (int j = 0; j < d; ++j) dist += std::pow(bary[static_cast<std::size_t>(j)] - center[static_cast<std::size_t>(j)], 2);
      if (!best || dist < best_dist) best = std::move(f), best_dist = dist;
    }
    if (best) return best;
    if (whole) return std::nullopt;
  }
}

struct Outcome {
  std::vector<Region> pieces;  // per agent
  double envy = 0;
  std::vector<double> point;   // simplex point
  FoundCell cell;
  int k = 0;
};

Outcome assess(const KnifeTuple& tp, const std::vector<AgentValuation>& agents, const FoundCell& cell, int k,
               double resolution) {
  const int n = tp.n;
  Outcome o;
  o.cell = cell;
  o.k = k;
  o.point.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& x : cell.xs) {
    for (int i = 0; i < n; ++i) o.point[static_cast<std::size_t>(i)] += static_cast<double>(x[static_cast<std::size_t>(i)]) / (static_cast<double>(k) * n);
  }
  const auto pieces = eval_tuple(tp, o.point);
  o.pieces.assign(static_cast<std::size_t>(n), Region{});
  for (std::size_t v = 0; v < cell.xs.size(); ++v) {
    o.pieces[static_cast<std::size_t>(cell.owners[v])] = pieces[static_cast<std::size_t>(cell.labels[v])];
  }
  std::vector<double> envy(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for
  for (int i = 0; i < n; ++i) {
    const auto& d = agents[static_cast<std::size_t>(i)].density;
    const double own = s_value(d, o.pieces[static_cast<std::size_t>(i)], tp.family, resolution, Exec::serial).value;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double other = s_value(d, o.pieces[static_cast<std::size_t>(j)], tp.family, resolution, Exec::serial).value;
      envy[static_cast<std::size_t>(i)] = std::max(envy[static_cast<std::size_t>(i)], other - own);
    }
  }
  o.envy = *std::max_element(envy.begin(), envy.end());
  return o;
}

// Largest change of any agent's S-value of any piece between the vertices of
// the cell. Continuous tuples drive it to zero; raster cakes keep a floor.
double cell_spread(const KnifeTuple& tp, const std::vector<AgentValuation>& agents, const Outcome& o,
                   double resolution) {
  const int n = tp.n;
  std::vector<std::vector<Region>> at;
  for (const auto& x : o.cell.xs) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(x[static_cast<std::size_t>(i)]) / o.k;
    at.push_back(eval_tuple(tp, t));
  }
  std::vector<double> spread(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& pieces : at) {
        const double v = s_value(agents[static_cast<std::size_t>(i)].density, pieces[static_cast<std::size_t>(j)],
                                 tp.family, resolution, Exec::serial)
                             .value;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      spread[static_cast<std::size_t>(i)] = std::max(spread[static_cast<std::size_t>(i)], hi - lo);
    }
  }
  return *std::max_element(spread.begin(), spread.end());
}

// Least maximum envy over assignments of the pieces at point t; the cell's
// own assignment is the only candidate above five agents.
struct Assigned {
  double envy = std::numeric_limits<double>::infinity();
  std::vector<int> label;  // per agent
};

Assigned best_assignment(const KnifeTuple& tp, const std::vector<AgentValuation>& agents,
                         const std::vector<Region>& pieces, const std::vector<int>& fallback, double resolution) {
  const std::size_t n = agents.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      v[i][j] = s_value(agents[i].density, pieces[j], tp.family, resolution, Exec::serial).value;
    }
  }
  auto envy_of = [&](const std::vector<int>& label) {
    double e = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double own = v[i][static_cast<std::size_t>(label[i])];
      for (std::size_t j = 0; j < n; ++j) e = std::max(e, v[i][j] - own);
    }
    return e;
  };
  Assigned best{envy_of(fallback), fallback};
  if (n > 5) return best;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const double e = envy_of(perm);
    if (e < best.envy) best = {e, perm};
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Searches sub-lattices of the final cell, halving the search simplex about
// the best point each round.
Outcome refine(const KnifeTuple& tp, const std::vector<AgentValuation>& agents, const Outcome& start,
               double resolution, double epsilon) {
  const int n = tp.n;
  constexpr int kDenominator = 4;
  constexpr int kRounds = 8;
  std::vector<int> fallback(static_cast<std::size_t>(n));
  for (std::size_t v = 0; v < start.cell.xs.size(); ++v) {
    fallback[static_cast<std::size_t>(start.cell.owners[v])] = start.cell.labels[v];
  }
  std::vector<std::vector<double>> verts;
  for (const auto& x : start.cell.xs) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(x[static_cast<std::size_t>(i)]) / start.k;
    verts.push_back(std::move(t));
  }
  std::vector<std::vector<int>> weights;
  std::vector<int> w(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> compose = [&](int slot, int left) {
    if (slot == n - 1) {
      w[static_cast<std::size_t>(slot)] = left;
      weights.push_back(w);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      w[static_cast<std::size_t>(slot)] = a;
      compose(slot + 1, left - a);
    }
  };
  compose(0, kDenominator);

  Outcome best = start;
  for (int round = 0; round < kRounds && best.envy > epsilon; ++round) {
    std::vector<std::vector<double>> points;
    for (const auto& c : weights) {
      std::vector<double> t(static_cast<std::size_t>(n), 0.0);
      for (int v = 0; v < n; ++v) {
        for (int i = 0; i < n; ++i) {
          t[static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(v)] * verts[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)] / kDenominator;
        }
      }
      points.push_back(std::move(t));
    }
    std::vector<Assigned> found(points.size());
    std::vector<std::vector<Region>> pieces(points.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t p = 0; p < points.size(); ++p) {
      pieces[p] = eval_tuple(tp, points[p]);
      found[p] = best_assignment(tp, agents, pieces[p], fallback, resolution);
    }
    std::size_t arg = 0;
    for (std::size_t p = 1; p < points.size(); ++p) {
      if (found[p].envy < found[arg].envy) arg = p;
    }
    if (found[arg].envy < best.envy) {
      best.envy = found[arg].envy;
      best.point = points[arg];
      for (int i = 0; i < n; ++i) {
        best.pieces[static_cast<std::size_t>(i)] = pieces[arg][static_cast<std::size_t>(found[arg].label[static_cast<std::size_t>(i)])];
      }
    }
    for (auto& v : verts) {
      for (int i = 0; i < n; ++i) {
        auto& x = v[static_cast<std::size_t>(i)];
        x = points[arg][static_cast<std::size_t>(i)] + (x - points[arg][static_cast<std::size_t>(i)]) / 2;
      }
    }
  }
  return best;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double binom(int a, int b) {
  double r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

Allocation two_agent_limit(const KnifeTuple& tp, const std::vector<AgentValuation>& agents, double resolution) {
  const KnifeSpec spec = tp.kind == KnifeTuple::Kind::squares ? KnifeSpec{tp.cake, TwinSquares{tp.box}}
                                                                : three_phase_fat(tp.cake, tp.grid_m, 0);
  HalvingOptions h;
  h.resolution = resolution;
  const auto r0 = find_halving_time(spec, agents[0], tp.family, h);
  const auto r1 = find_halving_time(spec, agents[1], tp.family, h);
  const double t = (r0.t + r1.t) / 2;
  const auto pieces = eval_tuple(tp, std::vector<double>{t, 1 - t});
  Allocation a;
  a.procedure = "divide_n";
  a.family = tp.family;
  a.guarantee = tp.loss_bound.reciprocal();
  const bool first0 = r0.t <= r1.t;
  a.shares = {make_share(agents[0], pieces[first0 ? 0 : 1], tp.family, resolution),
              make_share(agents[1], pieces[first0 ? 1 : 0], tp.family, resolution)};
  a.epsilon = 2 * h.tol + r0.search_error + r1.search_error;
  a.certified = true;
  a.trace.push_back("switch points " + fmt(r0.t) + " " + fmt(r1.t) + ", point " + fmt(t));
  return a;
}

}  // namespace

SimplexGrid build_simplex_grid(int n, int k) {
  if (n < 2) throw std::invalid_argument("simplex grids need n >= 2");
  if (k < 1) throw std::invalid_argument("simplex grids need k >= 1");
  SimplexGrid g;
  g.n = n;
  g.k = k;
  const int d = n - 1;
  std::map<std::vector<int>, int> index;
  std::vector<int> lo(static_cast<std::size_t>(d), 0), hi(static_cast<std::size_t>(d), k);
  for_each_base(lo, hi, [&](const std::vector<int>& y) {
    if (!valid_y(y, k)) return;
    auto x = to_x(y, n, k);
    index[y] = static_cast<int>(g.vertices.size());
    g.owner.push_back(vertex_owner(x, n));
    g.vertices.push_back(std::move(x));
  });
  std::vector<int> perm0(static_cast<std::size_t>(d));
  std::iota(perm0.begin(), perm0.end(), 0);
  std::vector<int> hi_base(static_cast<std::size_t>(d), k - 1);
  for_each_base(lo, hi_base, [&](const std::vector<int>& b) {
    auto perm = perm0;
    do {
      const auto ys = cell_vertices(b, perm, k);
      if (ys.empty()) continue;
      std::vector<int> cell;
      for (const auto& y : ys) cell.push_back(index.at(y));
      g.cells.push_back(std::move(cell));
    } while (std::next_permutation(perm.begin(), perm.end()));
  });
  g.label.assign(g.vertices.size(), -1);
  return g;
}

void label_grid(SimplexGrid& grid, const KnifeTuple& tuple, const std::vector<AgentValuation>& agents,
                double resolution, Exec exec) {
  if (grid.n != tuple.n || static_cast<int>(agents.size()) != grid.n) {
    throw std::invalid_argument("grid, tuple and agent counts differ");
  }
  Labeler lab{tuple, agents, resolution, grid.k, {}};
  lab.ensure(grid.vertices, exec);
  for (std::size_t v = 0; v < grid.vertices.size(); ++v) {
    const int l = lab.cache.at(grid.vertices[v]);
    if (l < 0 || grid.vertices[v][static_cast<std::size_t>(l)] == 0) {
      throw std::logic_error("labelling is not Sperner");
    }
    grid.label[v] = l;
  }
}

std::vector<int> fully_labeled_cells(const SimplexGrid& grid) {
  std::vector<int> out;
  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    std::vector<int> labels;
    for (int v : grid.cells[c]) labels.push_back(grid.label[static_cast<std::size_t>(v)]);
    if (fully_labeled(labels, grid.n)) out.push_back(static_cast<int>(c));
  }
  return out;
}

std::optional<int> sperner_search(const KnifeTuple& tuple, SimplexGrid& grid,
                                  const std::vector<AgentValuation>& agents, double resolution) {
  label_grid(grid, tuple, agents, resolution);
  const auto cells = fully_labeled_cells(grid);
  if (cells.empty()) return std::nullopt;
  return cells.front();
}

Allocation divide_n(const Region& cake, const std::vector<AgentValuation>& agents, const PieceFamily& family,
                    const DivideNOptions& opts) {
  const int n = static_cast<int>(agents.size());
  switch (family.kind) {
    case PieceFamily::Kind::squares:
    case PieceFamily::Kind::fat_rects: {
      auto tp = build_square_tuple(cake, n);
      if (family.kind == PieceFamily::Kind::squares && !tp.box.is_square()) {
        throw std::invalid_argument("square pieces need a square cake");
      }
      if (family.kind == PieceFamily::Kind::fat_rects) {
        if (family.ratio * (1 + 1e-9) < tp.family.ratio) {
          throw std::invalid_argument("fat rectangle ratio is below the cake's aspect");
        }
        tp.family = family;
      }
      return divide_n(tp, agents, opts);
    }
    case PieceFamily::Kind::fat_objects: {
      auto tp = build_fat_tuple(cake, n);
      if (std::isfinite(family.ratio) && family.ratio >= tp.family.ratio) tp.family = family;
      return divide_n(tp, agents, opts);
    }
    default:
      throw std::invalid_argument("no knife tuple for family " + family.name());
  }
}

Allocation divide_n(const KnifeTuple& tuple, const std::vector<AgentValuation>& agents, const DivideNOptions& opts) {
  const int n = tuple.n;
  if (static_cast<int>(agents.size()) != n) throw std::invalid_argument("tuple and agent counts differ");
  const double resolution = opts.resolution > 0 ? opts.resolution : default_resolution(tuple.cake);
  if (n == 2) return two_agent_limit(tuple, agents, resolution);

  std::optional<Outcome> best;
  std::vector<std::string> trace;
  std::vector<double> center;
  bool certified = false;
  for (int k = std::max(1, opts.k0); k <= opts.k_max; k *= 2) {
    Labeler lab{tuple, agents, resolution, k, {}};
    const bool exhaustive = center.empty() || binom(k + n - 1, n - 1) <= static_cast<double>(opts.exhaustive_vertices);
    std::vector<double> c = center;
    if (exhaustive) {
      c.assign(static_cast<std::size_t>(n - 1), 0.0);
      for (int j = 0; j < n - 1; ++j) c[static_cast<std::size_t>(j)] = k * (j + 1.0) / n;
    }
    const auto cell = window_search(lab, c, exhaustive ? k : 2);
    if (!cell) throw std::logic_error("no fully labelled cell on a Sperner-labelled grid");
    auto o = assess(tuple, agents, *cell, k, resolution);
    trace.push_back("k=" + std::to_string(k) + " envy=" + fmt(o.envy) + " labelled=" + std::to_string(lab.cache.size()));
    // Centre of the next, twice finer grid in its cumulative coordinates.
    center.assign(static_cast<std::size_t>(n - 1), 0.0);
    double acc = 0;
    for (int j = 0; j < n - 1; ++j) {
      acc += o.point[static_cast<std::size_t>(j)];
      center[static_cast<std::size_t>(j)] = acc * 2 * k;
    }
    if (!best || o.envy < best->envy) best = std::move(o);
    if (best->envy <= opts.epsilon) {
      certified = true;
      break;
    }
  }
  if (!certified) {
    auto r = refine(tuple, agents, *best, resolution, opts.epsilon);
    trace.push_back("refined at k=" + std::to_string(best->k) + ": envy=" + fmt(r.envy));
    certified = r.envy <= opts.epsilon;
    best = std::move(r);
  }
  if (!certified) {
    // At the mesh cap, envy within the value jump across the final cell comes
    // from a discontinuity of the tuple that no finer mesh removes.
    const double spread = cell_spread(tuple, agents, *best, resolution);
    trace.push_back("cell spread at k=" + std::to_string(best->k) + ": " + fmt(spread));
    certified = best->envy <= opts.epsilon + spread;
  }
  Allocation a;
  a.procedure = "divide_n";
  a.family = tuple.family;
  a.guarantee = tuple.loss_bound.reciprocal();
  for (int i = 0; i < n; ++i) {
    a.shares.push_back(make_share(agents[static_cast<std::size_t>(i)], best->pieces[static_cast<std::size_t>(i)],
                                  tuple.family, resolution));
  }
  a.epsilon = std::max(best->envy, 0.0) + 1e-12;
  a.certified = certified;
  a.trace = std::move(trace);
  return a;
}

}  // namespace geocake
