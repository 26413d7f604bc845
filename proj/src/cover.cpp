#include "geocake/cover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace geocake {

namespace {

constexpr std::size_t kMaxCells = 4096;
constexpr long kNodeBudget = 200000;

bool admissible(const Box& b, double ratio) {
  return std::isinf(ratio) || b.long_side() <= ratio * b.short_side() * (1 + 1e-12);
}

// Maximal admissible windows of m whose ends sit on the given coordinates.
void add_windows(const Box& m, double ratio, const std::vector<double>& xs, const std::vector<double>& ys,
                 std::vector<Box>& out) {
  if (admissible(m, ratio)) {
    out.push_back(m);
    return;
  }
  const double w = ratio * m.short_side();
  const bool horizontal = m.width() >= m.height();
  const double lo = horizontal ? m.xmin : m.ymin;
  const double hi = (horizontal ? m.xmax : m.ymax) - w;
  std::vector<double> pos{lo, hi};
  for (double c : horizontal ? xs : ys) {
    if (c > lo && c < hi) pos.push_back(c);
    if (c - w > lo && c - w < hi) pos.push_back(c - w);
  }
  for (double p : pos) {
    out.push_back(horizontal ? Box{p, m.ymin, p + w, m.ymax} : Box{m.xmin, p, m.xmax, p + w});
  }
}

std::vector<Box> candidates(std::span<const Box> boxes, double ratio) {
  const auto ms = maximal_rectangles(boxes);
  std::vector<double> xs, ys;
  for (const auto& b : boxes) {
    xs.insert(xs.end(), {b.xmin, b.xmax});
    ys.insert(ys.end(), {b.ymin, b.ymax});
  }
  std::vector<Box> out;
  for (int round = 0; round < 2; ++round) {
    out.clear();
    for (const auto& m : ms) add_windows(m, ratio, xs, ys, out);
    for (const auto& b : out) {
      xs.insert(xs.end(), {b.xmin, b.xmax});
      ys.insert(ys.end(), {b.ymin, b.ymax});
    }
  }
  auto key = [](const Box& b) { return std::tuple(b.xmin, b.ymin, b.xmax, b.ymax); };
  std::sort(out.begin(), out.end(), [&](const Box& a, const Box& b) { return key(a) < key(b); });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Box& a, const Box& b) {
                          const double tol = 1e-12 * (1 + std::abs(a.xmax) + std::abs(a.ymax));
                          return std::abs(a.xmin - b.xmin) <= tol && std::abs(a.ymin - b.ymin) <= tol &&
                                 std::abs(a.xmax - b.xmax) <= tol && std::abs(a.ymax - b.ymax) <= tol;
                        }),
            out.end());
  return out;
}

using Bits = std::vector<std::uint64_t>;

int popcount(const Bits& b) {
  int n = 0;
  for (auto w : b) n += std::popcount(w);
  return n;
}

bool subset_of(const Bits& a, const Bits& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] & ~b[k]) return false;
  }
  return true;
}

struct Search {
  std::vector<Bits> sets;
  std::vector<std::vector<int>> covering;  // per cell, candidate indices
  int cells = 0;
  int max_size = 1;
  long nodes = 0;
  int best = std::numeric_limits<int>::max();
  std::vector<int> best_pick;
  std::vector<int> pick;

  int first_uncovered(const Bits& covered) const {
    for (std::size_t k = 0; k < covered.size(); ++k) {
      const std::uint64_t free = ~covered[k];
      if (free == 0) continue;
      const int idx = static_cast<int>(k * 64) + std::countr_zero(free);
      return idx < cells ? idx : -1;
    }
    return -1;
  }

  void run(const Bits& covered, int done) {
    if (++nodes > kNodeBudget) return;
    const int u = first_uncovered(covered);
    if (u < 0) {
      if (static_cast<int>(pick.size()) < best) {
        best = static_cast<int>(pick.size());
        best_pick = pick;
      }
      return;
    }
    const int remaining = cells - done;
    if (static_cast<int>(pick.size()) + (remaining + max_size - 1) / max_size >= best) return;
    for (int c : covering[static_cast<std::size_t>(u)]) {
      Bits next = covered;
      for (std::size_t k = 0; k < next.size(); ++k) next[k] |= sets[static_cast<std::size_t>(c)][k];
      pick.push_back(c);
      run(next, popcount(next));
      pick.pop_back();
      if (nodes > kNodeBudget) return;
    }
  }
};

std::optional<CoverResult> single_box(const Box& b, double ratio) {
  if (admissible(b, ratio)) return CoverResult{1, {b}, true};
  const double w = ratio * b.short_side();
  const int count = static_cast<int>(std::ceil(b.long_side() / w - 1e-9));
  CoverResult r{count, {}, true};
  const bool horizontal = b.width() >= b.height();
  const double lo = horizontal ? b.xmin : b.ymin, hi = horizontal ? b.xmax : b.ymax;
  for (int k = 0; k < count; ++k) {
    const double p = std::min(lo + k * w, hi - w);
    r.pieces.push_back(horizontal ? Box{p, b.ymin, p + w, b.ymax} : Box{b.xmin, p, b.xmax, p + w});
  }
  return r;
}

std::optional<CoverResult> rect_cover(std::span<const Box> boxes, double ratio) {
  if (boxes.size() == 1) return single_box(boxes.front(), ratio);
  const auto cands = candidates(boxes, ratio);
  std::vector<double> xs, ys;
  for (const auto& b : cands) {
    xs.insert(xs.end(), {b.xmin, b.xmax});
    ys.insert(ys.end(), {b.ymin, b.ymax});
  }
  const CompressedGrid g = compress(boxes, xs, ys);
  std::vector<int> index(g.fill.size(), -1);
  int cells = 0;
  for (std::size_t k = 0; k < g.fill.size(); ++k) {
    if (g.fill[k]) index[k] = cells++;
  }
  if (cells == 0) return CoverResult{0, {}, true};
  if (static_cast<std::size_t>(cells) > kMaxCells) return std::nullopt;
  const std::size_t words = (static_cast<std::size_t>(cells) + 63) / 64;

  Search s;
  s.cells = cells;
  std::vector<Box> kept;
  for (const auto& c : cands) {
    Bits bits(words, 0);
    bool inside = true;
    for (int j = 0; j < g.ny() && inside; ++j) {
      const double cy = (g.ys[j] + g.ys[j + 1]) / 2;
      if (cy < c.ymin || cy > c.ymax) continue;
      for (int i = 0; i < g.nx(); ++i) {
        const double cx = (g.xs[i] + g.xs[i + 1]) / 2;
        if (cx < c.xmin || cx > c.xmax) continue;
        const int id = index[static_cast<std::size_t>(j) * g.nx() + i];
        if (id < 0) {
          inside = false;
          break;
        }
        bits[static_cast<std::size_t>(id) / 64] |= std::uint64_t{1} << (id % 64);
      }
    }
    if (inside && popcount(bits) > 0) {
      s.sets.push_back(std::move(bits));
      kept.push_back(c);
    }
  }
  // Drop candidates contained in another one.
  std::vector<char> dominated(s.sets.size(), 0);
  for (std::size_t a = 0; a < s.sets.size(); ++a) {
    for (std::size_t b = 0; b < s.sets.size() && !dominated[a]; ++b) {
      if (a == b || dominated[b]) continue;
      if (subset_of(s.sets[a], s.sets[b]) && (popcount(s.sets[a]) < popcount(s.sets[b]) || a > b)) dominated[a] = 1;
    }
  }
  std::vector<Bits> sets;
  std::vector<Box> boxes_kept;
  for (std::size_t a = 0; a < s.sets.size(); ++a) {
    if (!dominated[a]) {
      sets.push_back(std::move(s.sets[a]));
      boxes_kept.push_back(kept[a]);
    }
  }
  s.sets = std::move(sets);
  s.covering.assign(static_cast<std::size_t>(cells), {});
  for (std::size_t c = 0; c < s.sets.size(); ++c) {
    s.max_size = std::max(s.max_size, popcount(s.sets[c]));
    for (int id = 0; id < cells; ++id) {
      if (s.sets[c][static_cast<std::size_t>(id) / 64] >> (id % 64) & 1) s.covering[static_cast<std::size_t>(id)].push_back(static_cast<int>(c));
    }
  }
  for (auto& list : s.covering) {
    if (list.empty()) return std::nullopt;  // a cell no window reaches
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return popcount(s.sets[static_cast<std::size_t>(a)]) > popcount(s.sets[static_cast<std::size_t>(b)]);
    });
  }
  s.run(Bits(words, 0), 0);
  if (s.best_pick.empty()) return std::nullopt;
  CoverResult r{s.best, {}, s.nodes <= kNodeBudget};
  for (int c : s.best_pick) r.pieces.push_back(boxes_kept[static_cast<std::size_t>(c)]);
  return r;
}

}  // namespace

std::optional<CoverResult> cover(const Region& region, const PieceFamily& family) {
  if (region.is_empty()) return CoverResult{0, {}, true};
  switch (family.kind) {
    case PieceFamily::Kind::all_pieces:
      return CoverResult{1, {}, true};
    case PieceFamily::Kind::fat_objects: {
      const auto f = fatness(region);
      const double slack = region.is_raster() ? f.error_bound : family.ratio * 1e-12;
      if (f.ratio <= family.ratio + slack) return CoverResult{1, {}, true};
      if (!region.is_box_like()) return std::nullopt;
      auto r = rect_cover(region.boxes(), family.ratio);
      if (r) r->minimal = false;  // fat objects may beat fat rectangles
      return r;
    }
    case PieceFamily::Kind::squares:
    case PieceFamily::Kind::fat_rects: {
      if (region.is_polygon()) return std::nullopt;
      return rect_cover(region.boxes(), family.kind == PieceFamily::Kind::squares ? 1.0 : family.ratio);
    }
    case PieceFamily::Kind::square_pairs: {
      if (region.is_polygon()) return std::nullopt;
      auto r = rect_cover(region.boxes(), 1.0);
      if (!r) return std::nullopt;
      r->minimal = r->count <= 2;
      r->count = (r->count + 1) / 2;
      return r;
    }
  }
  return std::nullopt;
}

std::optional<int> cover_number(const Region& region, const PieceFamily& family) {
  const auto r = cover(region, family);
  if (!r) return std::nullopt;
  return r->count;
}

}  // namespace geocake
