#include "geocake/dispatch.hpp"

#include <bit>
#include <cmath>

#include "geocake/cover.hpp"
#include "geocake/divide2.hpp"
#include "geocake/dividen.hpp"

namespace geocake {

namespace {

bool is_box_cake(const Instance& in) { return in.cake_kind == "square" || in.cake_kind == "rect"; }

double aspect(const Region& cake) {
  const Box b = cake.bounds();
  return b.long_side() / b.short_side();
}

Rational square_tuple_guarantee(int n) {
  const auto leaves = static_cast<std::int64_t>(std::bit_ceil(static_cast<unsigned>(n)));
  return Rational::of(1, leaves * leaves);
}

std::string describe(const Instance& in) {
  return std::to_string(in.agents.size()) + " agent(s), " + in.cake_kind + " cake, family " + in.family.name();
}

// Every applicable procedure for the instance, best guarantee first.
std::vector<Plan> candidates(const Instance& in) {
  const auto& f = in.family;
  const int n = static_cast<int>(in.agents.size());
  const bool square = is_box_cake(in) && in.cake.bounds().is_square();
  const bool fat_rects = f.kind == PieceFamily::Kind::fat_rects && std::isfinite(f.ratio);
  const bool rectangles = f.kind == PieceFamily::Kind::fat_rects && !fat_rects;
  const bool fat_objects = f.kind == PieceFamily::Kind::fat_objects;
  std::vector<Plan> out;
  if (n == 1) {
    const auto c = cover_number(in.cake, f);
    if (c && *c > 0) out.push_back({"whole", Rational::of(1, *c)});
    return out;
  }
  if (n == 2) {
    if (square && f.kind == PieceFamily::Kind::square_pairs) out.push_back({"twin_squares", Rational::of(1, 2)});
    if (is_box_cake(in) && rectangles) out.push_back({"sweep", Rational::of(1, 2)});
    if (fat_objects && in.cake_kind != "archipelago") {
      if (in.cake_kind == "convex_polygon") out.push_back({"rotating_knife", Rational::of(1, 2)});
      out.push_back({"divide_fat", Rational::of(1, 2)});
    }
    if (is_box_cake(in) && fat_rects && f.ratio >= 2 && aspect(in.cake) <= f.ratio * (1 + 1e-12)) {
      out.push_back({"multiple_partition", Rational::of(1, 3)});
    }
    if (in.cake_kind == "archipelago" && (f.kind == PieceFamily::Kind::squares || f.kind == PieceFamily::Kind::fat_rects)) {
      const auto m = static_cast<std::int64_t>(in.cake.boxes().size());
      out.push_back({"archipelago", Rational::of(1, m + (f.kind == PieceFamily::Kind::squares ? 3 : 1))});
    }
    if (square && f.kind == PieceFamily::Kind::squares) out.push_back({"twin_squares", Rational::of(1, 4)});
  }
  if (is_box_cake(in) && ((f.kind == PieceFamily::Kind::squares && square) ||
                          (f.kind == PieceFamily::Kind::fat_rects && aspect(in.cake) <= f.ratio * (1 + 1e-12)))) {
    out.push_back({"divide_n", square_tuple_guarantee(n)});
  }
  if (fat_objects && n <= 9 && (in.cake_kind == "raster" || is_box_cake(in))) {
    out.push_back({"divide_n", Rational::of(1, n)});
  }
  return out;
}

Divide2Options two_agent_options(const Instance& in) {
  Divide2Options o;
  o.tol = in.tolerance;
  o.resolution = instance_resolution(in);
  return o;
}

}  // namespace

double instance_resolution(const Instance& in) {
  return in.resolution > 0 ? in.resolution : default_resolution(in.cake);
}

Plan plan(const Instance& in) {
  const auto options = candidates(in);
  if (in.procedure == "auto") {
    if (options.empty()) throw Inapplicable("no procedure in the guarantee table for " + describe(in));
    return options.front();
  }
  for (const auto& p : options) {
    if (p.procedure == in.procedure) return p;
  }
  throw Inapplicable("procedure " + in.procedure + " does not apply to " + describe(in));
}

Allocation execute(const Instance& in, const Plan& p) {
  const auto& agents = in.agents;
  const auto opts = two_agent_options(in);
  Allocation a;
  try {
    if (p.procedure == "whole") {
      a.procedure = "whole";
      a.family = in.family;
      a.guarantee = p.guarantee;
      a.shares.push_back(make_share(agents.front(), in.cake, in.family, opts.resolution));
      a.certified = true;
    } else if (p.procedure == "twin_squares") {
      a = generic_knife_2({in.cake, TwinSquares{in.cake.bounds()}}, agents, in.family, opts, p.guarantee);
    } else if (p.procedure == "sweep") {
      const Box b = in.cake.bounds();
      a = generic_knife_2({in.cake, SweepLine{in.cake, b.width() >= b.height() ? 0 : 1, false}}, agents, in.family,
                          opts, p.guarantee);
    } else if (p.procedure == "multiple_partition") {
      a = multiple_partition_2(in.cake, agents, in.family.ratio, opts);
    } else if (p.procedure == "archipelago") {
      a = archipelago_2(in.cake, agents, in.family, opts);
    } else if (p.procedure == "divide_fat") {
      a = divide_fat_2(in.cake, agents, opts);
    } else if (p.procedure == "rotating_knife") {
      a = rotating_knife_2(in.cake, agents, opts);
    } else if (p.procedure == "divide_n") {
      DivideNOptions o;
      o.epsilon = in.envy;
      o.k0 = in.mesh;
      o.resolution = opts.resolution;
      a = divide_n(in.cake, agents, in.family, o);
    } else {
      throw Inapplicable("unknown procedure " + p.procedure);
    }
  } catch (const std::invalid_argument& e) {
    throw Inapplicable(p.procedure + ": " + e.what());
  }
  if (in.fatness_given && a.family.kind == in.family.kind && a.family.ratio > in.family.ratio * (1 + 1e-9)) {
    throw Inapplicable(p.procedure + " yields " + std::to_string(a.family.ratio) + "-fat pieces, above the requested " +
                       std::to_string(in.family.ratio));
  }
  return a;
}

Outcome solve(const Instance& in) {
  const Plan p = plan(in);
  Outcome o;
  o.allocation = execute(in, p);
  const auto& a = o.allocation;
  o.certificate = check_envy_free(a, in.cake, in.agents, a.family, instance_resolution(in) / 2, a.epsilon + 1e-12);
  o.proportional = check_proportionality(a, in.cake, in.agents, a.guarantee, a.epsilon + 1e-12);
  if (!o.proportional && o.certificate.pass) {
    o.certificate.pass = false;
    o.certificate.failing_clause = "proportionality";
  }
  if (!a.certified && o.certificate.pass) {
    o.certificate.pass = false;
    o.certificate.failing_clause = "search did not reach its tolerance";
  }
  o.exit_code = o.certificate.pass ? 0 : 1;
  return o;
}

}  // namespace geocake
