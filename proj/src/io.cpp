#include "geocake/io.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace geocake {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

double positive(const json& j, const char* key) {
  const double v = j.at(key).get<double>();
  if (!(v > 0) || !std::isfinite(v)) bad(std::string(key) + " must be positive");
  return v;
}

json box_json(const Box& b) { return json::array({b.xmin, b.ymin, b.xmax, b.ymax}); }

Box box_from(const json& j) {
  if (!j.is_array() || j.size() != 4) bad("a box is [xmin, ymin, xmax, ymax]");
  const Box b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (b.empty()) bad("empty box");
  return b;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

Point point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) bad("a point is [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json raster_json(const Raster& r) {
  return {{"origin", point_json(r.origin)}, {"cell", r.cell}, {"nx", r.nx}, {"ny", r.ny}, {"cells", r.cells}};
}

Raster raster_from(const json& j) {
  Raster r;
  r.origin = point_from(j.at("origin"));
  r.cell = positive(j, "cell");
  r.nx = j.at("nx").get<int>();
  r.ny = j.at("ny").get<int>();
  if (r.nx <= 0 || r.ny <= 0) bad("raster dimensions must be positive");
  r.cells = j.at("cells").get<std::vector<std::uint8_t>>();
  if (r.cells.size() != static_cast<std::size_t>(r.nx) * r.ny) bad("raster cell count does not match nx * ny");
  for (auto& c : r.cells) c = c ? 1 : 0;
  return r;
}

json region_json(const Region& r) {
  return std::visit(
      [&](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Box>) {
          return {{"kind", "box"}, {"box", box_json(s)}};
        } else if constexpr (std::is_same_v<T, Rectilinear>) {
          json boxes = json::array();
          for (const auto& b : s.boxes) boxes.push_back(box_json(b));
          return {{"kind", "rectilinear"}, {"boxes", boxes}};
        } else if constexpr (std::is_same_v<T, Raster>) {
          json j = raster_json(s);
          j["kind"] = "raster";
          return j;
        } else {
          json v = json::array();
          for (const auto& p : s.vertices) v.push_back(point_json(p));
          return {{"kind", "polygon"}, {"vertices", v}};
        }
      },
      r.shape());
}

// Disjoint stored boxes are kept as they are, so shapes survive a round trip.
Region region_from(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "rectilinear") {
    std::vector<Box> boxes;
    for (const auto& b : j.at("boxes")) boxes.push_back(box_from(b));
    return Region::rectilinear(std::move(boxes));
  }
  if (kind == "box") return Region::box(box_from(j.at("box")));
  if (kind == "raster") return Region::raster(raster_from(j));
  if (kind == "polygon") {
    std::vector<Point> v;
    for (const auto& p : j.at("vertices")) v.push_back(point_from(p));
    return Region::polygon(v);
  }
  bad("unknown region kind " + kind);
}

json density_json(const GridDensity& d) {
  return {{"origin", point_json(d.origin())}, {"cell", d.cell()}, {"nx", d.nx()}, {"ny", d.ny()},
          {"weights", d.weights()}};
}

GridDensity density_from(const json& j) {
  const Point o = point_from(j.at("origin"));
  const double cell = positive(j, "cell");
  const int nx = j.at("nx").get<int>(), ny = j.at("ny").get<int>();
  if (nx <= 0 || ny <= 0) bad("density dimensions must be positive");
  auto w = j.at("weights").get<std::vector<double>>();
  if (w.size() != static_cast<std::size_t>(nx) * ny) bad("density weight count does not match nx * ny");
  for (double x : w) {
    if (!(x >= 0) || !std::isfinite(x)) bad("density weights must be non-negative");
  }
  return GridDensity(o, cell, nx, ny, std::move(w));
}

json family_json(const PieceFamily& f, bool ratio_given = true) {
  json j{{"kind", f.name()}};
  if (ratio_given && (f.kind == PieceFamily::Kind::fat_objects ||
                      (f.kind == PieceFamily::Kind::fat_rects && std::isfinite(f.ratio)))) {
    j["ratio"] = f.ratio;
  }
  return j;
}

std::string family_kind(const std::string& name) {
  const auto paren = name.find('(');
  return paren == std::string::npos ? name : name.substr(0, paren);
}

PieceFamily family_from(const json& j, bool* ratio_given) {
  const auto kind = family_kind(j.at("kind").get<std::string>());
  const bool has_ratio = j.contains("ratio") && !j.at("ratio").is_null();
  if (ratio_given) *ratio_given = has_ratio || (kind != "fat_objects");
  return parse_family_name(kind, has_ratio ? j.at("ratio").get<double>() : 0.0);
}

Region cake_from(const json& j, std::string& kind) {
  kind = j.at("kind").get<std::string>();
  const Point o = j.contains("origin") ? point_from(j.at("origin")) : Point{0, 0};
  if (kind == "square") {
    const double s = positive(j, "side");
    return Region::box({o.x, o.y, o.x + s, o.y + s});
  }
  if (kind == "rect") {
    const double w = positive(j, "width"), h = positive(j, "height");
    return Region::box({o.x, o.y, o.x + w, o.y + h});
  }
  if (kind == "archipelago") {
    std::vector<Box> islands;
    for (const auto& b : j.at("islands")) islands.push_back(box_from(b));
    if (islands.size() < 2) bad("an archipelago needs at least two islands");
    for (std::size_t a = 0; a < islands.size(); ++a) {
      for (std::size_t b = a + 1; b < islands.size(); ++b) {
        if (interiors_overlap(islands[a], islands[b])) {
          bad("archipelago islands must be disjoint");
        }
      }
    }
    return Region::rectilinear(islands);
  }
  if (kind == "raster") {
    Raster r = raster_from(j);
    if (r.count() == 0) bad("raster cake is empty");
    return Region::raster(std::move(r));
  }
  if (kind == "convex_polygon") {
    std::vector<Point> v;
    for (const auto& p : j.at("vertices")) v.push_back(point_from(p));
    try {
      return Region::polygon(v);
    } catch (const std::invalid_argument& e) {
      bad(e.what());
    }
  }
  bad("unknown cake kind " + kind);
}

json cake_json(const Instance& in) {
  json j{{"kind", in.cake_kind}};
  const Box b = in.cake.bounds();
  if (in.cake_kind == "square") {
    j["origin"] = point_json({b.xmin, b.ymin});
    j["side"] = b.width();
  } else if (in.cake_kind == "rect") {
    j["origin"] = point_json({b.xmin, b.ymin});
    j["width"] = b.width();
    j["height"] = b.height();
  } else if (in.cake_kind == "archipelago") {
    json islands = json::array();
    for (const auto& box : in.cake.boxes()) islands.push_back(box_json(box));
    j["islands"] = islands;
  } else if (in.cake_kind == "raster") {
    j.update(raster_json(*in.cake.as_raster()));
  } else {
    json v = json::array();
    for (const auto& p : in.cake.as_polygon()->vertices) v.push_back(point_json(p));
    j["vertices"] = v;
  }
  return j;
}

}  // namespace

PieceFamily parse_family_name(const std::string& name, double ratio) {
  if (name == "squares") return PieceFamily::squares();
  if (name == "square_pairs") return PieceFamily::square_pairs();
  if (name == "rectangles") return PieceFamily::rectangles();
  if (name == "fat_rects") {
    if (!(ratio >= 1)) bad("fat_rects needs a ratio of at least 1");
    return PieceFamily::fat_rects(ratio);
  }
  if (name == "fat_objects") {
    if (ratio == 0) return {PieceFamily::Kind::fat_objects, std::numeric_limits<double>::infinity()};
    if (!(ratio >= 1)) bad("fat_objects needs a ratio of at least 1");
    return PieceFamily::fat_objects(ratio);
  }
  bad("unknown family " + name);
}

Instance parse_instance(const std::string& text) {
  try {
    const json j = json::parse(text);
    Instance in;
    in.cake = cake_from(j.at("cake"), in.cake_kind);
    in.family = family_from(j.at("family"), &in.fatness_given);
    for (const auto& a : j.at("agents")) {
      in.agents.push_back({a.at("id").get<std::string>(), density_from(a.at("density"))});
    }
    if (in.agents.empty()) bad("an instance needs at least one agent");
    for (const auto& a : in.agents) {
      if (!(integrate(a.density, in.cake) > 0)) bad("agent " + a.id + " values the cake at zero");
    }
    in.procedure = j.value("procedure", std::string("auto"));
    if (j.contains("tolerance")) in.tolerance = positive(j, "tolerance");
    if (j.contains("envy")) in.envy = positive(j, "envy");
    if (j.contains("mesh")) {
      in.mesh = j.at("mesh").get<int>();
      if (in.mesh < 1) bad("mesh must be positive");
    }
    if (j.contains("resolution")) in.resolution = positive(j, "resolution");
    return in;
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

std::string dump_instance(const Instance& in) {
  json agents = json::array();
  for (const auto& a : in.agents) agents.push_back({{"id", a.id}, {"density", density_json(a.density)}});
  json j{{"cake", cake_json(in)},
         {"family", family_json(in.family, in.fatness_given)},
         {"agents", agents},
         {"procedure", in.procedure},
         {"tolerance", in.tolerance},
         {"envy", in.envy},
         {"mesh", in.mesh}};
  if (in.resolution > 0) j["resolution"] = in.resolution;
  return j.dump(1) + "\n";
}

std::string dump_allocation(const Allocation& a, const Certificate* c) {
  json shares = json::array();
  for (const auto& s : a.shares) {
    shares.push_back({{"agent", s.agent},
                      {"piece", region_json(s.piece)},
                      {"usable", region_json(s.usable)},
                      {"value", s.value},
                      {"error", s.error}});
  }
  json j{{"procedure", a.procedure}, {"guarantee", a.guarantee.str()}, {"family", family_json(a.family)},
         {"epsilon", a.epsilon},     {"certified", a.certified},         {"trace", a.trace},
         {"shares", shares}};
  if (c) {
    json pairs = json::array();
    for (auto [i, k] : c->envy_pairs) pairs.push_back({i, k});
    json fat = json::array();
    for (const auto& f : c->fatness) fat.push_back({{"ratio", f.ratio}, {"error_bound", f.error_bound}});
    j["certificate"] = {{"pass", c->pass},
                        {"failing_clause", c->failing_clause},
                        {"envy_free_at", c->envy_free_at},
                        {"min_proportionality", c->min_proportionality},
                        {"family_membership", c->family_membership},
                        {"fatness", fat},
                        {"envy_pairs", pairs}};
  }
  return j.dump(1) + "\n";
}

Allocation parse_allocation(const std::string& text) {
  try {
    const json j = json::parse(text);
    Allocation a;
    a.procedure = j.at("procedure").get<std::string>();
    a.guarantee = parse_rational(j.at("guarantee").get<std::string>());
    a.family = family_from(j.at("family"), nullptr);
    a.epsilon = j.at("epsilon").get<double>();
    a.certified = j.at("certified").get<bool>();
    a.trace = j.at("trace").get<std::vector<std::string>>();
    for (const auto& s : j.at("shares")) {
      a.shares.push_back({s.at("agent").get<std::string>(), region_from(s.at("piece")), region_from(s.at("usable")),
                          s.at("value").get<double>(), s.at("error").get<double>()});
    }
    return a;
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace geocake
