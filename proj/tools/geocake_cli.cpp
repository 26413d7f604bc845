#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "geocake/certify.hpp"
#include "geocake/dispatch.hpp"
#include "geocake/dividen.hpp"
#include "geocake/gen.hpp"
#include "geocake/io.hpp"
#include "geocake/render.hpp"

using namespace geocake;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kUncertified = 1;
constexpr int kParseError = 2;
constexpr int kInapplicable = 3;

struct Overrides {
  std::string procedure;
  std::string family;
  double fatness = 0;
  double tolerance = 0;
  double envy = 0;
  int mesh = 0;
  double resolution = 0;
};

void apply(const Overrides& o, Instance& in) {
  if (!o.procedure.empty()) in.procedure = o.procedure;
  if (!o.family.empty() || o.fatness > 0) {
    const std::string name = o.family.empty() ? in.family.name() : o.family;
    const double ratio = o.fatness > 0 ? o.fatness : (std::isfinite(in.family.ratio) ? in.family.ratio : 0.0);
    in.family = parse_family_name(name, ratio);
    in.fatness_given = !(name == "fat_objects" && ratio == 0);
  }
  if (o.tolerance > 0) in.tolerance = o.tolerance;
  if (o.envy > 0) in.envy = o.envy;
  if (o.mesh > 0) in.mesh = o.mesh;
  if (o.resolution > 0) in.resolution = o.resolution;
}

// Runs one instance file; writes the allocation document and optional SVG.
int run_one(const fs::path& input, const fs::path& output, const fs::path& svg, const Overrides& o,
            std::ostream& log) {
  Instance in;
  try {
    in = parse_instance(read_file(input));
    apply(o, in);
  } catch (const std::exception& e) {
    log << input.string() << ": parse error: " << e.what() << "\n";
    return kParseError;
  }
  try {
    const Outcome out = solve(in);
    const std::string doc = dump_allocation(out.allocation, &out.certificate);
    if (output.empty()) {
      std::cout << doc;
    } else {
      write_file(output, doc);
    }
    if (!svg.empty()) write_file(svg, render_svg(out.allocation, in.cake));
    if (out.exit_code != kOk) log << input.string() << ": certificate failed: " << out.certificate.failing_clause << "\n";
    return out.exit_code;
  } catch (const Inapplicable& e) {
    log << input.string() << ": inapplicable: " << e.what() << "\n";
    return kInapplicable;
  }
}

int run_batch(const fs::path& dir, const fs::path& outdir, const Overrides& o) {
  std::vector<fs::path> inputs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") inputs.push_back(e.path());
  }
  std::sort(inputs.begin(), inputs.end());
  const fs::path target = outdir.empty() ? dir : outdir;
  fs::create_directories(target);
  std::vector<int> codes(inputs.size());
  std::vector<std::string> logs(inputs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::ostringstream log;
    const auto out = target / (inputs[i].stem().string() + ".out.json");
    codes[i] = run_one(inputs[i], out, {}, o, log);
    logs[i] = log.str();
  }
  int worst = kOk;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    std::cerr << logs[i];
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int run_fixture(const std::string& name, double resolution, const fs::path& output) {
  Fixture fx;
  try {
    fx = make_fixture(name);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "; known fixtures:";
    for (const auto& f : fixture_names()) std::cerr << " " << f;
    std::cerr << "\n";
    return kParseError;
  }
  const auto reports = verify_upper_bound(fx, resolution > 0 ? resolution : 1.0 / 256);
  nlohmann::json j = nlohmann::json::array();
  bool pass = true;
  for (const auto& r : reports) {
    pass = pass && r.pass;
    j.push_back({{"fixture", r.fixture},
                 {"ratio", r.ratio},
                 {"bound", r.bound},
                 {"max_min", r.max_min},
                 {"lattice_error", r.lattice_error},
                 {"min_bridge_side", r.min_bridge_side},
                 {"max_bridges", r.max_bridges},
                 {"detail", r.detail},
                 {"pass", r.pass}});
  }
  const std::string doc = j.dump(1) + "\n";
  if (output.empty()) {
    std::cout << doc;
  } else {
    write_file(output, doc);
  }
  return pass ? kOk : kUncertified;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> t;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) t.push_back(std::stod(item));
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Envy-free division of a two-dimensional cake with geometric constraints"};
  app.require_subcommand(1);

  Overrides o;
  std::string input, output, svg, batch, fixture;
  auto* run = app.add_subcommand("run", "Divide an instance and certify the result");
  run->add_option("instance", input, "Instance document (JSON)");
  run->add_option("-o,--output", output, "Allocation document; stdout when omitted");
  run->add_option("--svg", svg, "Write an SVG drawing of the allocation");
  run->add_option("--batch", batch, "Divide every *.json instance in a directory");
  run->add_option("--fixture", fixture, "Verify the upper bound of a named fixture instead");
  run->add_option("--procedure", o.procedure, "auto or an explicit procedure name");
  run->add_option("--family", o.family, "squares | square_pairs | fat_rects | rectangles | fat_objects");
  run->add_option("--fatness", o.fatness, "Ratio R of fat families");
  run->add_option("--tolerance", o.tolerance, "Halving-time tolerance (default 1e-6)");
  run->add_option("--envy", o.envy, "Envy target of the n-agent search (default 1e-3)");
  run->add_option("--mesh", o.mesh, "Initial mesh k of the n-agent search (default 8)");
  run->add_option("--resolution", o.resolution, "Lattice step for S-values (default: cake side / 256)");

  GenOptions g;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Emit a random instance");
  gen->add_option("--seed", g.seed, "Random seed")->required();
  gen->add_option("--cake", g.cake, "square | rect | archipelago | raster | convex_polygon");
  gen->add_option("--shape", g.shape, "Raster shape: pentagon | ellipse | blob");
  gen->add_option("--family", g.family, "Piece family");
  gen->add_option("--fatness", g.ratio, "Ratio R of fat families");
  gen->add_option("--aspect", g.aspect, "Aspect ratio of rect cakes");
  gen->add_option("--islands", g.islands, "Island count of archipelago cakes");
  gen->add_option("--agents", g.agents, "Number of agents");
  gen->add_option("--cells", g.cells, "Density cells along the longer cake side");
  gen->add_option("-o,--output", gen_out, "Instance document; stdout when omitted");

  int n = 3;
  std::vector<std::string> points;
  std::string snap_cake = "square", snap_svg;
  auto* snap = app.add_subcommand("snapshot", "Draw knife-tuple partitions at simplex points");
  snap->add_option("--agents", n, "Tuple size");
  snap->add_option("--t", points, "Simplex point, comma separated; repeatable")->required();
  snap->add_option("--cake", snap_cake, "square | pentagon");
  snap->add_option("--svg", snap_svg, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kParseError;
  }

  try {
    if (run->parsed()) {
      if (!fixture.empty()) return run_fixture(fixture, o.resolution, output);
      if (!batch.empty()) return run_batch(batch, output, o);
      if (input.empty()) {
        std::cerr << "run needs an instance, --batch or --fixture\n";
        return kParseError;
      }
      return run_one(input, output, svg, o, std::cerr);
    }
    if (gen->parsed()) {
      const std::string doc = dump_instance(generate_instance(g));
      if (gen_out.empty()) {
        std::cout << doc;
      } else {
        write_file(gen_out, doc);
      }
      return kOk;
    }
    const Region cake = snap_cake == "pentagon" ? raster_pentagon() : Region::box({0, 0, 1, 1});
    const auto tuple = snap_cake == "pentagon" ? build_fat_tuple(cake, n) : build_square_tuple(cake, n);
    std::vector<std::vector<Region>> parts;
    for (const auto& p : points) parts.push_back(eval_tuple(tuple, parse_point(p)));
    write_file(snap_svg, render_panels(cake, parts, points));
    return kOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUncertified;
  }
}
