#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "geocake/allocation.hpp"
#include "geocake/certify.hpp"

namespace geocake {

// A division problem as read from an instance document.
struct Instance {
  std::string cake_kind;  // square | rect | archipelago | raster | convex_polygon
  Region cake;
  PieceFamily family;
  bool fatness_given = true;  // false when a fat family leaves R to the procedure
  std::vector<AgentValuation> agents;
  std::string procedure = "auto";
  double tolerance = 1e-6;   // halving-time tolerance
  double envy = 1e-3;        // envy target for the n-agent mesh search
  int mesh = 8;              // initial mesh k for the n-agent search
  double resolution = 0;     // 0 picks a 256th of the cake's longer side
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Instance parse_instance(const std::string& text);
std::string dump_instance(const Instance& instance);

std::string dump_allocation(const Allocation& alloc, const Certificate* certificate = nullptr);
Allocation parse_allocation(const std::string& text);

PieceFamily parse_family_name(const std::string& name, double ratio);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace geocake
