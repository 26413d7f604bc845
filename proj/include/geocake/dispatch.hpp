#pragma once

#include <stdexcept>
#include <string>

#include "geocake/allocation.hpp"
#include "geocake/certify.hpp"
#include "geocake/io.hpp"

namespace geocake {

// The procedure chosen for an instance and the share it promises each agent.
struct Plan {
  std::string procedure;
  Rational guarantee;
};

// The instance has no procedure in the guarantee table; what() gives the reason.
struct Inapplicable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double instance_resolution(const Instance& instance);

// Resolves "auto" or checks an explicit procedure against the table.
Plan plan(const Instance& instance);

Allocation execute(const Instance& instance, const Plan& plan);

struct Outcome {
  Allocation allocation;
  Certificate certificate;
  bool proportional = false;
  int exit_code = 0;  // 0 certified, 1 certification failed
};

// Plans, runs and certifies at half the producing resolution. Throws
// Inapplicable for instances outside the table.
Outcome solve(const Instance& instance);

}  // namespace geocake
