#pragma once

namespace geocake {

// Selects between the OpenMP kernel and its serial reference.
enum class Exec { serial, parallel };

}  // namespace geocake
