#pragma once

namespace venuenet {

/// Selects between the serial reference kernel and its OpenMP counterpart.
/// Both produce identical results; the serial path is kept as the test
/// reference and for single-threaded debugging.
enum class Execution { Serial, Parallel };

}  // namespace venuenet
