#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace seqmeas {

/// Runs the command-line interface on `args` (without the program name) and
/// returns the process exit status: 0 on success, 1 for domain errors
/// (dimension mismatches, capacity limits, invalid states), 2 for usage and
/// config parse errors. All output goes to the supplied streams.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace seqmeas
