#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace planode {

/// Command-line front end: classify | simulate | portrait | verify.
/// Returns the process exit code: 0 on success / all bounds holding,
/// 1 when any verified bound fails, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace planode
