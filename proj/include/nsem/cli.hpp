#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nsem::cli {

/// Exit statuses. A formula that evaluates to false is still a success.
enum Status : int {
  kOk = 0,
  kUsage = 2,        // bad flags, unparsable formula or assignment
  kInvalid = 3,      // malformed or invalid model file
  kPrecondition = 4  // e.g. the world is not a solution
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsem::cli
