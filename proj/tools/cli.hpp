#pragma once

#include <string>
#include <vector>

namespace pplab::cli {

// Exit codes: 0 all asserted checks pass, 1 input error, 2 failed check or
// computation (diagnostic embedded in the output when one was written).
int run(const std::vector<std::string>& args);

}  // namespace pplab::cli
