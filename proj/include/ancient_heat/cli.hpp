#pragma once

#include <string>
#include <vector>

namespace ancient_heat {

// Exit codes: 0 success/pass, 1 finding (criterion violated, fit failed,
// tolerance unreachable), 2 input or usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace ancient_heat
