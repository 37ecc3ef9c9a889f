#ifndef LPDO_ENGINE_HPP
#define LPDO_ENGINE_HPP

#include "lpdo/family.hpp"
#include "lpdo/parser.hpp"
#include "lpdo/report.hpp"

namespace lpdo {

struct RunOptions {
    int max_order = 4;
};

// Exit codes: 0 ok, 1 parse error, 2 math error (NeedsHint, NotFactorable),
// 3 verified with nonzero residual (or a parameter-dependent composition),
// 4 internal error.
struct RunResult {
    Report report;
    int exit_code = 0;
};

RunResult run_script(const Script& s, const RunOptions& opts = {});

// parse + run with every failure mapped onto the report/exit-code contract.
RunResult run_source(const std::string& source, const RunOptions& opts = {});

}  // namespace lpdo

#endif
