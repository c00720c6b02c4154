#pragma once

#include <ostream>

namespace kronload::cli {

// Entry point of the command-line tool. Returns the process exit code;
// errors are written to `err` as "error[<code>]: <message>".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kronload::cli
