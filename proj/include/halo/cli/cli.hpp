#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "halo/padic/padic_element.hpp"

namespace halo::cli {

inline constexpr const char* kVersion = "halo-slopes 0.1.0";

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kPrecision = 3 };

// Runs one subcommand. Output goes to --out when given, else to `out`;
// diagnostics go to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "pure:e=4:a=1" is a * p^(1/4), "cyc:j=2:a=1" is a * (zeta_{p^2} - 1)
padic::PadicElement parse_z(const std::string& spec, int p);
// "triv" or "cond:tame:wild"
struct CharSpec {
    int conductor = 0;
    int tame = 0;
    long wild = 0;
};
CharSpec parse_char(const std::string& spec);
// "0,1,3/2"
std::vector<padic::ValQ> parse_slopes(const std::string& list);

}  // namespace halo::cli
