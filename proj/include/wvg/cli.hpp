#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "wvg/core.hpp"
#include "wvg/montecarlo.hpp"

namespace wvg::cli {

/// `ec`, `flnywy`, or a path to a name,weight[,population] file.
Game parse_game(const std::string& spec);

/// `uniform`, `two-atom:<m>`, `discrete:<v>=<p>;…` (positive atoms, mirrored),
/// `one-factor:<rho>` with an optional `:<marginal>` suffix.
MarginDistribution parse_distribution(const std::string& spec);

/// One group's rule: `wta | pr | zero | mixed:<a> | cd:<c> | gp:<λ> | step:<t>=<v>;…`.
/// `cd` needs the group's weight.
Rule parse_rule(const std::string& spec, double weight);

/// Profile grammar: any rule (applied to every group), `gp:equalizing`,
/// `gp:popular`, `gp:<λ1,…,λn>`, or `per-group:<file>` with header name,rule.
Profile parse_profile(const std::string& spec, const Game& game);

/// Positive integer, also accepted in scientific notation (`1e8`).
std::uint64_t parse_count(const std::string& text);

/// `auto | mc | wta-exact | conv | brute | asymptotic`; auto yields nullopt.
std::optional<Method> parse_method(const std::string& text);

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace wvg::cli
