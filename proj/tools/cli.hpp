#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace cantrans::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_negative = 2;
inline constexpr int exit_undecided = 3;
inline constexpr int exit_usage = 64;
inline constexpr int exit_internal = 70;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Re-checks any document emitted by a subcommand; returns exit_ok on success.
int verify_document(const nlohmann::json& doc, std::ostream& out);

}  // namespace cantrans::cli
