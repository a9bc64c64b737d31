#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bfh::cli {

// exit-code contract, part of the public interface
inline constexpr int kOk = 0;
inline constexpr int kParseError = 2;     // braid text or command-line syntax
inline constexpr int kSemanticError = 3;  // valid syntax, impossible request
inline constexpr int kInstability = 4;    // enumeration not reproducible across seeds
inline constexpr int kDataInvariant = 5;  // knot data package violates a law

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bfh::cli
