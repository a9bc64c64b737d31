#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bfh::braid {

/// A word in the braid group B_n: letter +i is the generator sigma_i,
/// letter -i its inverse, 1 <= |i| <= strands-1.
struct BraidWord {
  int strands = 2;
  std::vector<int> letters;

  friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

struct ClosureInfo {
  std::vector<int> permutation;  // 0-based: strand entering at i exits at permutation[i]
  int components = 0;
  int exponent_sum = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, size_t position)
      : std::runtime_error(std::move(msg)), position(position) {}
  size_t position;
};

/// Grammar: word := item* ('@' INT)? ; item := 's' INT ('^' SIGNEDINT)?
/// Items are whitespace separated; strand count defaults to 1 + max index.
/// A bare "@n" denotes the empty word in B_n.
BraidWord parse(std::string_view text);

/// Canonical form: run-length compressed letters plus an explicit "@n".
/// parse(print(b)) == b for every valid word.
std::string print(const BraidWord& b);

void check_valid(const BraidWord& b);  // throws std::invalid_argument

ClosureInfo closure_info(const BraidWord& b);
bool closure_is_knot(const BraidWord& b);

/// Index shift sigma_i -> sigma_{i+k} into B_{new_strands}.
BraidWord shift(const BraidWord& b, int k, int new_strands);

/// b1 * Sigma^{n-1}(b2) on n+m-1 strands; both closures must be knots.
BraidWord connected_sum(const BraidWord& b1, const BraidWord& b2);

/// x^{-1} b x (Markov move I). Strand counts must agree.
BraidWord markov_conjugate(const BraidWord& b, const BraidWord& x);

/// Append sigma_n and pass to B_{n+1} (Markov move II).
BraidWord markov_stabilize(const BraidWord& b);

BraidWord inverse(const BraidWord& b);
BraidWord mirror(const BraidWord& b);  // negate every letter

/// Cancel adjacent sigma_i sigma_i^{-1} pairs until none remain.
/// Never applied implicitly; word length is meaningful elsewhere.
BraidWord free_reduce(const BraidWord& b);

}  // namespace bfh::braid
