#include "bfh/braid.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>

namespace bfh::braid {

void check_valid(const BraidWord& b) {
  if (b.strands < 2) throw std::invalid_argument("braid: strands must be >= 2");
  for (int e : b.letters) {
    int i = std::abs(e);
    if (i < 1 || i > b.strands - 1)
      throw std::invalid_argument("braid: letter index " + std::to_string(i) +
                                  " out of range for " + std::to_string(b.strands) + " strands");
  }
}

namespace {

struct Cursor {
  std::string_view s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() const { return s[pos]; }

  long read_int(bool allow_sign) {
    size_t start = pos;
    if (allow_sign && pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    size_t digits = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == digits) throw ParseError("expected integer", start);
    long v = 0;
    bool neg = s[start] == '-';
    for (size_t i = digits; i < pos; ++i) {
      v = v * 10 + (s[i] - '0');
      if (v > 1000000) throw ParseError("integer too large", start);
    }
    return neg ? -v : v;
  }
};

}  // namespace

BraidWord parse(std::string_view text) {
  Cursor c{text};
  std::vector<int> letters;
  int max_index = 0;
  long declared = -1;
  bool any = false;
  while (!c.done()) {
    size_t item_pos = c.pos;
    char ch = c.peek();
    if (ch == '@') {
      ++c.pos;
      declared = c.read_int(false);
      c.skip_ws();
      if (c.pos < c.s.size()) throw ParseError("'@n' must be the final token", c.pos);
      any = true;
      break;
    }
    if (ch != 's') throw ParseError("expected 's<i>' token", item_pos);
    ++c.pos;
    long idx = c.read_int(false);
    if (idx == 0) throw ParseError("generator index 0 is not allowed", item_pos);
    long power = 1;
    if (c.pos < c.s.size() && c.s[c.pos] == '^') {
      ++c.pos;
      power = c.read_int(true);
    }
    max_index = std::max(max_index, static_cast<int>(idx));
    int letter = static_cast<int>(power < 0 ? -idx : idx);
    for (long k = 0; k < std::labs(power); ++k) letters.push_back(letter);
    any = true;
  }
  if (!any) throw ParseError("empty braid word", 0);
  BraidWord b;
  b.strands = declared >= 0 ? static_cast<int>(declared) : max_index + 1;
  b.letters = std::move(letters);
  if (b.strands < 2) throw ParseError("strand count must be >= 2", 0);
  if (max_index > b.strands - 1)
    throw ParseError("generator index " + std::to_string(max_index) +
                         " requires at least " + std::to_string(max_index + 1) + " strands",
                     0);
  return b;
}

std::string print(const BraidWord& b) {
  std::string out;
  size_t i = 0;
  while (i < b.letters.size()) {
    size_t j = i;
    while (j < b.letters.size() && b.letters[j] == b.letters[i]) ++j;
    size_t run = j - i;
    int e = b.letters[i];
    if (!out.empty()) out += ' ';
    out += 's' + std::to_string(std::abs(e));
    if (e < 0) {
      out += "^-" + std::to_string(run);
    } else if (run > 1) {
      out += '^' + std::to_string(run);
    }
    i = j;
  }
  if (!out.empty()) out += ' ';
  out += '@' + std::to_string(b.strands);
  return out;
}

ClosureInfo closure_info(const BraidWord& b) {
  check_valid(b);
  ClosureInfo info;
  info.permutation.resize(static_cast<size_t>(b.strands));
  std::iota(info.permutation.begin(), info.permutation.end(), 0);
  for (int e : b.letters) {
    int i = std::abs(e) - 1;
    // strand positions i, i+1 swap as the letter is crossed, bottom to top
    for (auto& p : info.permutation) {
      if (p == i)
        p = i + 1;
      else if (p == i + 1)
        p = i;
    }
    info.exponent_sum += e > 0 ? 1 : -1;
  }
  std::vector<bool> seen(static_cast<size_t>(b.strands), false);
  for (int start = 0; start < b.strands; ++start) {
    if (seen[static_cast<size_t>(start)]) continue;
    ++info.components;
    for (int cur = start; !seen[static_cast<size_t>(cur)];
         cur = info.permutation[static_cast<size_t>(cur)])
      seen[static_cast<size_t>(cur)] = true;
  }
  return info;
}

bool closure_is_knot(const BraidWord& b) { return closure_info(b).components == 1; }

BraidWord shift(const BraidWord& b, int k, int new_strands) {
  check_valid(b);
  if (k < 0) throw std::invalid_argument("shift: negative offset");
  if (new_strands < b.strands + k)
    throw std::invalid_argument("shift: " + std::to_string(new_strands) +
                                " strands cannot host a shift of " + std::to_string(b.strands) +
                                " strands by " + std::to_string(k));
  BraidWord out;
  out.strands = new_strands;
  out.letters.reserve(b.letters.size());
  for (int e : b.letters) out.letters.push_back(e > 0 ? e + k : e - k);
  return out;
}

BraidWord connected_sum(const BraidWord& b1, const BraidWord& b2) {
  if (!closure_is_knot(b1)) throw std::invalid_argument("connected_sum: left closure is not a knot");
  if (!closure_is_knot(b2)) throw std::invalid_argument("connected_sum: right closure is not a knot");
  // The summands share one strand, so the sum lives in B_{n+m-1}.
  int n = b1.strands, m = b2.strands;
  BraidWord out = shift(b2, n - 1, n + m - 1);
  out.letters.insert(out.letters.begin(), b1.letters.begin(), b1.letters.end());
  return out;
}

BraidWord inverse(const BraidWord& b) {
  check_valid(b);
  BraidWord out;
  out.strands = b.strands;
  out.letters.assign(b.letters.rbegin(), b.letters.rend());
  for (int& e : out.letters) e = -e;
  return out;
}

BraidWord mirror(const BraidWord& b) {
  check_valid(b);
  BraidWord out = b;
  for (int& e : out.letters) e = -e;
  return out;
}

BraidWord markov_conjugate(const BraidWord& b, const BraidWord& x) {
  check_valid(b);
  check_valid(x);
  if (b.strands != x.strands)
    throw std::invalid_argument("markov_conjugate: strand counts differ");
  BraidWord out = inverse(x);
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  out.letters.insert(out.letters.end(), x.letters.begin(), x.letters.end());
  return out;
}

BraidWord markov_stabilize(const BraidWord& b) {
  check_valid(b);
  BraidWord out = b;
  out.letters.push_back(b.strands);
  out.strands = b.strands + 1;
  return out;
}

BraidWord free_reduce(const BraidWord& b) {
  check_valid(b);
  BraidWord out;
  out.strands = b.strands;
  for (int e : b.letters) {
    if (!out.letters.empty() && out.letters.back() == -e)
      out.letters.pop_back();
    else
      out.letters.push_back(e);
  }
  return out;
}

}  // namespace bfh::braid
