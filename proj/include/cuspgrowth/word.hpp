#ifndef CUSPGROWTH_WORD_HPP
#define CUSPGROWTH_WORD_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cuspgrowth/common.hpp"

namespace growth {

// Reduced words in a free product of cyclic groups <s_i | s_i^{m_i}>,
// m_i = 0 meaning infinite order. The normal form is a syllable list
// g^{e} with adjacent syllables over distinct generators; exponents are
// nonzero (infinite order) or in [1, m-1] (finite order).
struct Syllable {
  std::int32_t gen = 0;
  std::int64_t exp = 0;
  friend bool operator==(const Syllable&, const Syllable&) = default;
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

using Word = std::vector<Syllable>;

// Exponent canonicalization for one generator of the given order.
inline std::int64_t canon_exp(std::int64_t e, int order) {
  if (order == 0) return e;
  e %= order;
  if (e < 0) e += order;
  return e;  // in [0, order-1]; 0 means the syllable vanishes
}

inline void word_push(Word& w, std::int32_t gen, std::int64_t exp, std::span<const int> orders) {
  exp = canon_exp(exp, orders[gen]);
  if (exp == 0) return;
  if (!w.empty() && w.back().gen == gen) {
    const std::int64_t merged = canon_exp(w.back().exp + exp, orders[gen]);
    if (merged == 0)
      w.pop_back();
    else
      w.back().exp = merged;
  } else {
    w.push_back({gen, exp});
  }
}

inline Word word_mul(const Word& u, const Word& v, std::span<const int> orders) {
  Word out = u;
  for (const Syllable& s : v) word_push(out, s.gen, s.exp, orders);
  return out;
}

inline Word word_inv(const Word& u, std::span<const int> orders) {
  Word out;
  for (auto it = u.rbegin(); it != u.rend(); ++it) word_push(out, it->gen, -it->exp, orders);
  return out;
}

// Word length over the standard generators {s_i^{+-1}}.
inline std::int64_t word_length(const Word& u, std::span<const int> orders) {
  std::int64_t len = 0;
  for (const Syllable& s : u) {
    const int m = orders[s.gen];
    if (m == 0)
      len += s.exp >= 0 ? s.exp : -s.exp;
    else
      len += std::min(s.exp, static_cast<std::int64_t>(m) - s.exp);
  }
  return len;
}

// Compact byte key for hashing and deterministic ordering.
inline std::string word_key(const Word& u) {
  std::string k;
  k.reserve(u.size() * 9);
  for (const Syllable& s : u) {
    k.push_back(static_cast<char>(s.gen));
    std::uint64_t e = static_cast<std::uint64_t>(s.exp);
    for (int i = 0; i < 8; ++i) k.push_back(static_cast<char>((e >> (8 * i)) & 0xff));
  }
  return k;
}

inline std::string word_to_string(const Word& u, std::span<const std::string> names) {
  if (u.empty()) return "e";
  std::string out;
  for (const Syllable& s : u) {
    out += names[s.gen];
    if (s.exp != 1) out += "^" + std::to_string(s.exp);
  }
  return out;
}

}  // namespace growth

#endif
