#pragma once

// Fibonacci sequences, the splitting matrix of the pentagrid and its
// characteristic polynomial, and the standard Fibonacci representation.
//
// All integers are checked 128-bit: an operation that would wrap throws
// fibgrid::Overflow instead.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fibgrid/error.hpp"

namespace fibgrid {

using Natural = unsigned __int128;
using Integer = __int128;

inline std::string to_string(Natural v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline std::string to_string(Integer v) {
  if (v < 0) return "-" + to_string(static_cast<Natural>(-v));
  return to_string(static_cast<Natural>(v));
}

inline Natural parse_natural(std::string_view text) {
  if (text.empty()) throw InvalidArgument("empty number");
  Natural v = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw InvalidArgument("not a number: " + std::string(text));
    Natural next;
    if (__builtin_mul_overflow(v, Natural{10}, &next) ||
        __builtin_add_overflow(next, Natural(ch - '0'), &next)) {
      throw Overflow("number does not fit in 128 bits: " + std::string(text));
    }
    v = next;
  }
  return v;
}

template <typename T>
T checked_add(T a, T b) {
  T r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow("128-bit addition overflow");
  return r;
}

template <typename T>
T checked_mul(T a, T b) {
  T r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow("128-bit multiplication overflow");
  return r;
}

// ---------------------------------------------------------------------------
// Fibonacci conventions

// Three indexings of the same sequence 1,1,2,3,5,8,...
//   F12:       f1 = 1, f2 = 2        (canonical inside the library)
//   F01:       f0 = f1 = 1
//   Classical: f1 = f2 = 1
enum class FibConvention { F12, F01, Classical };

inline int smallest_index(FibConvention conv) {
  return conv == FibConvention::F01 ? 0 : 1;
}

// Offset to add to an index of `conv` to obtain the Classical index.
inline int classical_offset(FibConvention conv) {
  switch (conv) {
    case FibConvention::F12:
    case FibConvention::F01:
      return 1;
    case FibConvention::Classical:
      return 0;
  }
  return 0;
}

// Re-express index n of convention `from` as an index of convention `to`.
inline int convert_index(int n, FibConvention from, FibConvention to) {
  int m = n + classical_offset(from) - classical_offset(to);
  if (m < smallest_index(to)) {
    throw InvalidArgument("index " + std::to_string(n) + " has no counterpart in the target convention");
  }
  return m;
}

inline Natural fib(int n, FibConvention conv = FibConvention::F12) {
  if (n < smallest_index(conv)) {
    throw InvalidArgument("Fibonacci index " + std::to_string(n) + " below the convention's range");
  }
  int k = n + classical_offset(conv);  // classical index, k >= 1
  Natural a = 1, b = 1;                 // F_1, F_2
  for (int i = 1; i < k; ++i) {
    Natural c = checked_add(a, b);
    a = b;
    b = c;
  }
  return a;
}

// ---------------------------------------------------------------------------
// Splitting matrix

struct SplittingMatrix {
  std::vector<std::vector<Natural>> entries;
  std::vector<std::string> region_names;

  std::size_t dimension() const { return entries.size(); }
};

// Quarter Q (leading tile a 3-node) and strip R3 (leading tile a 2-node).
inline SplittingMatrix pentagrid_matrix() {
  return SplittingMatrix{{{2, 1}, {1, 1}}, {"Q", "R3"}};
}

inline void validate(const SplittingMatrix& m) {
  for (const auto& row : m.entries) {
    if (row.size() != m.dimension()) throw InvalidArgument("splitting matrix is not square");
  }
}

inline std::vector<std::vector<Natural>> multiply(const std::vector<std::vector<Natural>>& a,
                                                  const std::vector<std::vector<Natural>>& b) {
  std::size_t n = a.size();
  std::vector<std::vector<Natural>> c(n, std::vector<Natural>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] = checked_add(c[i][j], checked_mul(a[i][k], b[k][j]));
    }
  return c;
}

inline std::vector<std::vector<Natural>> matrix_power(const SplittingMatrix& m, unsigned exponent) {
  validate(m);
  std::size_t n = m.dimension();
  std::vector<std::vector<Natural>> result(n, std::vector<Natural>(n, 0));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = 1;
  auto base = m.entries;
  while (exponent > 0) {
    if (exponent & 1U) result = multiply(result, base);
    exponent >>= 1U;
    if (exponent > 0) base = multiply(base, base);
  }
  return result;
}

// Sum of row `row` (1-based) of M^exponent.
inline Natural matrix_power_row_sum(const SplittingMatrix& m, unsigned exponent, std::size_t row) {
  if (row < 1 || row > m.dimension()) {
    throw InvalidArgument("row " + std::to_string(row) + " outside a matrix of dimension " +
                          std::to_string(m.dimension()));
  }
  auto p = matrix_power(m, exponent);
  Natural s = 0;
  for (Natural v : p[row - 1]) s = checked_add(s, v);
  return s;
}

// ---------------------------------------------------------------------------
// Polynomials: integer coefficients, lowest degree first.

struct Polynomial {
  std::vector<Integer> coefficients;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  bool operator==(const Polynomial&) const = default;

  double evaluate(double x) const {
    double acc = 0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
      acc = acc * x + static_cast<double>(*it);
    }
    return acc;
  }

  std::string to_string() const {
    std::string out;
    for (int d = degree(); d >= 0; --d) {
      Integer c = coefficients[static_cast<std::size_t>(d)];
      if (c == 0) continue;
      Integer mag = c < 0 ? -c : c;
      if (out.empty()) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      if (mag != 1 || d == 0) out += fibgrid::to_string(mag);
      if (d >= 1) out += "X";
      if (d >= 2) out += "^" + std::to_string(d);
    }
    return out.empty() ? "0" : out;
  }
};

// Characteristic polynomial det(X·I − M) by the Faddeev–LeVerrier recurrence
// (every division is exact over the integers), divided by the largest power
// of X that divides it.
inline Polynomial char_polynomial(const SplittingMatrix& m) {
  validate(m);
  const std::size_t n = m.dimension();
  if (n == 0) return Polynomial{{1}};
  using Mat = std::vector<std::vector<Integer>>;
  Mat a(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = static_cast<Integer>(m.entries[i][j]);

  std::vector<Integer> c(n + 1, 0);
  c[n] = 1;
  Mat mk(n, std::vector<Integer>(n, 0));
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A·M_{k-1} + c_{n-k+1}·I
    Mat next(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (a[i][l] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] = checked_add(next[i][j], checked_mul(a[i][l], mk[l][j]));
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] = checked_add(next[i][i], c[n - k + 1]);
    mk = std::move(next);
    Integer trace = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) trace = checked_add(trace, checked_mul(a[i][l], mk[l][i]));
    c[n - k] = -trace / static_cast<Integer>(k);
  }
  std::size_t low = 0;
  while (low < n && c[low] == 0) ++low;
  return Polynomial{std::vector<Integer>(c.begin() + static_cast<std::ptrdiff_t>(low), c.end())};
}

// Largest real root, located by bisection inside the Cauchy bound.
inline double dominant_root(const Polynomial& poly) {
  if (poly.degree() < 1) throw InvalidArgument("constant polynomial has no root");
  double lead = static_cast<double>(poly.coefficients.back());
  double bound = 1;
  for (int d = 0; d < poly.degree(); ++d) {
    bound = std::max(bound, 1 + std::abs(static_cast<double>(poly.coefficients[static_cast<std::size_t>(d)]) / lead));
  }
  // Scan down from the bound for the first sign change, then bisect.
  const int steps = 1 << 16;
  double hi = bound, fhi = poly.evaluate(hi);
  for (int i = 1; i <= steps; ++i) {
    double lo = bound - 2 * bound * i / steps;
    double flo = poly.evaluate(lo);
    if (flo == 0) return lo;
    if ((flo < 0) != (fhi < 0)) {
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = poly.evaluate(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    hi = lo;
    fhi = flo;
  }
  throw InvalidArgument("polynomial has no real root");
}

// ---------------------------------------------------------------------------
// Level counts of the Fibonacci tree

// Status of a Fibonacci-tree node: its number of sons.
enum class NodeStatus : std::uint8_t { TwoNode = 2, ThreeNode = 3 };

// Number of nodes on level n of a Fibonacci tree whose root has the given
// status: f_{2n+1} (F12) under a 3-node root, the second row sum of M^n under
// a 2-node root.
inline Natural level_count(unsigned n, NodeStatus root) {
  if (root == NodeStatus::ThreeNode) return fib(static_cast<int>(2 * n + 1), FibConvention::F12);
  return matrix_power_row_sum(pentagrid_matrix(), n, 2);
}

// ---------------------------------------------------------------------------
// Standard Fibonacci (Zeckendorf) representation over 1, 2, 3, 5, 8, ...

class ZeckendorfWord {
 public:
  // Throws InvalidArgument on anything but a non-empty 0/1 word with a
  // leading 1 and no factor "11".
  static ZeckendorfWord parse(std::string_view bits) {
    if (bits.empty()) throw InvalidArgument("empty Zeckendorf word");
    if (bits.front() != '1') throw InvalidArgument("Zeckendorf word has a leading zero: " + std::string(bits));
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != '0' && bits[i] != '1') throw InvalidArgument("not a binary word: " + std::string(bits));
      if (i > 0 && bits[i] == '1' && bits[i - 1] == '1') {
        throw InvalidArgument("Zeckendorf word contains \"11\": " + std::string(bits));
      }
    }
    return ZeckendorfWord(std::string(bits));
  }

  const std::string& bits() const { return bits_; }
  std::size_t length() const { return bits_.size(); }

  bool operator==(const ZeckendorfWord&) const = default;

  // Length first, then lexicographic.
  std::strong_ordering operator<=>(const ZeckendorfWord& other) const {
    if (auto c = bits_.size() <=> other.bits_.size(); c != 0) return c;
    return bits_ <=> other.bits_;
  }

 private:
  explicit ZeckendorfWord(std::string bits) : bits_(std::move(bits)) {}
  std::string bits_;
};

// Greedy expansion; the result is the unique 11-free representation.
inline ZeckendorfWord zeck_encode(Natural n) {
  if (n == 0) throw InvalidArgument("Zeckendorf encoding needs n >= 1");
  std::vector<Natural> basis{1, 2};
  while (true) {
    Natural next;
    if (__builtin_add_overflow(basis[basis.size() - 1], basis[basis.size() - 2], &next) || next > n) break;
    basis.push_back(next);
  }
  while (basis.back() > n) basis.pop_back();
  std::string bits;
  Natural rest = n;
  for (auto it = basis.rbegin(); it != basis.rend(); ++it) {
    if (*it <= rest) {
      bits.push_back('1');
      rest -= *it;
    } else {
      bits.push_back('0');
    }
  }
  return ZeckendorfWord::parse(bits);
}

inline Natural zeck_decode(const ZeckendorfWord& word) {
  const std::string& bits = word.bits();
  Natural value = 0;
  Natural a = 1, b = 2;  // f_{i+1}, f_{i+2} for bit position i from the right
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[bits.size() - 1 - i] == '1') value = checked_add(value, a);
    if (i + 1 < bits.size()) {
      Natural c = checked_add(a, b);
      a = b;
      b = c;
    }
  }
  return value;
}

inline Natural zeck_decode(std::string_view bits) { return zeck_decode(ZeckendorfWord::parse(bits)); }

}  // namespace fibgrid
