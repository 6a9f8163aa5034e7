#pragma once

// Independent reference computations used to check the library. None of
// them go through Dhar's algorithm or the library's linear algebra.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "troplift/graph.hpp"

namespace oracle {

using Q = mpq_class;

// Inverse of a square rational matrix by Gauss-Jordan elimination.
inline std::vector<std::vector<Q>> inverse(std::vector<std::vector<Q>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Q>> inv(n, std::vector<Q>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (a[p][c] == 0) ++p;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Q piv = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Q f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

// Divisor classes on a connected graph via the lattice spanned by the
// Laplacian: D1 ~ D2 iff deg equal and the reduced Laplacian solution of
// L x = D1 - D2 (x(0) = 0) is integral.
class Jacobian {
 public:
  explicit Jacobian(const troplift::SubdividedGraph& sg) : n_(sg.vertex_count()) {
    if (n_ > 1) {
      std::vector<std::vector<Q>> lap(n_ - 1, std::vector<Q>(n_ - 1, 0));
      for (std::size_t u = 1; u < n_; ++u)
        for (std::size_t nb : sg.neighbours(u)) {
          lap[u - 1][u - 1] += 1;
          if (nb != 0) lap[u - 1][nb - 1] -= 1;
        }
      inv_ = inverse(lap);
    }
  }

  // Fractional parts of the reduced solution: a complete class invariant
  // within a fixed degree.
  std::vector<Q> key(const std::vector<long>& d) const {
    std::vector<Q> out;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      Q s = 0;
      for (std::size_t j = 0; j + 1 < n_; ++j) s += inv_[i][j] * d[j + 1];
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
      out.push_back(s - fl);
    }
    return out;
  }

  bool equivalent(const std::vector<long>& a, const std::vector<long>& b) const {
    return degree(a) == degree(b) && key(a) == key(b);
  }

  // Whether d is equivalent to an effective divisor, by exhausting the
  // effective divisors of its degree.
  bool effective_class(const std::vector<long>& d) {
    long k = degree(d);
    if (k < 0) return false;
    return classes(k).count(key(d)) > 0;
  }

  long rank(const std::vector<long>& d) {
    if (degree(d) < 0) return -1;
    for (long k = 0; k <= degree(d) + 1; ++k) {
      bool all = true;
      for_each_effective(k, [&](const std::vector<long>& e) {
        if (!all) return;
        std::vector<long> x(n_);
        for (std::size_t i = 0; i < n_; ++i) x[i] = d[i] - e[i];
        if (!effective_class(x)) all = false;
      });
      if (!all) return k - 1;
    }
    return degree(d);
  }

  template <class F>
  void for_each_effective(long k, F&& f) const {
    std::vector<long> e(n_, 0);
    auto rec = [&](auto&& self, std::size_t i, long left) -> void {
      if (i + 1 == n_) {
        e[i] = left;
        f(e);
        e[i] = 0;
        return;
      }
      for (long c = 0; c <= left; ++c) {
        e[i] = c;
        self(self, i + 1, left - c);
      }
      e[i] = 0;
    };
    rec(rec, 0, k);
  }

  static long degree(const std::vector<long>& d) { return std::accumulate(d.begin(), d.end(), 0L); }

 private:
  const std::set<std::vector<Q>>& classes(long k) {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    std::set<std::vector<Q>> s;
    for_each_effective(k, [&](const std::vector<long>& e) { s.insert(key(e)); });
    return cache_.emplace(k, std::move(s)).first->second;
  }

  std::size_t n_;
  std::vector<std::vector<Q>> inv_;
  std::map<long, std::set<std::vector<Q>>> cache_;
};

// Minimum over all integer relations sum x_i n_i = 0 (|x_i| <= lcm) with a
// unique positive entry x_j of sum_i floor(x_j n_j / n_i), minus one.
// Returns -1 when no such relation exists.
inline long dprime_brute_force(const std::vector<long>& n) {
  long l = 1;
  for (long x : n) l = std::lcm(l, x);
  long best = -1;
  std::vector<long> x(n.size(), 0);
  auto visit = [&] {
    long s = 0;
    int pos = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
      s += x[i] * n[i];
      if (x[i] > 0) {
        ++pos;
        j = i;
      }
    }
    if (s != 0 || pos != 1) return;
    long total = 0;
    for (std::size_t i = 0; i < n.size(); ++i) total += x[j] * n[j] / n[i];
    if (best < 0 || total - 1 < best) best = total - 1;
  };
  if (n.size() == 2) {
    for (x[0] = -l; x[0] <= l; ++x[0])
      for (x[1] = -l; x[1] <= l; ++x[1]) visit();
  } else if (n.size() == 3) {
    for (x[0] = -l; x[0] <= l; ++x[0])
      for (x[1] = -l; x[1] <= l; ++x[1]) {
        long r = -(x[0] * n[0] + x[1] * n[1]);
        if (r % n[2] != 0) continue;
        x[2] = r / n[2];
        if (x[2] < -l || x[2] > l) continue;
        visit();
      }
  }
  return best;
}

}  // namespace oracle
