#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace conflat {

using LatticePoint = std::vector<int>;

// All m in Z^k with sup norm <= R, grouped by shell (shell s = points with
// sup norm exactly s). Within a shell, points come in adjacent (m, -m) pairs;
// shell 0 is the origin alone.
std::vector<std::vector<LatticePoint>> enumerate_shells(int k, int R);

// Half lattice Lambda_r: one representative of each {m, -m} pair of
// Z^r \ {0}, chosen so the last nonzero coordinate is positive; all points
// up to sup norm R, ordered by shell then lexicographically.
std::vector<LatticePoint> half_lattice(int r, int R);

// Compensated accumulator (Kahan). The canonical reduction order of every
// lattice sum and surface integral is: per-shell (per-chunk) partials
// accumulated with this, partials combined in shell (chunk) order, again
// compensated. Parallel evaluation reproduces the serial bits because both
// paths share that two-level scheme.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Enumerates one representative of each (m, -m) pair of the sup-norm-s shell
// of Z^k, s >= 1. Representatives have their first nonzero coordinate
// positive (prunable during generation) and are visited in lexicographic
// order. f receives a pointer to k ints. Used by the kernel lattice sums;
// the public enumerate_shells / half_lattice use the last-nonzero-positive
// representative instead.
template <typename F>
void for_each_shell_pair(int k, int s, F&& f) {
  std::array<int, 16> m{};
  // Depth-first over coordinates; "started" = first nonzero already placed
  // (and positive), "hit" = some coordinate already attained |.| == s.
  auto rec = [&](auto&& self, int depth, bool started, bool hit) -> void {
    if (depth == k - 1) {
      if (!started) {
        // all previous zero: last coordinate must be +s
        m[depth] = s;
        f(m.data());
        return;
      }
      if (hit) {
        for (int v = -s; v <= s; ++v) {
          m[depth] = v;
          f(m.data());
        }
      } else {
        m[depth] = -s;
        f(m.data());
        m[depth] = s;
        f(m.data());
      }
      return;
    }
    if (!started) {
      m[depth] = 0;
      self(self, depth + 1, false, hit);
      for (int v = 1; v <= s; ++v) {
        m[depth] = v;
        self(self, depth + 1, true, hit || v == s);
      }
    } else {
      for (int v = -s; v <= s; ++v) {
        m[depth] = v;
        self(self, depth + 1, true, hit || v == s || v == -s);
      }
    }
  };
  if (s < 1 || k < 1) return;
  rec(rec, 0, false, false);
}

}  // namespace conflat
