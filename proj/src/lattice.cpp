#include "conflat/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace conflat {

namespace {

// Last nonzero coordinate of m is positive.
bool is_half_representative(const LatticePoint& m) {
  for (int i = static_cast<int>(m.size()) - 1; i >= 0; --i) {
    if (m[i] != 0) return m[i] > 0;
  }
  return false;  // origin
}

int sup_norm(const LatticePoint& m) {
  int s = 0;
  for (int v : m) s = std::max(s, std::abs(v));
  return s;
}

// All points of the sup-norm-s shell with last nonzero coordinate positive,
// lexicographic order.
std::vector<LatticePoint> shell_representatives(int k, int s) {
  std::vector<LatticePoint> out;
  LatticePoint m(k, -s);
  while (true) {
    if (sup_norm(m) == s && is_half_representative(m)) out.push_back(m);
    int i = k - 1;
    while (i >= 0 && m[i] == s) m[i--] = -s;
    if (i < 0) break;
    ++m[i];
  }
  return out;
}

}  // namespace

std::vector<std::vector<LatticePoint>> enumerate_shells(int k, int R) {
  if (k < 1) throw std::invalid_argument("enumerate_shells: k must be >= 1");
  if (R < 0) throw std::invalid_argument("enumerate_shells: R must be >= 0");
  std::vector<std::vector<LatticePoint>> shells;
  shells.reserve(R + 1);
  shells.push_back({LatticePoint(k, 0)});
  for (int s = 1; s <= R; ++s) {
    std::vector<LatticePoint> shell;
    for (const LatticePoint& rep : shell_representatives(k, s)) {
      shell.push_back(rep);
      LatticePoint neg(rep);
      for (int& v : neg) v = -v;
      shell.push_back(std::move(neg));
    }
    shells.push_back(std::move(shell));
  }
  return shells;
}

std::vector<LatticePoint> half_lattice(int r, int R) {
  if (r < 1) throw std::invalid_argument("half_lattice: r must be >= 1");
  std::vector<LatticePoint> out;
  for (int s = 1; s <= R; ++s) {
    auto reps = shell_representatives(r, s);
    out.insert(out.end(), reps.begin(), reps.end());
  }
  return out;
}

}  // namespace conflat
