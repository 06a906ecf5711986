// Test-only reference implementations. Nothing here shares code with the
// library's dynamic programs.
#ifndef SEQTAG_TESTS_ORACLES_H_
#define SEQTAG_TESTS_ORACLES_H_

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "seqtag/lattice.h"
#include "seqtag/matrix.h"

namespace oracle {

using seqtag::Matrix;

struct Enumeration {
  bool any_path = false;
  double log_z = -std::numeric_limits<double>::infinity();
  Matrix unary;
  std::vector<Matrix> pairwise;
  std::vector<int> best;
  double best_score = -std::numeric_limits<double>::infinity();
};

inline bool path_allowed(const std::vector<int>& path, const seqtag::TransitionMask* mask) {
  if (mask == nullptr) return true;
  if (!mask->begin_allowed[path[0]]) return false;
  for (std::size_t t = 1; t < path.size(); ++t) {
    if (!mask->allowed[path[t - 1] * mask->labels + path[t]]) return false;
  }
  return true;
}

inline double score_path(const Matrix& emissions, const seqtag::Transitions& tr,
                         const std::vector<int>& path) {
  double s = 0.0;
  for (std::size_t t = 0; t < path.size(); ++t) s += emissions(t, path[t]);
  for (std::size_t t = 1; t < path.size(); ++t) s += tr.pair(path[t - 1], path[t]);
  return s + tr.begin[path.front()] + tr.end[path.back()];
}

// Calls f on every label sequence of length n over `labels` labels, in
// lexicographic order.
inline void for_each_path(std::size_t n, std::size_t labels,
                          const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> path(n, 0);
  while (true) {
    f(path);
    std::size_t t = n;
    while (t > 0) {
      --t;
      if (++path[t] < static_cast<int>(labels)) break;
      path[t] = 0;
      if (t == 0) return;
    }
    if (n == 0) return;
  }
}

// Reverse-lexicographic comparison: compares from the last position back.
inline bool reverse_less(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t t = a.size(); t-- > 0;) {
    if (a[t] != b[t]) return a[t] < b[t];
  }
  return false;
}

inline Enumeration enumerate(const Matrix& emissions, const seqtag::Transitions& tr,
                             const seqtag::TransitionMask* mask = nullptr) {
  const std::size_t n = emissions.rows();
  const std::size_t labels = emissions.cols();
  Enumeration out;
  std::vector<std::pair<std::vector<int>, double>> paths;
  for_each_path(n, labels, [&](const std::vector<int>& path) {
    if (!path_allowed(path, mask)) return;
    const double s = score_path(emissions, tr, path);
    paths.emplace_back(path, s);
    // Lowest-index backpointers select the reverse-lexicographically
    // smallest of the tied best paths.
    if (!out.any_path || s > out.best_score || (s == out.best_score && reverse_less(path, out.best))) {
      out.best = path;
      out.best_score = s;
    }
    out.any_path = true;
  });
  if (!out.any_path) return out;
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& [path, s] : paths) peak = std::max(peak, s);
  long double sum = 0.0L;
  for (const auto& [path, s] : paths) sum += std::exp(static_cast<long double>(s - peak));
  out.log_z = peak + static_cast<double>(std::log(sum));
  out.unary = Matrix(n, labels);
  out.pairwise.assign(n > 0 ? n - 1 : 0, Matrix(labels, labels));
  for (const auto& [path, s] : paths) {
    const double p = std::exp(s - out.log_z);
    for (std::size_t t = 0; t < n; ++t) {
      out.unary(t, path[t]) += p;
      if (t + 1 < n) out.pairwise[t](path[t], path[t + 1]) += p;
    }
  }
  return out;
}

// Central finite difference of f at coordinate `x` (restored afterwards).
inline double central_difference(const std::function<double()>& f, double& x, double h) {
  const double saved = x;
  x = saved + h;
  const double up = f();
  x = saved - h;
  const double down = f();
  x = saved;
  return (up - down) / (2.0 * h);
}

// |a - b| relative to the larger magnitude, with an absolute floor for
// coordinates whose true derivative is (near) zero.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), floor});
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace oracle

#endif  // SEQTAG_TESTS_ORACLES_H_
