#include "seqtag/lattice.h"

#include <cmath>
#include <limits>
#include <string>

#include "seqtag/error.h"

namespace seqtag {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check(const Lattice& lattice, const TransitionMask* mask) {
  if (lattice.transitions == nullptr) {
    throw Error(ErrorCode::kDimensionMismatch, "lattice has no transitions");
  }
  if (lattice.length() == 0) throw Error(ErrorCode::kDimensionMismatch, "empty lattice");
  const auto& tr = *lattice.transitions;
  const std::size_t labels = lattice.labels();
  if (tr.labels() != labels || tr.end.size() != labels || tr.pair.rows() != labels ||
      tr.pair.cols() != labels) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lattice has " + std::to_string(labels) + " labels, transitions " +
                    std::to_string(tr.labels()));
  }
  if (mask != nullptr && mask->labels != labels) {
    throw Error(ErrorCode::kDimensionMismatch, "mask label count differs from lattice");
  }
}

double begin_score(const Lattice& lattice, const TransitionMask* mask, std::size_t y) {
  if (mask != nullptr && !mask->allows_begin(y)) return kNegInf;
  return lattice.transitions->begin[y];
}

double pair_score(const Lattice& lattice, const TransitionMask* mask, std::size_t from,
                  std::size_t to) {
  if (mask != nullptr && !mask->allows(from, to)) return kNegInf;
  return lattice.transitions->pair(from, to);
}

double log_sum_exp(std::span<const double> xs) {
  double peak = kNegInf;
  for (double x : xs) peak = std::max(peak, x);
  if (peak == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - peak);
  return peak + std::log(sum);
}

// alpha(t, y): log score of all prefixes ending in y at t, emission included.
Matrix forward(const Lattice& lattice, const TransitionMask* mask) {
  const std::size_t n = lattice.length();
  const std::size_t labels = lattice.labels();
  Matrix alpha(n, labels);
  for (std::size_t y = 0; y < labels; ++y) {
    alpha(0, y) = begin_score(lattice, mask, y) + lattice.emissions(0, y);
  }
  std::vector<double> terms(labels);
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < labels; ++y) {
      for (std::size_t x = 0; x < labels; ++x) {
        terms[x] = alpha(t - 1, x) + pair_score(lattice, mask, x, y);
      }
      alpha(t, y) = log_sum_exp(terms) + lattice.emissions(t, y);
    }
  }
  return alpha;
}

// beta(t, y): log score of all suffixes after t given y at t, end score included.
Matrix backward(const Lattice& lattice, const TransitionMask* mask) {
  const std::size_t n = lattice.length();
  const std::size_t labels = lattice.labels();
  Matrix beta(n, labels);
  for (std::size_t y = 0; y < labels; ++y) beta(n - 1, y) = lattice.transitions->end[y];
  std::vector<double> terms(labels);
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t x = 0; x < labels; ++x) {
      for (std::size_t y = 0; y < labels; ++y) {
        terms[y] = pair_score(lattice, mask, x, y) + lattice.emissions(t + 1, y) + beta(t + 1, y);
      }
      beta(t, x) = log_sum_exp(terms);
    }
  }
  return beta;
}

double finish(const Lattice& lattice, const Matrix& alpha) {
  const std::size_t labels = lattice.labels();
  std::vector<double> terms(labels);
  for (std::size_t y = 0; y < labels; ++y) {
    terms[y] = alpha(lattice.length() - 1, y) + lattice.transitions->end[y];
  }
  const double log_z = log_sum_exp(terms);
  if (log_z == kNegInf) throw Error(ErrorCode::kAllPathsMasked, "no allowed label path");
  return log_z;
}

}  // namespace

std::size_t TransitionMask::forbidden_transitions() const {
  std::size_t n = 0;
  for (char a : allowed) n += a == 0;
  return n;
}

std::size_t TransitionMask::forbidden_begins() const {
  std::size_t n = 0;
  for (char a : begin_allowed) n += a == 0;
  return n;
}

TransitionMask transition_mask(const LabelScheme& scheme) {
  const std::size_t labels = scheme.num_tags();
  TransitionMask mask;
  mask.labels = labels;
  mask.allowed.assign(labels * labels, 1);
  mask.begin_allowed.assign(labels, 1);
  for (std::size_t to = 0; to < labels; ++to) {
    const int tag = static_cast<int>(to);
    if (!LabelScheme::is_inside(tag)) continue;
    mask.begin_allowed[to] = 0;
    const int type = LabelScheme::type_of(tag);
    for (std::size_t from = 0; from < labels; ++from) {
      if (LabelScheme::type_of(static_cast<int>(from)) != type) mask.allowed[from * labels + to] = 0;
    }
  }
  return mask;
}

double path_score(const Lattice& lattice, std::span<const int> tags) {
  check(lattice, nullptr);
  if (tags.size() != lattice.length()) {
    throw Error(ErrorCode::kDimensionMismatch, "path length differs from lattice");
  }
  const auto& tr = *lattice.transitions;
  double score = tr.begin[tags[0]];
  for (std::size_t t = 0; t < tags.size(); ++t) {
    score += lattice.emissions(t, tags[t]);
    if (t > 0) score += tr.pair(tags[t - 1], tags[t]);
  }
  return score + tr.end[tags.back()];
}

double log_partition(const Lattice& lattice, const TransitionMask* mask) {
  check(lattice, mask);
  return finish(lattice, forward(lattice, mask));
}

Marginals posterior_marginals(const Lattice& lattice, const TransitionMask* mask) {
  check(lattice, mask);
  const std::size_t n = lattice.length();
  const std::size_t labels = lattice.labels();
  const Matrix alpha = forward(lattice, mask);
  const Matrix beta = backward(lattice, mask);
  Marginals out;
  out.log_partition = finish(lattice, alpha);
  out.unary = Matrix(n, labels);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t y = 0; y < labels; ++y) {
      out.unary(t, y) = std::exp(alpha(t, y) + beta(t, y) - out.log_partition);
    }
  }
  out.pairwise.reserve(n - 1);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    Matrix p(labels, labels);
    for (std::size_t x = 0; x < labels; ++x) {
      for (std::size_t y = 0; y < labels; ++y) {
        p(x, y) = std::exp(alpha(t, x) + pair_score(lattice, mask, x, y) +
                           lattice.emissions(t + 1, y) + beta(t + 1, y) - out.log_partition);
      }
    }
    out.pairwise.push_back(std::move(p));
  }
  return out;
}

DecodeResult viterbi_decode(const Lattice& lattice, const TransitionMask* mask) {
  check(lattice, mask);
  const std::size_t n = lattice.length();
  const std::size_t labels = lattice.labels();
  Matrix delta(n, labels);
  std::vector<int> backpointer(n * labels, 0);
  for (std::size_t y = 0; y < labels; ++y) {
    delta(0, y) = begin_score(lattice, mask, y) + lattice.emissions(0, y);
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t y = 0; y < labels; ++y) {
      double best = kNegInf;
      int arg = 0;
      for (std::size_t x = 0; x < labels; ++x) {
        const double s = delta(t - 1, x) + pair_score(lattice, mask, x, y);
        if (s > best) {
          best = s;
          arg = static_cast<int>(x);
        }
      }
      delta(t, y) = best + lattice.emissions(t, y);
      backpointer[t * labels + y] = arg;
    }
  }
  double best = kNegInf;
  int last = 0;
  for (std::size_t y = 0; y < labels; ++y) {
    const double s = delta(n - 1, y) + lattice.transitions->end[y];
    if (s > best) {
      best = s;
      last = static_cast<int>(y);
    }
  }
  if (best == kNegInf) throw Error(ErrorCode::kAllPathsMasked, "no allowed label path");
  DecodeResult result;
  result.score = best;
  result.tags.resize(n);
  result.tags[n - 1] = last;
  for (std::size_t t = n - 1; t > 0; --t) {
    result.tags[t - 1] = backpointer[t * labels + static_cast<std::size_t>(result.tags[t])];
  }
  return result;
}

}  // namespace seqtag
