#ifndef SEQTAG_LATTICE_H_
#define SEQTAG_LATTICE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "seqtag/label_scheme.h"
#include "seqtag/matrix.h"

namespace seqtag {

// Label-pair scores plus sentence-begin and sentence-end scores.
struct Transitions {
  Matrix pair;  // pair(from, to)
  std::vector<double> begin;
  std::vector<double> end;

  Transitions() = default;
  explicit Transitions(std::size_t labels)
      : pair(labels, labels), begin(labels, 0.0), end(labels, 0.0) {}

  std::size_t labels() const { return begin.size(); }
  bool operator==(const Transitions&) const = default;
};

// Per-position emission scores over shared transitions. The transitions
// must outlive the lattice.
struct Lattice {
  Matrix emissions;  // (position, label)
  const Transitions* transitions = nullptr;

  std::size_t length() const { return emissions.rows(); }
  std::size_t labels() const { return emissions.cols(); }
};

// Hard decoding constraints: forbidden transitions score -inf.
struct TransitionMask {
  std::size_t labels = 0;
  std::vector<char> allowed;        // labels x labels, row = from
  std::vector<char> begin_allowed;  // labels

  bool allows(std::size_t from, std::size_t to) const { return allowed[from * labels + to] != 0; }
  bool allows_begin(std::size_t label) const { return begin_allowed[label] != 0; }
  std::size_t forbidden_transitions() const;
  std::size_t forbidden_begins() const;
};

// BIO constraints: no sentence may start with I-X and I-X may only follow
// B-X or I-X.
TransitionMask transition_mask(const LabelScheme& scheme);

// Sum of begin, emission, transition and end scores along `tags`.
double path_score(const Lattice& lattice, std::span<const int> tags);

// log of the summed exp(path score) over every allowed path, by the forward
// recursion in log space. Throws kAllPathsMasked, kDimensionMismatch.
double log_partition(const Lattice& lattice, const TransitionMask* mask = nullptr);

struct Marginals {
  Matrix unary;                 // (position, label)
  std::vector<Matrix> pairwise; // length-1 matrices of (from, to) at positions t, t+1
  double log_partition = 0.0;
};

Marginals posterior_marginals(const Lattice& lattice, const TransitionMask* mask = nullptr);

struct DecodeResult {
  std::vector<int> tags;
  double score = 0.0;
};

// Highest-scoring allowed path. Ties go to the lower label index, both for
// the final label and at every backpointer.
DecodeResult viterbi_decode(const Lattice& lattice, const TransitionMask* mask = nullptr);

}  // namespace seqtag

#endif  // SEQTAG_LATTICE_H_
