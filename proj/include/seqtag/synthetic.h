#ifndef SEQTAG_SYNTHETIC_H_
#define SEQTAG_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "seqtag/corpus.h"
#include "seqtag/label_scheme.h"

namespace seqtag {

// Deterministic protocol-like corpus with gold BIO tags. Every entity type
// of the scheme appears at least once when n_docs >= scheme.num_types().
// Known wet-lab types get realistic phrases; other types get generated words.
std::vector<Document> generate_synthetic(std::uint64_t seed, std::size_t n_docs,
                                         const LabelScheme& scheme);

}  // namespace seqtag

#endif  // SEQTAG_SYNTHETIC_H_
