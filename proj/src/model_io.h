#ifndef SEQTAG_SRC_MODEL_IO_H_
#define SEQTAG_SRC_MODEL_IO_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "seqtag/label_scheme.h"

namespace seqtag::model_io {

std::string format_real(double value);
void write_reals(std::ostream& out, std::span<const double> values);
void write_scheme(std::ostream& out, const LabelScheme& scheme);

// Line-oriented reader for model containers. Every failure is CorruptFile
// except a foreign seqtag magic line, which is VersionMismatch.
class Reader {
 public:
  Reader(std::istream& in, std::string_view magic);

  std::string line();
  // Reads `key <value>` and returns the value.
  std::string field(std::string_view key);
  std::size_t count(std::string_view key);
  long integer(std::string_view key);
  void reals(std::span<double> out);
  LabelScheme scheme();
  void expect_end();

  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
  bool past_header_ = false;
};

}  // namespace seqtag::model_io

#endif  // SEQTAG_SRC_MODEL_IO_H_
