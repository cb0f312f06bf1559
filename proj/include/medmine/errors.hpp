#ifndef MEDMINE_ERRORS_HPP
#define MEDMINE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace medmine {

enum class ErrorCode {
  OffsetOutOfBounds,
  FragmentOverlap,
  SurfaceMismatch,
  InvalidSpanLabel,
  MalformedLine,
  MissingDocHeader,
  EmptyCorpus,
  BadChunkParams,
  LabelAbsent,
  DocMismatch,
  MissingDevReport,
  MissingLabel,
  EmptyReport,
  AllLabelsExcluded,
  LengthMismatch,
  TemplateMissingLabel,
  IoError,
  BadConfig,
};

const char* to_string(ErrorCode code);

/// All recoverable failures are reported through this exception.
/// `line()` is >= 1 for errors located in a line-based input, -1 otherwise.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message, long line = -1)
      : std::runtime_error(format_message(code, message, line)),
        code_(code),
        line_(line) {}

  ErrorCode code() const { return code_; }
  long line() const { return line_; }

private:
  static std::string format_message(ErrorCode code, const std::string& message, long line);

  ErrorCode code_;
  long line_;
};

}  // namespace medmine

#endif
