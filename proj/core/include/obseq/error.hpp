#pragma once

#include <stdexcept>
#include <string>

namespace obseq {

/// Base of every error raised by the library. Each subclass names one
/// failure mode so callers (and the CLI) can react to it specifically.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define OBSEQ_DEFINE_ERROR(Name)         \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

// Point lies on the excluded dyadic grid (measure zero); resample.
OBSEQ_DEFINE_ERROR(ExcludedSet);
// Not enough known bits to perform the requested exact operation.
OBSEQ_DEFINE_ERROR(WidthExceeded);
OBSEQ_DEFINE_ERROR(NoCell);
OBSEQ_DEFINE_ERROR(InvalidPartition);
OBSEQ_DEFINE_ERROR(ResourceLimit);
OBSEQ_DEFINE_ERROR(BadDistribution);
OBSEQ_DEFINE_ERROR(NoReturn);
OBSEQ_DEFINE_ERROR(TooShort);
OBSEQ_DEFINE_ERROR(WindowExhausted);
OBSEQ_DEFINE_ERROR(NotStationary);
OBSEQ_DEFINE_ERROR(InvalidArgument);
OBSEQ_DEFINE_ERROR(ParseError);

#undef OBSEQ_DEFINE_ERROR

}  // namespace obseq
