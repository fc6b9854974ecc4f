#pragma once

#include <stdexcept>
#include <string>

namespace xispectra {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define XISPECTRA_DEFINE_ERROR(NAME)                            \
  class NAME : public Error {                                   \
   public:                                                      \
    explicit NAME(const std::string& msg) : Error(msg) {}       \
  }

XISPECTRA_DEFINE_ERROR(PoleAtOne);
XISPECTRA_DEFINE_ERROR(PoleAtNonPositiveInteger);
XISPECTRA_DEFINE_ERROR(RangeExceeded);
XISPECTRA_DEFINE_ERROR(NearZeroOfZeta);
XISPECTRA_DEFINE_ERROR(StepTooCoarse);
XISPECTRA_DEFINE_ERROR(LostBracket);
XISPECTRA_DEFINE_ERROR(PathSingularity);
XISPECTRA_DEFINE_ERROR(DomainTooLow);
XISPECTRA_DEFINE_ERROR(EmptySample);
XISPECTRA_DEFINE_ERROR(UnsortedEdges);
XISPECTRA_DEFINE_ERROR(SlowConvergence);
XISPECTRA_DEFINE_ERROR(CapacityExceeded);
XISPECTRA_DEFINE_ERROR(TableTooShallow);
XISPECTRA_DEFINE_ERROR(TailTooLarge);
XISPECTRA_DEFINE_ERROR(ImaginaryResidue);
XISPECTRA_DEFINE_ERROR(InsufficientDecay);
XISPECTRA_DEFINE_ERROR(OutOfTableRange);
XISPECTRA_DEFINE_ERROR(LoadError);
XISPECTRA_DEFINE_ERROR(MismatchedOmega);

#undef XISPECTRA_DEFINE_ERROR

}  // namespace xispectra
