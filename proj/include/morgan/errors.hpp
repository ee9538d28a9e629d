#pragma once

#include <stdexcept>
#include <string>

namespace morgan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MORGAN_DEFINE_ERROR(name)          \
  class name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  };

MORGAN_DEFINE_ERROR(ArithmeticError)
MORGAN_DEFINE_ERROR(ParseError)
MORGAN_DEFINE_ERROR(DimensionError)
MORGAN_DEFINE_ERROR(DegreeExceeded)
MORGAN_DEFINE_ERROR(SizeLimitExceeded)
MORGAN_DEFINE_ERROR(Inconsistent)
MORGAN_DEFINE_ERROR(MissingParameter)
MORGAN_DEFINE_ERROR(InvalidSystem)
MORGAN_DEFINE_ERROR(NotControllable)
MORGAN_DEFINE_ERROR(NotSolvable)
MORGAN_DEFINE_ERROR(SingularQ)
MORGAN_DEFINE_ERROR(SingularBstar)
MORGAN_DEFINE_ERROR(TargetDegreeMismatch)
MORGAN_DEFINE_ERROR(DegenerateNumerator)
MORGAN_DEFINE_ERROR(VerificationFailed)

#undef MORGAN_DEFINE_ERROR

}  // namespace morgan
