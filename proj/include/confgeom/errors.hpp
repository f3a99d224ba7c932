#pragma once

#include <stdexcept>
#include <string>

namespace confgeom {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CONFGEOM_ERROR(Name, Base) \
  class Name : public Base {        \
   public:                          \
    using Base::Base;               \
  };

CONFGEOM_ERROR(DegenerateInput, Error)
CONFGEOM_ERROR(DegeneratePolygon, Error)
CONFGEOM_ERROR(TwoInfinite, DegenerateInput)
CONFGEOM_ERROR(InvalidDomain, Error)
CONFGEOM_ERROR(UnboundedDomain, Error)
CONFGEOM_ERROR(BadChart, Error)
CONFGEOM_ERROR(NewtonDivergence, Error)
CONFGEOM_ERROR(OutsideDomain, Error)
CONFGEOM_ERROR(Disconnected, Error)
CONFGEOM_ERROR(ConfigError, Error)
CONFGEOM_ERROR(NoCertificate, Error)
CONFGEOM_ERROR(DomainError, Error)
CONFGEOM_ERROR(SpecError, Error)
CONFGEOM_ERROR(NoExactFormula, Error)

#undef CONFGEOM_ERROR

}  // namespace confgeom
