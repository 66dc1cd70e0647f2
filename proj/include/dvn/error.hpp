// error.hpp -- exception types shared by every module.

#ifndef DVN_ERROR_HPP_
#define DVN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dvn {

/// Base of every domain error.  `kind()` is the short invariant name
/// (e.g. "IncoherentOutput"); `what()` is the full one-line diagnostic.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, std::string const& detail)
      : std::runtime_error(detail.empty() ? kind : kind + " " + detail),
        _kind(std::move(kind)) {}

  std::string const& kind() const noexcept { return _kind; }

 private:
  std::string _kind;
};

#define DVN_DEFINE_ERROR(Name)                              \
  class Name : public Error {                               \
   public:                                                  \
    explicit Name(std::string const& detail = "")           \
        : Error(#Name, detail) {}                           \
  };

DVN_DEFINE_ERROR(SignatureMismatch)
DVN_DEFINE_ERROR(InvalidWord)
DVN_DEFINE_ERROR(NotAPrefix)
DVN_DEFINE_ERROR(EmptySet)
DVN_DEFINE_ERROR(Overlap)
DVN_DEFINE_ERROR(Gap)
DVN_DEFINE_ERROR(InvalidTable)
DVN_DEFINE_ERROR(IncoherentTransition)
DVN_DEFINE_ERROR(IncoherentOutput)
DVN_DEFINE_ERROR(CapExceeded)
DVN_DEFINE_ERROR(PrefixViolation)
DVN_DEFINE_ERROR(NotSynchronizing)
DVN_DEFINE_ERROR(NotCore)
DVN_DEFINE_ERROR(BoundExceeded)
DVN_DEFINE_ERROR(InvalidExchange)
DVN_DEFINE_ERROR(SignatureObstruction)
DVN_DEFINE_ERROR(Inconsistent)
DVN_DEFINE_ERROR(DecompositionMismatch)
DVN_DEFINE_ERROR(NotInvertible)
DVN_DEFINE_ERROR(SpecTooLarge)
DVN_DEFINE_ERROR(ParseError)
DVN_DEFINE_ERROR(UnknownEntry)

#undef DVN_DEFINE_ERROR

}  // namespace dvn

#endif  // DVN_ERROR_HPP_
