#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xmr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input. Carries the 1-based line and the byte offset of the
/// failure within the file when they are known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t byte_offset = 0)
      : Error(what), line_(line), byte_offset_(byte_offset) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t line_;
  std::size_t byte_offset_;
};

#define XMR_DEFINE_ERROR(Name)     \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

XMR_DEFINE_ERROR(DimensionError);
XMR_DEFINE_ERROR(DuplicateIdError);
XMR_DEFINE_ERROR(StructureError);
XMR_DEFINE_ERROR(JoinError);
XMR_DEFINE_ERROR(EmptyInputError);
XMR_DEFINE_ERROR(OriginError);
XMR_DEFINE_ERROR(DomainError);
XMR_DEFINE_ERROR(GuardError);
XMR_DEFINE_ERROR(ClosureError);
XMR_DEFINE_ERROR(IncompatibleStoreError);
XMR_DEFINE_ERROR(RemapRequiredError);
XMR_DEFINE_ERROR(FormatVersionError);
XMR_DEFINE_ERROR(InvariantError);
XMR_DEFINE_ERROR(ArityError);
XMR_DEFINE_ERROR(AlignmentError);
XMR_DEFINE_ERROR(BoundsError);
XMR_DEFINE_ERROR(IoError);

#undef XMR_DEFINE_ERROR

}  // namespace xmr
