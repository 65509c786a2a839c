#pragma once

#include <stdexcept>
#include <string>

namespace trank {

/// Shapes or lengths that do not fit together.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Two operands live over different fields.
class FieldMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The operation is only defined (or only decidable) over some fields.
class UnsupportedField : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A precondition on values (not shapes) failed.
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace trank
