#pragma once

#include <stdexcept>
#include <string>

namespace decomp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No closed-form summability rule for an atom/region combination.
struct UnsupportedWeight : Error {
  using Error::Error;
};

struct UnsupportedGeometry : Error {
  using Error::Error;
};

struct WindowOverflow : Error {
  using Error::Error;
};

struct InvalidParams : Error {
  using Error::Error;
};

struct InvalidQuery : Error {
  using Error::Error;
};

struct ModerationUnknown : Error {
  using Error::Error;
};

struct MissingTightnessWitness : Error {
  using Error::Error;
};

struct SchemaError : Error {
  using Error::Error;
};

}  // namespace decomp
