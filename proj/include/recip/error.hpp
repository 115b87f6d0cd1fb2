#pragma once

#include <stdexcept>
#include <string>

namespace recip {

enum class Errc {
  InvalidParameter,
  InvalidIsometry,
  InvalidClassification,
  InvalidConfiguration,
  NotLoxodromic,
  UnsupportedRegime,
  InvalidPotential,
  ResourceLimit,
  NumericFailure,
  Io,
};

const char *errcName(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc c, const std::string &what)
      : std::runtime_error(std::string(errcName(c)) + ": " + what), code_(c) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

} // namespace recip
