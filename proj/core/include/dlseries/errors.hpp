#pragma once

#include <stdexcept>
#include <string>

namespace dls {

// Bad user input: malformed config, invalid Cartan type, parameter with
// denominator divisible by p, and the like. CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A structural identity that is supposed to hold unconditionally failed
// (unique factorization W_L = W_L° ⋊ Ω_L, coinvariant/orbit bijection,
// component-group isomorphism, ...). CLI maps this to exit code 2 and the
// violated identity is named in `identity`.
class IdentityViolation : public std::runtime_error {
public:
  IdentityViolation(std::string identity_name, const std::string& detail)
      : std::runtime_error(identity_name + ": " + detail),
        identity(std::move(identity_name)) {}

  std::string identity;
};

}  // namespace dls
