// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace conelab {

enum class errc {
  ok = 0,
  invalid_argument,
  degenerate_form,
  even_modulus,
  principal_character,
  not_coprime,
  budget_exceeded,
  zero_dual,
  bad_extents,
  not_stabilized,
  insufficient_grid,
  asymmetric_weight,
  hypothesis_violated,
  config_invalid,
  internal,
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace conelab
