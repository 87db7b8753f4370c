#pragma once

#include <stdexcept>
#include <string>

namespace psimax {

enum class Errc {
  invalid_argument = 1,
  degenerate_input,
  insufficient_geometry,
  domain,
  undefined_conditional,
  undefined_correlation,
  io,
  config,
  schema,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace psimax
