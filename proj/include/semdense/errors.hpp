#pragma once

#include <stdexcept>
#include <string>

namespace semdense {

// Base type for everything this library throws on bad input or bad state.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file or record; message carries the offending line when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

// A short code that has no entry in the active registry namespace.
class UndefinedCodeError : public Error {
 public:
  UndefinedCodeError(const std::string& ns, const std::string& code)
      : Error("undefined code '" + code + "' in namespace " + ns),
        ns_(ns),
        code_(code) {}

  const std::string& ns() const { return ns_; }
  const std::string& code() const { return code_; }

 private:
  std::string ns_;
  std::string code_;
};

}  // namespace semdense
