#pragma once

#include <stdexcept>
#include <string>

namespace had {

// Violated precondition or invalid mathematical object (exit code 1 in the CLI).
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// File or store problem (exit code 2 in the CLI).
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace had
