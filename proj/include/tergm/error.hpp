#pragma once

#include <stdexcept>
#include <string>

namespace tergm {

// Base of every error the library raises. The category drives the CLI
// exit code: usage -> 1, data -> 2, numerical -> 3.
class Error : public std::runtime_error {
 public:
  enum class Category { usage, data, numerical };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(Category::usage, what) {}
};

// Malformed input, dimension mismatch, invariant violation in supplied data.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(Category::data, what) {}
};

// Parse failure with a 1-based line number (0 when the format has no useful
// line, e.g. a semantic error inside a JSON document).
class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : DataError(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A model or operation combination the requested path cannot handle, e.g. a
// non-factorized statistic passed to the exact-likelihood path.
class UnsupportedModelError : public Error {
 public:
  explicit UnsupportedModelError(const std::string& what) : Error(Category::usage, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(Category::numerical, what) {}
};

}  // namespace tergm
