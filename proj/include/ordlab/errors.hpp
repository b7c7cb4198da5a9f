#pragma once

#include <stdexcept>
#include <string>

namespace ordlab {

// Input text (term, s-expression, JSON file) could not be parsed.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& m) : std::runtime_error(m) {}
};

// A value fell outside an operation's domain (non-member code, exhausted
// stream, unpairable code, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};

// Two terms from incompatible notation systems (or atom sorts with no
// common order) were compared.
struct SortError : std::runtime_error {
  explicit SortError(const std::string& m) : std::runtime_error(m) {}
};

// No rewrite rule applies to a theory expression.
struct RewriteError : std::runtime_error {
  explicit RewriteError(const std::string& m) : std::runtime_error(m) {}
};

// An order has no closed-term rendering of its type.
struct RenderError : std::runtime_error {
  explicit RenderError(const std::string& m) : std::runtime_error(m) {}
};

// A term with free variables (or an uninstantiated placeholder) was
// evaluated.
struct EvalError : std::runtime_error {
  explicit EvalError(const std::string& m) : std::runtime_error(m) {}
};

// A descending-chain witness was invalid or exhausted too early.
struct WitnessError : std::runtime_error {
  explicit WitnessError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace ordlab
