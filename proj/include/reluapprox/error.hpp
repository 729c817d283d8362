#pragma once

#include <stdexcept>
#include <string>

namespace reluapprox {

// Wrong input arity or malformed point passed to an evaluator.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A network or network combinator received inconsistent structure.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Out-of-range scalar parameter (s <= 1, eps outside (0,1), ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of a function (e.g. |x| > M for a series).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Sampled or supplied data is unusable (non-finite samples, zero density).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejection sampling could not proceed with the given envelope.
class EnvelopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request too large to carry out at desk scale (grid size, dimension).
class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed spec string, file or JSON document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reluapprox
