#pragma once

#include <stdexcept>
#include <string>

namespace tqf {

// Bad caller input: malformed text, out-of-range arguments, violated preconditions.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class parse_error : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

// Odd cross coefficient, i.e. the Gram matrix is not integral.
class integrality_error : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

class definiteness_error : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

// m lies in the excluded set of the theorem entry being certified.
class excluded_input : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

// A bounded search ran past its ceiling (prime search, multiplier search).
class search_bound_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The witness construction failed: no rule, unsolvable congruence, wrong class.
class construction_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A witness coefficient does not fit in 64 bits.
class witness_overflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tqf
