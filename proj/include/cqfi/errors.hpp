#pragma once

#include <stdexcept>
#include <string>

namespace cqfi {

// Input violates a documented precondition (e.g. a non-Hermitian "density matrix").
class contract_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Requested dimension exceeds what the dense core supports (2^6).
class capacity_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed-form spectrum is degenerate; the caller should use the SLD path.
class degenerate_spectrum : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

// Measurement model does not produce a probability distribution.
class model_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cqfi
