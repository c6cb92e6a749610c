#pragma once

#include <stdexcept>
#include <string>

namespace qcg {

// Base of everything the library throws for a violated precondition or a
// numerical failure. Callers that only care about "did it work" catch this.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class ConvexityError : public Error {
public:
  using Error::Error;
};

class NotPsdError : public Error {
public:
  using Error::Error;
};

class TailError : public Error {
public:
  using Error::Error;
};

class SingularityError : public Error {
public:
  using Error::Error;
};

class NoOppositeChargeError : public Error {
public:
  using Error::Error;
};

class ShapeError : public Error {
public:
  using Error::Error;
};

class ResolutionError : public Error {
public:
  using Error::Error;
};

class SupportError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string &what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

private:
  double last_residual_;
};

class TruncationError : public Error {
public:
  using Error::Error;
};

class BasisError : public Error {
public:
  using Error::Error;
};

class DegenerateError : public Error {
public:
  using Error::Error;
};

} // namespace qcg
