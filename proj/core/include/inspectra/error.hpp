#pragma once

#include <stdexcept>
#include <string>

namespace inspectra {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimension : public Error {
 public:
  explicit UnsupportedDimension(int dim)
      : Error("unsupported dimension " + std::to_string(dim)), dim_(dim) {}
  int dim() const noexcept { return dim_; }

 private:
  int dim_;
};

/// Input points do not span the ambient space.
class DegenerateHull : public Error {
 public:
  DegenerateHull(int rank, int dim)
      : Error("degenerate hull: affine rank " + std::to_string(rank) + " < " +
              std::to_string(dim)),
        rank_(rank) {}
  int rank() const noexcept { return rank_; }

 private:
  int rank_;
};

/// Facet list bounds an empty or unbounded region.
class MalformedHull : public Error {
 public:
  using Error::Error;
};

class OriginNotInterior : public Error {
 public:
  explicit OriginNotInterior(double value)
      : Error("origin is not interior to the hull (support minimum " +
              std::to_string(value) + ")"),
        value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

}  // namespace inspectra
