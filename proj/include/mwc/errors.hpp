#pragma once

#include <stdexcept>
#include <string>

namespace mwc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter point outside the chart domain (zero torus coordinate, wrong block size).
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotInGroupError : public Error {
 public:
  using Error::Error;
};

/// Target lies on the closed set where a birational inverse formula is undefined.
class ExcludedLocusError : public Error {
 public:
  using Error::Error;
};

class LeadingMinorError : public ExcludedLocusError {
 public:
  LeadingMinorError(int index, const std::string& what)
      : ExcludedLocusError(what), index_(index) {}
  /// 1-based index of the first vanishing leading principal minor.
  int index() const { return index_; }

 private:
  int index_;
};

class RetriesExhaustedError : public Error {
 public:
  using Error::Error;
};

class TrackingFailure : public Error {
 public:
  TrackingFailure(double t, const std::string& what) : Error(what), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

}  // namespace mwc
