#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pwl {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1 - a^(n-1) d vanished, the closed-form cycle has no finite solution.
class SingularDenominator : public Error {
 public:
  SingularDenominator(double denominator, std::string what)
      : Error(std::move(what)), denominator_(denominator) {}
  double denominator() const noexcept { return denominator_; }

 private:
  double denominator_;
};

/// Computed periodic points do not carry the signs their symbols require.
class NotAdmissible : public Error {
 public:
  NotAdmissible(std::vector<double> xs, std::string what)
      : Error(std::move(what)), xs_(std::move(xs)) {}
  const std::vector<double>& xs() const noexcept { return xs_; }

 private:
  std::vector<double> xs_;
};

/// A linear part that must be invertible after subtracting I has an
/// eigenvalue (numerically) equal to one.
class EigenvalueOne : public Error {
 public:
  EigenvalueOne(double distance, std::string what)
      : Error(std::move(what)), distance_(distance) {}
  /// Smallest |lambda - 1| that was found.
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

class DegenerateOffset : public Error {
 public:
  using Error::Error;
};

/// Orbit left the finite box; step() is the iteration index where it happened.
class Divergence : public Error {
 public:
  Divergence(std::size_t step, std::string what)
      : Error(std::move(what)), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class SameRegion : public Error {
 public:
  using Error::Error;
};

class NotAdjacent : public Error {
 public:
  NotAdjacent(int hamming, std::string what)
      : Error(std::move(what)), hamming_(hamming) {}
  int hamming_distance() const noexcept { return hamming_; }

 private:
  int hamming_;
};

/// A PLRNN weight matrix breaks the partitioned structure the reduction
/// needs. entries() lists offending (row, column, value) triples, 0-based.
class StructureViolation : public Error {
 public:
  struct Entry {
    int row;
    int col;
    double value;
  };
  StructureViolation(std::vector<Entry> entries, std::string what)
      : Error(std::move(what)), entries_(std::move(entries)) {}
  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  std::vector<Entry> entries_;
};

}  // namespace pwl
