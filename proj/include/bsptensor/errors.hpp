#pragma once

#include <stdexcept>
#include <string>

namespace bsptensor {

// A Require clause of a constructor or builder was violated (bad sizes,
// divisibility, empty factor lists, guard overflows).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A processor or array index is outside its declared range.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Data handed to the engine does not match the algorithm's declared contract
// (wrong distribution, wrong local shape at a superstep boundary).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A communication superstep is not a permutation of the distributed index set
// (duplicate destination, uncovered destination, destination out of range).
class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Superstep structures that cannot be combined or embedded.
class StructureError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bsptensor
