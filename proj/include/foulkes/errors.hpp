#pragma once

#include <stdexcept>
#include <string>

namespace foulkes {

// Basis construction gave up: either a dimension is wrong or the random
// draws are degenerate far beyond what genericity allows.
class RetryExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// p > p' with a <= b. This would contradict the Foulkes conjecture, so the
// driver refuses to continue silently.
class ConjectureWitness : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompleteCoverage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicateShard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

} // namespace foulkes
