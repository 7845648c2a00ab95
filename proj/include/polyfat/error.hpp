#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Core>

namespace polyfat {

// Exceptions signal contract violations (bad input, infeasible requests).
// Expected algorithmic outcomes such as a Perceptron running out of updates
// are returned through Result<T> instead.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(got)) {}
};

struct DomainError : Error {
  using Error::Error;
};

struct NetOverflow : Error {
  using Error::Error;
};

struct CombinatorialBlowup : Error {
  using Error::Error;
};

struct ProjectionFailure : Error {
  ProjectionFailure(std::string what, Eigen::VectorXd best)
      : Error(std::move(what)), best_iterate(std::move(best)) {}
  Eigen::VectorXd best_iterate;
};

enum class FailureKind {
  UpdatesExhausted,  // perceptron budget spent
  NoProgress,        // greedy step removed nothing
  IterationCap,      // greedy cap reached
  NotFound,          // exhaustive search found nothing
};

inline const char* to_string(FailureKind k) {
  switch (k) {
    case FailureKind::UpdatesExhausted: return "updates_exhausted";
    case FailureKind::NoProgress: return "no_progress";
    case FailureKind::IterationCap: return "iteration_cap";
    case FailureKind::NotFound: return "not_found";
  }
  return "unknown";
}

struct Failure {
  FailureKind kind;
  std::string detail;
};

template <class T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}          // NOLINT
  Result(Failure failure) : v_(std::move(failure)) {}  // NOLINT

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw Error(std::string("Result holds failure: ") + to_string(failure().kind));
    return std::get<T>(v_);
  }
  T&& value() && {
    if (!ok()) throw Error(std::string("Result holds failure: ") + to_string(failure().kind));
    return std::get<T>(std::move(v_));
  }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const Failure& failure() const { return std::get<Failure>(v_); }

 private:
  std::variant<T, Failure> v_;
};

}  // namespace polyfat
