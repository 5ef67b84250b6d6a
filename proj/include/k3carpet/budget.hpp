#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "k3carpet/errors.hpp"

namespace k3 {

/// Wall-clock allowance shared by the long-running stages.
class Budget {
 public:
  using Clock = std::chrono::steady_clock;

  Budget() = default;
  static Budget unlimited() { return Budget(); }
  static Budget seconds(double s) {
    Budget b;
    b.deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(s));
    return b;
  }

  bool limited() const { return deadline_.has_value(); }
  bool expired() const { return deadline_ && Clock::now() > *deadline_; }

  void check(const char* stage) const {
    if (expired()) throw BudgetExceeded(std::string("budget exceeded during ") + stage);
  }

 private:
  std::optional<Clock::time_point> deadline_;
};

}  // namespace k3
