#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

#include "amapf/errors.hpp"

namespace amapf {

struct SearchCounters {
  std::uint64_t expansions = 0;
  std::uint64_t generated = 0;
};

// Wall-clock budget polled by the searches every 1024 expansions.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;
  static constexpr std::uint64_t kStride = 1024;

  Deadline() = default;
  explicit Deadline(std::chrono::duration<double> budget)
      : at_(Clock::now() + std::chrono::duration_cast<Clock::duration>(budget)) {}

  bool unlimited() const noexcept { return !at_; }
  bool expired() const { return at_ && Clock::now() >= *at_; }

  void poll(std::uint64_t expansions) const {
    if (at_ && expansions % kStride == 0 && Clock::now() >= *at_) throw TimeoutError("time limit exceeded");
  }

 private:
  std::optional<Clock::time_point> at_;
};

}  // namespace amapf
