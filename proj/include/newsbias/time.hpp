#pragma once

#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace newsbias {

/// UTC instant at millisecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses the W3C datetime profile used by sitemaps. A full date is the
/// minimum; offsets are folded into UTC and a missing offset means UTC.
std::optional<Timestamp> parse_w3c_datetime(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`, with `.mmm` only when non-zero.
std::string format_timestamp(Timestamp t);

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() const = 0;
  virtual void sleep_until(Timestamp t) = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() const override;
  void sleep_until(Timestamp t) override;
};

/// Test clock: time only moves when asked, and sleeping jumps straight to the
/// wake-up time.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Timestamp start = Timestamp{}) : now_(start) {}

  Timestamp now() const override {
    std::lock_guard lock(mu_);
    return now_;
  }
  void sleep_until(Timestamp t) override {
    std::lock_guard lock(mu_);
    if (t > now_) now_ = t;
  }
  void advance(std::chrono::milliseconds d) {
    std::lock_guard lock(mu_);
    now_ += d;
  }

 private:
  mutable std::mutex mu_;
  Timestamp now_;
};

}  // namespace newsbias
