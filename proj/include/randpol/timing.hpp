#ifndef RANDPOL_TIMING_HPP_
#define RANDPOL_TIMING_HPP_

#include <chrono>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace randpol {

// Monotonic section timer with nesting checks. begin/end pairs must match
// like parentheses; totals accumulate per section name across repeats.
class TimingProbe {
 public:
  using Clock = std::chrono::steady_clock;

  void begin(const std::string& section) {
    stack_.push_back({section, Clock::now()});
  }

  // returns the duration of the span just closed, in seconds
  double end(const std::string& section) {
    if (stack_.empty()) {
      throw std::logic_error("TimingProbe::end('" + section + "') without matching begin");
    }
    if (stack_.back().name != section) {
      throw std::logic_error("TimingProbe: unbalanced nesting, expected end('" +
                             stack_.back().name + "'), got end('" + section + "')");
    }
    const double dt = std::chrono::duration<double>(Clock::now() - stack_.back().start).count();
    stack_.pop_back();
    totals_[section] += dt;
    counts_[section] += 1;
    return dt;
  }

  double total(const std::string& section) const {
    auto it = totals_.find(section);
    return it == totals_.end() ? 0.0 : it->second;
  }

  std::int64_t count(const std::string& section) const {
    auto it = counts_.find(section);
    return it == counts_.end() ? 0 : it->second;
  }

  bool balanced() const { return stack_.empty(); }

  // RAII span
  class Scoped {
   public:
    Scoped(TimingProbe& probe, std::string section)
        : probe_(probe), section_(std::move(section)) {
      probe_.begin(section_);
    }
    ~Scoped() { probe_.end(section_); }
    Scoped(const Scoped&) = delete;
    Scoped& operator=(const Scoped&) = delete;

   private:
    TimingProbe& probe_;
    std::string section_;
  };

 private:
  struct Frame {
    std::string name;
    Clock::time_point start;
  };
  std::vector<Frame> stack_;
  std::map<std::string, double> totals_;
  std::map<std::string, std::int64_t> counts_;
};

}  // namespace randpol

#endif  // RANDPOL_TIMING_HPP_
