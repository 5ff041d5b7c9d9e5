#include "cpm/demo_log.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cpm/error.hpp"

namespace cpm {
namespace {

using std::chrono::hours;
using std::chrono::minutes;

// Engine output is specified by the standard; the std distributions are
// not, so sampling is done by hand to keep logs identical across platforms.
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform() * static_cast<double>(hi - lo + 1));
  }
  template <typename T, std::size_t N>
  const T& pick(const std::array<T, N>& items) {
    return items[static_cast<std::size_t>(uniform() * N)];
  }

private:
  std::mt19937_64 engine_;
};

constexpr std::array<const char*, 4> kNurses = {"nurse-01", "nurse-02", "nurse-03", "nurse-04"};
constexpr std::array<const char*, 3> kPhysicians = {"dr-ahmed", "dr-berg", "dr-costa"};
constexpr std::array<const char*, 2> kIntensivists = {"icu-team-a", "icu-team-b"};
constexpr std::array<const char*, 2> kLab = {"lab-1", "lab-2"};

Timestamp instant(int y, unsigned m, unsigned d) {
  using namespace std::chrono;
  return time_point_cast<Millis>(sys_days{year{y} / month{m} / day{d}});
}

class CaseBuilder {
public:
  CaseBuilder(Sampler& rng, Timestamp start) : rng_(rng), clock_(start) {}

  // Advances the clock by a random delay in [lo, hi] minutes (occasionally
  // zero, which yields equal timestamps) and records the event.
  void step(const char* activity, std::int64_t lo_min, std::int64_t hi_min, const char* resource) {
    if (!events_.empty()) {
      if (rng_.chance(0.03)) {
        // same instant as the previous event
      } else {
        clock_ += minutes{rng_.between(lo_min, hi_min)} + Millis{rng_.between(0, 999)};
      }
    }
    AttributeMap attrs;
    attrs.emplace("org:resource", std::string(resource));
    attrs.emplace("lifecycle:transition", std::string("complete"));
    events_.push_back(Event{activity, clock_, std::move(attrs)});
  }

  std::vector<Event> take() { return std::move(events_); }

private:
  Sampler& rng_;
  Timestamp clock_;
  std::vector<Event> events_;
};

}  // namespace

Timestamp demo_era_boundary() { return instant(2020, 7, 1); }

EventLog generate_demo_log(std::uint64_t seed, std::int64_t case_count) {
  if (case_count < 1) throw ValidationError("case_count must be at least 1, got " + std::to_string(case_count));

  Sampler rng(seed);
  const Timestamp era1_begin = instant(2020, 2, 15);
  const Timestamp era1_end = instant(2020, 5, 20);
  const Timestamp era2_begin = demo_era_boundary();
  const Timestamp era2_end = instant(2020, 12, 20);
  const int width = static_cast<int>(std::to_string(case_count).size());

  std::vector<Trace> traces;
  traces.reserve(static_cast<std::size_t>(case_count));
  for (std::int64_t i = 0; i < case_count; ++i) {
    const bool second_era = rng.chance(0.5);
    const Timestamp lo = second_era ? era2_begin : era1_begin;
    const Timestamp hi = second_era ? era2_end : era1_end;
    const Timestamp start = lo + Millis{rng.between(0, (hi - lo).count() - 1)};

    const std::int64_t age = rng.between(18, 95);
    const bool elderly = age >= 70;
    const bool icu = rng.chance((second_era ? 0.15 : 0.25) + (elderly ? 0.15 : 0.0));

    CaseBuilder c(rng, start);
    c.step("Hospital Admission", 0, 0, rng.pick(kNurses));
    if (second_era) c.step("Rapid Antigen Test", 5, 30, rng.pick(kNurses));
    else c.step("Manual Triage", 10, 60, rng.pick(kPhysicians));
    c.step("PCR Test", 30, 240, rng.pick(kLab));
    if (rng.chance(0.7)) c.step("Chest X-Ray", 60, 360, rng.pick(kPhysicians));
    const auto blood_tests = rng.between(0, 3);
    for (std::int64_t b = 0; b < blood_tests; ++b) c.step("Blood Test", 360, 1440, rng.pick(kLab));

    bool deceased = false;
    if (icu) {
      c.step("ICU Admission", 120, 2880, rng.pick(kIntensivists));
      if (rng.chance(0.6)) {
        c.step("Start Ventilation", 60, 720, rng.pick(kIntensivists));
        if (second_era && rng.chance(0.4)) c.step("Prone Positioning", 60, 480, rng.pick(kIntensivists));
        c.step("End Ventilation", 2880, 14400, rng.pick(kIntensivists));
      }
      deceased = rng.chance(second_era ? 0.2 : 0.3);
      if (!deceased) c.step("ICU Discharge", 1440, 4320, rng.pick(kIntensivists));
    }
    if (!deceased && second_era && rng.chance(0.5)) c.step("Antiviral Therapy", 120, 1440, rng.pick(kPhysicians));
    if (!deceased && rng.chance(elderly ? 0.08 : 0.03)) deceased = true;
    if (deceased) c.step("Deceased", 60, 4320, rng.pick(kPhysicians));
    else c.step("Discharge", 1440, 14400, rng.pick(kPhysicians));

    std::string id = std::to_string(i + 1);
    id = "case-" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(id.size()))), '0') + id;

    AttributeMap attrs;
    attrs.emplace("ward", std::string(icu ? "ICU" : "WARD"));
    attrs.emplace("age", age);
    attrs.emplace("sex", std::string(rng.chance(0.5) ? "F" : "M"));
    attrs.emplace("bmi", std::round((18.0 + rng.uniform() * 20.0) * 10.0) / 10.0);
    traces.push_back(Trace{std::move(id), std::move(attrs), c.take()});
  }
  return EventLog("demo-seed" + std::to_string(seed), std::move(traces));
}

}  // namespace cpm
