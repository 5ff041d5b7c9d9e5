#pragma once

#include <cstdint>

#include "cpm/event_log.hpp"

namespace cpm {

/// Cases admitted before this instant follow the first-era process and
/// complete before it; later cases follow the second-era process.
Timestamp demo_era_boundary();

/// Synthetic hospital log: admission, triage or rapid testing, PCR, X-ray,
/// repeated blood tests, an optional ICU/ventilation episode, and discharge
/// or death. First-era cases always pass "Manual Triage", second-era cases
/// always pass "Rapid Antigen Test", so time slices on either side of the
/// era boundary differ in their activity sets.
///
/// Deterministic in (seed, case_count). Throws ValidationError when
/// case_count < 1.
EventLog generate_demo_log(std::uint64_t seed, std::int64_t case_count);

}  // namespace cpm
