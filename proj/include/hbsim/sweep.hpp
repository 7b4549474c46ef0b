#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hbsim/config.hpp"
#include "hbsim/engine.hpp"

namespace hbsim {

struct SweepRow {
    std::uint64_t axis_value = 0;
    std::uint32_t repetition = 0;
    std::uint64_t seed = 0;  // derived per-row seed actually used
    RunMetrics metrics;

    bool operator==(const SweepRow&) const = default;
};

struct SweepTable {
    SweepAxis axis = SweepAxis::kDegree;
    std::vector<SweepRow> rows;  // ordered by axis value, then repetition

    bool operator==(const SweepTable&) const = default;
};

// The base config rerun at every (axis value, repetition) pair, each row
// seeded with sweep_row_seed(base.seed, value, rep). Rows execute on up to
// worker_count threads; the result is independent of worker count and
// scheduling. A failing row raises an error naming that row.
SweepTable run_sweep(const SweepSpec& spec, unsigned worker_count);

// Sets the axis field of a config; used for per-row configs and by tests.
SimConfig apply_axis(const SimConfig& base, SweepAxis axis, std::uint64_t value);

// Results CSV: a version comment line, a fixed header, then one row per
// sweep row. Doubles are written shortest-round-trip so parsing the text
// recovers the exact values.
std::string results_csv(const SweepTable& table);
SweepTable parse_results_csv(std::string_view text);

struct ReportOutput {
    std::string hit_ratios_csv;  // axis, r_local, r_peering, r_total (means over reps)
    std::string network_csv;     // axis, h_peering, r_total
    std::string cost_csv;        // axis, avg_cost
    std::string summary;         // per-value aggregates and the argmin-cost axis value
};

// Figure-data series and a text summary for a results table. Repetitions
// aggregate to means (summary adds sample standard deviation of avg_cost);
// the argmin is over mean avg_cost, ties to the smaller axis value.
ReportOutput report(const SweepTable& table);

// Shortest round-trip decimal form, used for all CSV/JSON number output.
std::string format_double(double value);

}  // namespace hbsim
