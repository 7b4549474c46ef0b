#include "hbsim/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "hbsim/rng.hpp"

namespace hbsim {

namespace {

constexpr const char* kResultsHeader =
    "axis_value,rep,seed,n_requests,n_local,n_peering,n_miss,"
    "r_local,r_peering,r_miss,h_peering,h_miss,avg_cost";

std::string row_label(const SweepRow& row) {
    return "axis_value=" + std::to_string(row.axis_value) +
           " rep=" + std::to_string(row.repetition);
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

SimConfig apply_axis(const SimConfig& base, SweepAxis axis, std::uint64_t value) {
    SimConfig config = base;
    if (axis == SweepAxis::kDegree) {
        config.degree = static_cast<std::uint32_t>(value);
    } else {
        config.cache_size = static_cast<std::uint32_t>(value);
    }
    return config;
}

SweepTable run_sweep(const SweepSpec& spec, unsigned worker_count) {
    spec.validate();

    SweepTable table;
    table.axis = spec.axis;
    table.rows.reserve(spec.values.size() * spec.repetitions);
    for (const std::uint64_t value : spec.values) {
        for (std::uint32_t rep = 0; rep < spec.repetitions; ++rep) {
            table.rows.push_back(SweepRow{
                .axis_value = value,
                .repetition = rep,
                .seed = sweep_row_seed(spec.base.seed, value, rep),
                .metrics = {},
            });
        }
    }

    std::vector<std::optional<std::string>> errors(table.rows.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&spec, &table, &errors, &next] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= table.rows.size()) {
                return;
            }
            SweepRow& row = table.rows[i];
            try {
                SimConfig config = apply_axis(spec.base, spec.axis, row.axis_value);
                config.seed = row.seed;
                config.log_outcomes = false;  // traces are a single-run feature
                row.metrics = run(config).metrics;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(
                                              worker_count,
                                              static_cast<unsigned>(table.rows.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& thread : pool) {
            thread.join();
        }
    }

    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i].has_value()) {
            throw std::runtime_error("sweep row " + row_label(table.rows[i]) + ": " + *errors[i]);
        }
    }
    return table;
}

std::string results_csv(const SweepTable& table) {
    std::string out = "# hbsim-results v1 axis=";
    out += axis_name(table.axis);
    out += '\n';
    out += kResultsHeader;
    out += '\n';
    for (const SweepRow& row : table.rows) {
        const RunMetrics& m = row.metrics;
        out += std::to_string(row.axis_value);
        out += ',';
        out += std::to_string(row.repetition);
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += std::to_string(m.n_requests);
        out += ',';
        out += std::to_string(m.n_local);
        out += ',';
        out += std::to_string(m.n_peering);
        out += ',';
        out += std::to_string(m.n_miss);
        out += ',';
        out += format_double(m.r_local);
        out += ',';
        out += format_double(m.r_peering);
        out += ',';
        out += format_double(m.r_miss);
        out += ',';
        out += format_double(m.h_peering);
        out += ',';
        out += format_double(m.h_miss);
        out += ',';
        out += format_double(m.avg_cost);
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            return fields;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::runtime_error("results csv line " + std::to_string(line_no) +
                                 ": malformed number '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace

SweepTable parse_results_csv(std::string_view text) {
    SweepTable table;
    bool axis_seen = false;
    bool header_seen = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const std::size_t mark = line.find("axis=");
            if (mark != std::string_view::npos) {
                const std::string_view axis = line.substr(mark + 5);
                if (axis == "degree") {
                    table.axis = SweepAxis::kDegree;
                    axis_seen = true;
                } else if (axis == "cache_size") {
                    table.axis = SweepAxis::kCacheSize;
                    axis_seen = true;
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != kResultsHeader) {
                throw std::runtime_error("results csv line " + std::to_string(line_no) +
                                         ": unexpected header");
            }
            header_seen = true;
            continue;
        }

        const auto fields = split_fields(line);
        if (fields.size() != 13) {
            throw std::runtime_error("results csv line " + std::to_string(line_no) +
                                     ": expected 13 fields");
        }
        SweepRow row;
        row.axis_value = parse_number<std::uint64_t>(fields[0], line_no);
        row.repetition = parse_number<std::uint32_t>(fields[1], line_no);
        row.seed = parse_number<std::uint64_t>(fields[2], line_no);
        RunMetrics& m = row.metrics;
        m.n_requests = parse_number<std::uint64_t>(fields[3], line_no);
        m.n_local = parse_number<std::uint64_t>(fields[4], line_no);
        m.n_peering = parse_number<std::uint64_t>(fields[5], line_no);
        m.n_miss = parse_number<std::uint64_t>(fields[6], line_no);
        m.r_local = parse_number<double>(fields[7], line_no);
        m.r_peering = parse_number<double>(fields[8], line_no);
        m.r_miss = parse_number<double>(fields[9], line_no);
        m.h_peering = parse_number<double>(fields[10], line_no);
        m.h_miss = parse_number<double>(fields[11], line_no);
        m.avg_cost = parse_number<double>(fields[12], line_no);
        // h_peering is sum/n_peering rounded once, so this recovers the sum
        m.sum_peering_hops =
            static_cast<std::uint64_t>(std::llround(m.h_peering * static_cast<double>(m.n_peering)));
        table.rows.push_back(row);
    }

    if (!header_seen || !axis_seen) {
        throw std::runtime_error("results csv: missing version comment or header");
    }
    return table;
}

namespace {

struct AxisAggregate {
    std::uint64_t axis_value = 0;
    std::size_t rows = 0;
    double r_local = 0.0;
    double r_peering = 0.0;
    double r_total = 0.0;
    double h_peering = 0.0;
    double avg_cost = 0.0;
    double cost_stddev = 0.0;
};

std::vector<AxisAggregate> aggregate(const SweepTable& table) {
    std::vector<AxisAggregate> groups;
    std::size_t i = 0;
    while (i < table.rows.size()) {
        std::size_t j = i;
        while (j < table.rows.size() && table.rows[j].axis_value == table.rows[i].axis_value) {
            ++j;
        }
        AxisAggregate agg;
        agg.axis_value = table.rows[i].axis_value;
        agg.rows = j - i;
        for (std::size_t r = i; r < j; ++r) {
            const RunMetrics& m = table.rows[r].metrics;
            agg.r_local += m.r_local;
            agg.r_peering += m.r_peering;
            agg.r_total += m.r_local + m.r_peering;
            agg.h_peering += m.h_peering;
            agg.avg_cost += m.avg_cost;
        }
        const double n = static_cast<double>(agg.rows);
        agg.r_local /= n;
        agg.r_peering /= n;
        agg.r_total /= n;
        agg.h_peering /= n;
        agg.avg_cost /= n;
        if (agg.rows > 1) {
            double ss = 0.0;
            for (std::size_t r = i; r < j; ++r) {
                const double d = table.rows[r].metrics.avg_cost - agg.avg_cost;
                ss += d * d;
            }
            agg.cost_stddev = std::sqrt(ss / (n - 1.0));
        }
        groups.push_back(agg);
        i = j;
    }
    return groups;
}

}  // namespace

ReportOutput report(const SweepTable& table) {
    if (table.rows.empty()) {
        throw std::invalid_argument("report: empty table");
    }
    const std::vector<AxisAggregate> groups = aggregate(table);
    const char* axis = axis_name(table.axis);

    ReportOutput out;
    const std::string comment = std::string("# hbsim-report v1 axis=") + axis + "\n";

    out.hit_ratios_csv = comment + axis + ",r_local,r_peering,r_total\n";
    out.network_csv = comment + axis + ",h_peering,r_total\n";
    out.cost_csv = comment + axis + ",avg_cost\n";
    for (const AxisAggregate& g : groups) {
        const std::string v = std::to_string(g.axis_value);
        out.hit_ratios_csv += v + "," + format_double(g.r_local) + "," +
                              format_double(g.r_peering) + "," + format_double(g.r_total) + "\n";
        out.network_csv +=
            v + "," + format_double(g.h_peering) + "," + format_double(g.r_total) + "\n";
        out.cost_csv += v + "," + format_double(g.avg_cost) + "\n";
    }

    const AxisAggregate* best = &groups.front();
    for (const AxisAggregate& g : groups) {
        if (g.avg_cost < best->avg_cost) {
            best = &g;
        }
    }

    std::ostringstream summary;
    summary << "Sweep summary (axis: " << axis << ", " << groups.size() << " values, "
            << table.rows.size() << " rows)\n\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%10s %9s %9s %11s %11s %12s\n", axis, "r_local",
                  "r_peering", "hit_total", "h_peering", "avg_cost");
    summary << line;
    for (const AxisAggregate& g : groups) {
        std::snprintf(line, sizeof(line), "%10llu %9.4f %9.4f %11.4f %11.3f %12.4f",
                      static_cast<unsigned long long>(g.axis_value), g.r_local, g.r_peering,
                      g.r_total, g.h_peering, g.avg_cost);
        summary << line;
        if (g.rows > 1) {
            std::snprintf(line, sizeof(line), "  (stddev %.4f over %zu reps)", g.cost_stddev,
                          g.rows);
            summary << line;
        }
        summary << '\n';
    }
    summary << "\nMinimum average cost " << format_double(best->avg_cost) << " at " << axis
            << " = " << best->axis_value << "\n";
    out.summary = summary.str();
    return out;
}

}  // namespace hbsim
