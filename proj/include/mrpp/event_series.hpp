#pragma once

// Event times of a point process observed on [0, T).  Times are kept sorted
// and strictly increasing; the window length travels with the data.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mrpp/errors.hpp"

namespace mrpp {

class EventSeries {
public:
    EventSeries() : horizon_(1.0) {}

    // Takes ownership of times; sorts and validates.
    EventSeries(std::vector<double> times, double horizon)
        : times_(std::move(times)), horizon_(horizon) {
        if (!(horizon_ > 0.0)) throw std::domain_error("EventSeries: horizon must be positive");
        std::sort(times_.begin(), times_.end());
        for (std::size_t i = 0; i < times_.size(); ++i) {
            if (!(times_[i] >= 0.0) || !(times_[i] < horizon_))
                throw std::domain_error("EventSeries: event time outside [0, T)");
            if (i > 0 && times_[i] == times_[i - 1])
                throw std::domain_error("EventSeries: duplicate event time");
        }
    }

    const std::vector<double>& times() const { return times_; }
    double horizon() const { return horizon_; }
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }

    // FNV-1a over the raw double bits; used to assert that benchmark
    // strategies consume identical inputs.
    std::uint64_t digest() const {
        std::uint64_t h = 1469598103934665603ull;
        auto absorb = [&h](double v) {
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(v));
            std::memcpy(&bits, &v, sizeof(bits));
            for (int i = 0; i < 8; ++i) {
                h ^= (bits >> (8 * i)) & 0xFFull;
                h *= 1099511628211ull;
            }
        };
        absorb(horizon_);
        for (double t : times_) absorb(t);
        return h;
    }

private:
    std::vector<double> times_;
    double horizon_;
};

// --- serialization ---------------------------------------------------------
//
// Text format: one event time per line, printed with %.17g so values
// round-trip exactly.  CSV format: header "realization,time", one row per
// event, for collections of realizations.

inline void write_events_text(const EventSeries& series, std::ostream& out) {
    char buf[64];
    for (double t : series.times()) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", t);
        out << buf;
    }
}

inline void write_events_text(const EventSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    write_events_text(series, out);
}

inline EventSeries read_events_text(std::istream& in, double horizon) {
    std::vector<double> times;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            std::size_t pos = 0;
            double v = std::stod(line, &pos);
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos != line.size()) throw std::invalid_argument("trailing characters");
            times.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("bad event time at line " + std::to_string(lineno));
        }
    }
    return EventSeries(std::move(times), horizon);
}

inline EventSeries read_events_text(const std::string& path, double horizon) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path);
    return read_events_text(in, horizon);
}

inline void write_events_csv(const std::vector<EventSeries>& collection, std::ostream& out) {
    out << "realization,time\n";
    char buf[80];
    for (std::size_t m = 0; m < collection.size(); ++m) {
        for (double t : collection[m].times()) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", m, t);
            out << buf;
        }
    }
}

inline void write_events_csv(const std::vector<EventSeries>& collection, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    write_events_csv(collection, out);
}

// Reads a CSV written by write_events_csv.  Realizations with no events are
// preserved only up to the largest index that appears; pass expected count
// to pad trailing empties.
inline std::vector<EventSeries> read_events_csv(std::istream& in, double horizon,
                                                std::size_t expected = 0) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV");
    if (line != "realization,time" && line != "realization,time\r")
        throw ConfigError("bad CSV header, expected 'realization,time'");
    std::vector<std::vector<double>> buckets;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("bad CSV row at line " + std::to_string(lineno));
        try {
            std::size_t m = std::stoul(line.substr(0, comma));
            double t = std::stod(line.substr(comma + 1));
            if (m >= buckets.size()) buckets.resize(m + 1);
            buckets[m].push_back(t);
        } catch (const std::exception&) {
            throw ConfigError("bad CSV row at line " + std::to_string(lineno));
        }
    }
    if (buckets.size() < expected) buckets.resize(expected);
    std::vector<EventSeries> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.emplace_back(std::move(b), horizon);
    return out;
}

inline std::vector<EventSeries> read_events_csv(const std::string& path, double horizon,
                                                std::size_t expected = 0) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path);
    return read_events_csv(in, horizon, expected);
}

} // namespace mrpp
