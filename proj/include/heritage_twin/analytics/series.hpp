#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "heritage_twin/core/error.hpp"
#include "heritage_twin/core/time.hpp"
#include "heritage_twin/core/uuid.hpp"
#include "heritage_twin/tstore/store.hpp"

namespace htwin::analytics {

struct HourlyPoint {
    Timestamp time;
    double value = 0.0;

    friend bool operator==(const HourlyPoint&, const HourlyPoint&) = default;
};

// An hourly series: strictly increasing, hour-aligned, finite. Construction
// sorts its input, so the order points were gathered in never matters.
class HourlySeries {
public:
    HourlySeries() = default;

    HourlySeries(std::vector<HourlyPoint> points, std::string unit = {}, Uuid id = {})
        : id_(id), unit_(std::move(unit)), points_(std::move(points)) {
        std::sort(points_.begin(), points_.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto& p = points_[i];
            if (!is_hour_aligned(p.time)) throw InvariantError("hourly series point " + format_iso(p.time) + " not on the hour");
            if (!std::isfinite(p.value)) throw InvariantError("hourly series point " + format_iso(p.time) + " not finite");
            if (i && points_[i - 1].time == p.time) throw InvariantError("hourly series has two points at " + format_iso(p.time));
        }
    }

    static HourlySeries from_buckets(const std::vector<HourlyBucket>& buckets, std::string unit = {}, Uuid id = {}) {
        std::vector<HourlyPoint> pts;
        pts.reserve(buckets.size());
        for (const auto& b : buckets) pts.push_back({b.hour, b.mean});
        return HourlySeries(std::move(pts), std::move(unit), id);
    }

    // Evenly spaced helper used by fixtures: values[i] at start + i hours.
    static HourlySeries from_values(Timestamp start, const std::vector<double>& values, std::string unit = {}) {
        std::vector<HourlyPoint> pts;
        pts.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            pts.push_back({start + static_cast<long>(i) * kHour, values[i]});
        return HourlySeries(std::move(pts), std::move(unit));
    }

    const Uuid& id() const { return id_; }
    const std::string& unit() const { return unit_; }
    const std::vector<HourlyPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    Timestamp front_time() const { return points_.front().time; }
    Timestamp back_time() const { return points_.back().time; }

    std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(points_.size());
        for (const auto& p : points_) v.push_back(p.value);
        return v;
    }

    // Index of the point at t, or npos.
    std::size_t find(Timestamp t) const {
        auto it = std::lower_bound(points_.begin(), points_.end(), t, [](const auto& p, Timestamp x) { return p.time < x; });
        return it != points_.end() && it->time == t ? static_cast<std::size_t>(it - points_.begin()) : npos;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const HourlySeries& a, const HourlySeries& b) {
        return a.points_ == b.points_ && a.unit_ == b.unit_ && a.id_ == b.id_;
    }

private:
    Uuid id_;
    std::string unit_;
    std::vector<HourlyPoint> points_;
};

// Hours present in both series, with both values.
struct AlignedPair {
    std::vector<Timestamp> times;
    std::vector<double> x;
    std::vector<double> y;
};

inline AlignedPair align(const HourlySeries& a, const HourlySeries& b) {
    AlignedPair out;
    const auto &pa = a.points(), &pb = b.points();
    std::size_t i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
        if (pa[i].time < pb[j].time) {
            ++i;
        } else if (pb[j].time < pa[i].time) {
            ++j;
        } else {
            out.times.push_back(pa[i].time);
            out.x.push_back(pa[i].value);
            out.y.push_back(pb[j].value);
            ++i;
            ++j;
        }
    }
    return out;
}

} // namespace htwin::analytics
