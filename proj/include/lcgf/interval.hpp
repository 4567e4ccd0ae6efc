#pragma once

#include <limits>
#include <string>
#include <vector>

namespace lcgf {

/// Closed real interval [lo, hi]; either end may be infinite. A point is [c, c].
struct RealInterval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return lo <= x && x <= hi; }
    bool is_point() const { return lo == hi; }
    bool bounded() const;
    friend bool operator==(const RealInterval&, const RealInterval&) = default;
};

/// Finite union of closed intervals, kept sorted and merged.
class IntervalSet {
public:
    IntervalSet() = default;
    static IntervalSet whole_line() { return IntervalSet({RealInterval{}}); }
    static IntervalSet point(double c) { return IntervalSet({RealInterval{c, c}}); }
    static IntervalSet interval(double lo, double hi) { return IntervalSet({RealInterval{lo, hi}}); }
    explicit IntervalSet(std::vector<RealInterval> parts);

    const std::vector<RealInterval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    bool bounded() const;
    bool contains(double x) const;
    double lower() const;
    double upper() const;

    IntervalSet unite(const IntervalSet& o) const;
    IntervalSet intersect(const IntervalSet& o) const;

    std::string to_string() const;
    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<RealInterval> parts_;
};

}  // namespace lcgf
