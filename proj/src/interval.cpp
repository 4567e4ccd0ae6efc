#include "lcgf/interval.hpp"

#include "lcgf/levi_civita.hpp"

#include <algorithm>
#include <cmath>

namespace lcgf {

bool RealInterval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

IntervalSet::IntervalSet(std::vector<RealInterval> parts) {
    std::erase_if(parts, [](const RealInterval& r) { return r.lo > r.hi; });
    std::sort(parts.begin(), parts.end(), [](const RealInterval& a, const RealInterval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    for (const auto& p : parts) {
        if (!parts_.empty() && p.lo <= parts_.back().hi) {
            parts_.back().hi = std::max(parts_.back().hi, p.hi);
        } else {
            parts_.push_back(p);
        }
    }
}

bool IntervalSet::bounded() const {
    return std::all_of(parts_.begin(), parts_.end(), [](const RealInterval& r) { return r.bounded(); });
}

bool IntervalSet::contains(double x) const {
    return std::any_of(parts_.begin(), parts_.end(), [x](const RealInterval& r) { return r.contains(x); });
}

double IntervalSet::lower() const {
    return parts_.empty() ? std::numeric_limits<double>::infinity() : parts_.front().lo;
}

double IntervalSet::upper() const {
    return parts_.empty() ? -std::numeric_limits<double>::infinity() : parts_.back().hi;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
    std::vector<RealInterval> all = parts_;
    all.insert(all.end(), o.parts_.begin(), o.parts_.end());
    return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
    std::vector<RealInterval> out;
    for (const auto& a : parts_) {
        for (const auto& b : o.parts_) {
            RealInterval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
            if (r.lo <= r.hi) out.push_back(r);
        }
    }
    return IntervalSet(std::move(out));
}

std::string IntervalSet::to_string() const {
    if (parts_.empty()) return "{}";
    auto end = [](double x) {
        if (std::isinf(x)) return std::string(x < 0 ? "-inf" : "inf");
        return format_scalar(x);
    };
    std::string out;
    for (const auto& p : parts_) {
        if (!out.empty()) out += " U ";
        if (p.is_point()) {
            out += "{" + end(p.lo) + "}";
        } else {
            out += "[" + end(p.lo) + ", " + end(p.hi) + "]";
        }
    }
    return out;
}

}  // namespace lcgf
