#include "halo/fredholm/newton.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace halo::fredholm {

bool SlopeMultiset::exact() const {
    return std::all_of(certified.begin(), certified.end(), [](bool b) { return b; });
}

SlopeMultiset SlopeMultiset::below(const ValQ& h) const {
    SlopeMultiset out;
    for (std::size_t i = 0; i < slopes.size(); ++i)
        if (slopes[i] < h) {
            out.slopes.push_back(slopes[i]);
            out.certified.push_back(certified[i]);
        }
    return out;
}

std::string SlopeMultiset::str() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < slopes.size(); ++i) os << (i ? ", " : "") << slopes[i].str() << (certified[i] ? "" : "?");
    os << "}";
    return os.str();
}

namespace {

// positive when c lies below the line through a and b
ValQ cross(const NPPoint& a, const NPPoint& b, const NPPoint& c) {
    return (b.value - a.value) * ValQ(c.n - a.n) - (c.value - a.value) * ValQ(b.n - a.n);
}

}  // namespace

NewtonPolygon::NewtonPolygon(std::vector<NPPoint> points) {
    std::erase_if(points, [](const NPPoint& p) { return p.value.is_infinite(); });
    std::sort(points.begin(), points.end(), [](const NPPoint& a, const NPPoint& b) { return a.n < b.n; });
    if (points.empty() || points[0].n != 0 || points[0].value != ValQ(0))
        throw std::invalid_argument("Newton polygon needs the point (0, 0)");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].n == points[i - 1].n) throw std::invalid_argument("duplicate index in Newton polygon input");
    pts_ = std::move(points);

    for (std::size_t i = 0; i < pts_.size(); ++i) {
        // pop while the new point is on or below the line through the last two vertices
        while (vert_.size() >= 2 && cross(pts_[vert_[vert_.size() - 2]], pts_[vert_.back()], pts_[i]) >= ValQ(0))
            vert_.pop_back();
        vert_.push_back(i);
    }
    for (std::size_t s = 0; s + 1 < vert_.size(); ++s) {
        const auto& a = pts_[vert_[s]];
        const auto& b = pts_[vert_[s + 1]];
        NPSegment seg;
        seg.start = a.n;
        seg.end = b.n;
        seg.slope = (b.value - a.value) / (b.n - a.n);
        seg.certified = a.exact && b.exact;
        for (std::size_t i = vert_[s] + 1; seg.certified && i < vert_[s + 1]; ++i)
            if (!pts_[i].exact && !(cross(a, b, pts_[i]) < ValQ(0))) seg.certified = false;
        seg_.push_back(seg);
    }
}

std::vector<NPPoint> NewtonPolygon::vertices() const {
    std::vector<NPPoint> v;
    for (auto i : vert_) v.push_back(pts_[i]);
    return v;
}

long NewtonPolygon::last_n() const { return pts_[vert_.back()].n; }

ValQ NewtonPolygon::value_at(long n) const {
    if (n < 0 || n > last_n()) throw std::out_of_range("index outside the polygon");
    for (const auto& s : seg_)
        if (n <= s.end) {
            const auto& a = std::find_if(pts_.begin(), pts_.end(), [&](const NPPoint& p) { return p.n == s.start; });
            return a->value + s.slope * ValQ(n - s.start);
        }
    return pts_[vert_.back()].value;
}

bool NewtonPolygon::is_vertex(long n) const {
    return std::any_of(vert_.begin(), vert_.end(), [&](std::size_t i) { return pts_[i].n == n; });
}

// Bounds only lie below the true values, so an exact hull vertex stays a vertex:
// its supporting line passes strictly below every other point.
bool NewtonPolygon::certified_vertex(long n) const {
    for (auto i : vert_)
        if (pts_[i].n == n) return pts_[i].exact;
    return false;
}

SlopeMultiset NewtonPolygon::slopes() const {
    SlopeMultiset m;
    for (const auto& s : seg_)
        for (long i = s.start; i < s.end; ++i) {
            m.slopes.push_back(s.slope);
            m.certified.push_back(s.certified);
        }
    return m;
}

SlopeMultiset NewtonPolygon::slopes_below(const ValQ& h) const {
    SlopeMultiset m;
    std::size_t v = 0;  // vertex ending the part below h
    for (std::size_t s = 0; s < seg_.size() && seg_[s].slope < h; ++s) {
        for (long i = seg_[s].start; i < seg_[s].end; ++i) {
            m.slopes.push_back(seg_[s].slope);
            m.certified.push_back(seg_[s].certified);
        }
        v = s + 1;
    }
    const auto& end = pts_[vert_[v]];
    bool closed = end.exact;
    for (const auto& q : pts_)
        if (q.n > end.n && q.value < end.value + h * ValQ(q.n - end.n)) closed = false;
    if (!closed) m.certified.assign(m.slopes.size(), false);
    return m;
}

std::vector<ValQ> NewtonPolygon::slope_list() const { return slopes().slopes; }

NewtonPolygon newton_polygon(std::vector<NPPoint> points) { return NewtonPolygon(std::move(points)); }

NewtonPolygon newton_polygon(const std::vector<PadicVal>& vals) {
    std::vector<NPPoint> pts;
    for (std::size_t i = 0; i < vals.size(); ++i) pts.push_back({static_cast<long>(i), vals[i].value, vals[i].exact});
    return NewtonPolygon(std::move(pts));
}

std::vector<long> lambda_table(int p, int t_prime, long n_max) {
    if (t_prime < 1) throw std::invalid_argument("t' must be positive");
    if (p < 2) throw std::invalid_argument("p must be a prime");
    std::vector<long> lam(static_cast<std::size_t>(n_max + 1), 0);
    const long t = t_prime, pt = static_cast<long>(p) * t_prime;
    for (long i = 0; i < n_max; ++i) lam[static_cast<std::size_t>(i + 1)] = lam[static_cast<std::size_t>(i)] + i / t - i / pt;
    return lam;
}

std::vector<long> lambda_lower_bound(int p, int t_prime, const std::vector<long>& n_list) {
    long top = 0;
    for (long n : n_list) {
        if (n < 0) throw std::invalid_argument("negative index");
        top = std::max(top, n);
    }
    auto lam = lambda_table(p, t_prime, top);
    std::vector<long> out;
    for (long n : n_list) out.push_back(lam[static_cast<std::size_t>(n)]);
    return out;
}

}  // namespace halo::fredholm
