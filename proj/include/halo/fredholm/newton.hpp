#pragma once

#include <string>
#include <vector>

#include "halo/padic/valq.hpp"

namespace halo::fredholm {

using padic::PadicVal;
using padic::ValQ;

// (n, v); when exact is false, v is only a lower bound for the true valuation.
struct NPPoint {
    long n = 0;
    ValQ value;
    bool exact = true;
};

struct NPSegment {
    long start = 0;
    long end = 0;
    ValQ slope;
    bool certified = false;
    long length() const { return end - start; }
};

struct SlopeMultiset {
    std::vector<ValQ> slopes;     // nondecreasing
    std::vector<bool> certified;  // per slope
    bool exact() const;
    std::size_t count() const { return slopes.size(); }
    // slopes strictly below h
    SlopeMultiset below(const ValQ& h) const;
    std::string str() const;
};

class NewtonPolygon {
public:
    NewtonPolygon() = default;
    explicit NewtonPolygon(std::vector<NPPoint> points);

    const std::vector<NPPoint>& points() const { return pts_; }
    // indices into points() of the hull vertices
    const std::vector<std::size_t>& vertex_indices() const { return vert_; }
    std::vector<NPPoint> vertices() const;
    const std::vector<NPSegment>& segments() const { return seg_; }

    long last_n() const;
    // hull height at n (interpolated); n within [0, last_n()]
    ValQ value_at(long n) const;
    bool is_vertex(long n) const;
    // exact point that is a vertex of the hull of values and lower bounds
    bool certified_vertex(long n) const;
    SlopeMultiset slopes() const;
    // Slopes below h. They are certified only when every point past the last such
    // segment lies on or above the line of slope h through its end, so no further
    // slope below h can hide behind a lower bound.
    SlopeMultiset slopes_below(const ValQ& h) const;
    // the slope-by-slope list up to index n (slope i is the segment over [i, i+1])
    std::vector<ValQ> slope_list() const;

private:
    std::vector<NPPoint> pts_;
    std::vector<std::size_t> vert_;
    std::vector<NPSegment> seg_;
};

// Builds the lower convex hull; the first point must be (0, 0) exact.
// Points with infinite value are dropped. A segment is certified iff both ends
// are exact and every bound-only point strictly inside lies strictly above it.
NewtonPolygon newton_polygon(std::vector<NPPoint> points);
NewtonPolygon newton_polygon(const std::vector<PadicVal>& vals);

// lambda(0..n_max) for t' and p: lambda(i+1) = lambda(i) + floor(i/t') - floor(i/(p t')).
std::vector<long> lambda_table(int p, int t_prime, long n_max);
std::vector<long> lambda_lower_bound(int p, int t_prime, const std::vector<long>& n_list);

}  // namespace halo::fredholm
