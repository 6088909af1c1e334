#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "frif/rational.hpp"

namespace frif {

// Tolerance for endpoint comparisons when any participant is float-only.
inline constexpr double kFloatTol = 1e-12;

inline bool scalar_eq(const Scalar& a, const Scalar& b, double tol = kFloatTol) {
    if (a.exact() && b.exact()) return a == b;
    return std::fabs(a.value() - b.value()) <= tol;
}
inline bool scalar_lt(const Scalar& a, const Scalar& b, double tol = kFloatTol) {
    if (a.exact() && b.exact()) return a < b;
    return a.value() < b.value() - tol;
}

// Axis-aligned box; dimensions 1 (interval) and 4 (quaternion cube) are the
// supported cases. closed_right marks dims whose right endpoint belongs to
// the set; the left endpoint always does.
struct Box {
    std::vector<Scalar> lo, hi;
    std::vector<bool> closed_right;

    int dim() const { return static_cast<int>(lo.size()); }

    static Box interval(Scalar a, Scalar b, bool closed = true);
    static Box cube(int d, Scalar a, Scalar b, bool closed = true);

    double length(int j) const { return hi[j].value() - lo[j].value(); }
    // Closure containment with float tolerance.
    bool contains(std::span<const double> x, double tol = kFloatTol) const;
};

// l(x)_j = scale_j * x_j + offset_j componentwise; injective iff every
// scale_j is nonzero.
struct AffineMap {
    std::vector<Scalar> scale, offset;

    int dim() const { return static_cast<int>(scale.size()); }
    bool exact() const;
    double lipschitz() const;

    static AffineMap make(Scalar a, Scalar b) { return {{a}, {b}}; }
    static AffineMap make4(std::span<const Scalar> a, std::span<const Scalar> b);

    void apply(std::span<const double> x, std::span<double> out) const;
    void apply_inverse(std::span<const double> x, std::span<double> out) const;
    double apply1(double x) const { return scale[0].value() * x + offset[0].value(); }
    double inverse1(double x) const { return (x - offset[0].value()) / scale[0].value(); }
    Scalar apply1_exact(const Scalar& x) const { return scale[0] * x + offset[0]; }

    Box image_of(const Box& domain) const;
};

AffineMap affine_inverse(const AffineMap& m);  // throws NonInjectiveMap

struct PartitionReport {
    bool disjoint = true;
    bool covers = true;
    bool contained = true;           // every image inside the domain closure
    bool needs_compatibility = false;  // set when disjointness fails
    std::vector<Box> sorted_images;    // ascending by lo (1-D) / lexicographic
    std::vector<int> order;            // sorted_images[k] = image of maps[order[k]]
    std::vector<double> lipschitz;     // per map, original order
    std::vector<std::string> notes;

    bool ok() const { return disjoint && covers; }
};

PartitionReport verify_partition(const std::vector<AffineMap>& maps, const Box& domain);

// Images of the maps with the half-open convention baked in: every image is
// half-open on the right except those reaching the domain's right endpoint.
struct Partition {
    Box domain;
    std::vector<AffineMap> maps;
    std::vector<Box> images;

    static Partition create(Box domain, std::vector<AffineMap> maps);

    int size() const { return static_cast<int>(maps.size()); }
    // Index of the unique piece whose image contains x, or -1.
    int locate(std::span<const double> x) const;
    int locate_exact(const Rational& x) const;  // 1-D, exact endpoints required
};

// Disjointness/coverage report for a family of image boxes against a domain;
// shared by the global and local verifiers.
PartitionReport verify_images(const std::vector<Box>& images,
                              const std::vector<double>& lipschitz,
                              const Box& domain);

}  // namespace frif
