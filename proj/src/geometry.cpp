#include "frif/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace frif {

Box Box::interval(Scalar a, Scalar b, bool closed) {
    if (!(a.value() < b.value())) throw DomainError("interval requires lo < hi");
    Box box;
    box.lo = {a};
    box.hi = {b};
    box.closed_right = {closed};
    return box;
}

Box Box::cube(int d, Scalar a, Scalar b, bool closed) {
    if (!(a.value() < b.value())) throw DomainError("cube requires lo < hi");
    Box box;
    box.lo.assign(d, a);
    box.hi.assign(d, b);
    box.closed_right.assign(d, closed);
    return box;
}

bool Box::contains(std::span<const double> x, double tol) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (int j = 0; j < dim(); ++j) {
        if (x[j] < lo[j].value() - tol || x[j] > hi[j].value() + tol) return false;
    }
    return true;
}

bool AffineMap::exact() const {
    for (const auto& s : scale)
        if (!s.exact()) return false;
    for (const auto& o : offset)
        if (!o.exact()) return false;
    return true;
}

double AffineMap::lipschitz() const {
    double m = 0.0;
    for (const auto& s : scale) m = std::max(m, std::fabs(s.value()));
    return m;
}

AffineMap AffineMap::make4(std::span<const Scalar> a, std::span<const Scalar> b) {
    AffineMap m;
    m.scale.assign(a.begin(), a.end());
    m.offset.assign(b.begin(), b.end());
    return m;
}

void AffineMap::apply(std::span<const double> x, std::span<double> out) const {
    for (int j = 0; j < dim(); ++j)
        out[j] = scale[j].value() * x[j] + offset[j].value();
}

void AffineMap::apply_inverse(std::span<const double> x, std::span<double> out) const {
    for (int j = 0; j < dim(); ++j)
        out[j] = (x[j] - offset[j].value()) / scale[j].value();
}

Box AffineMap::image_of(const Box& domain) const {
    Box img;
    img.lo.resize(dim());
    img.hi.resize(dim());
    img.closed_right.assign(dim(), true);
    for (int j = 0; j < dim(); ++j) {
        Scalar a = scale[j] * domain.lo[j] + offset[j];
        Scalar b = scale[j] * domain.hi[j] + offset[j];
        if (b < a) std::swap(a, b);
        img.lo[j] = a;
        img.hi[j] = b;
    }
    return img;
}

AffineMap affine_inverse(const AffineMap& m) {
    AffineMap inv;
    inv.scale.resize(m.dim());
    inv.offset.resize(m.dim());
    for (int j = 0; j < m.dim(); ++j) {
        if (m.scale[j].value() == 0.0)
            throw NonInjectiveMap("affine map with zero scale component");
        inv.scale[j] = Scalar::integer(1) / m.scale[j];
        inv.offset[j] = -(m.offset[j] / m.scale[j]);
    }
    return inv;
}

PartitionReport verify_images(const std::vector<Box>& images,
                              const std::vector<double>& lipschitz,
                              const Box& domain) {
    PartitionReport rep;
    rep.lipschitz = lipschitz;
    const int n = static_cast<int>(images.size());
    const int d = domain.dim();

    rep.order.resize(n);
    std::iota(rep.order.begin(), rep.order.end(), 0);
    std::sort(rep.order.begin(), rep.order.end(), [&](int a, int b) {
        for (int j = 0; j < d; ++j) {
            if (scalar_lt(images[a].lo[j], images[b].lo[j])) return true;
            if (scalar_lt(images[b].lo[j], images[a].lo[j])) return false;
        }
        return a < b;
    });
    for (int k : rep.order) rep.sorted_images.push_back(images[k]);

    for (int k = 0; k < n; ++k) {
        const Box& img = images[k];
        for (int j = 0; j < d; ++j) {
            if (scalar_lt(img.lo[j], domain.lo[j]) || scalar_lt(domain.hi[j], img.hi[j])) {
                rep.contained = false;
                rep.notes.push_back("image " + std::to_string(k + 1) +
                                    " leaves the domain");
                break;
            }
        }
    }

    // Pairwise interior overlap: boxes overlap iff they overlap in every dim
    // with positive measure. Shared endpoints are fine (half-open convention).
    for (int a = 0; a < n && rep.disjoint; ++a) {
        for (int b = a + 1; b < n; ++b) {
            bool overlap = true;
            for (int j = 0; j < d; ++j) {
                const Scalar& lo = scalar_lt(images[a].lo[j], images[b].lo[j])
                                       ? images[b].lo[j]
                                       : images[a].lo[j];
                const Scalar& hi = scalar_lt(images[a].hi[j], images[b].hi[j])
                                       ? images[a].hi[j]
                                       : images[b].hi[j];
                if (!scalar_lt(lo, hi)) {
                    overlap = false;
                    break;
                }
            }
            if (overlap) {
                rep.disjoint = false;
                rep.notes.push_back("images " + std::to_string(a + 1) + " and " +
                                    std::to_string(b + 1) + " overlap");
                break;
            }
        }
    }
    rep.needs_compatibility = !rep.disjoint;

    // Coverage = the union of images reaches across the domain; judged
    // independently of disjointness so overlapping families route to
    // compatibility checking with the right verdict pair. 1-D: sweep the
    // sorted images. Higher dims: total volume of disjoint images must match
    // the domain volume.
    if (d == 1) {
        bool covers = !images.empty() && rep.contained &&
                      scalar_eq(rep.sorted_images.front().lo[0], domain.lo[0]);
        Scalar reach = rep.sorted_images.empty() ? domain.lo[0]
                                                 : rep.sorted_images.front().hi[0];
        for (int k = 1; k < n && covers; ++k) {
            if (scalar_lt(reach, rep.sorted_images[k].lo[0])) covers = false;
            if (scalar_lt(reach, rep.sorted_images[k].hi[0]))
                reach = rep.sorted_images[k].hi[0];
        }
        covers = covers && scalar_eq(reach, domain.hi[0]);
        rep.covers = covers;
        if (!covers) rep.notes.push_back("image union leaves a gap in the domain");
    } else {
        double vol = 0.0, dom_vol = 1.0;
        for (int j = 0; j < d; ++j) dom_vol *= domain.length(j);
        for (const Box& img : images) {
            double v = 1.0;
            for (int j = 0; j < d; ++j)
                v *= img.hi[j].value() - img.lo[j].value();
            vol += v;
        }
        rep.covers = rep.disjoint && rep.contained &&
                     std::fabs(vol - dom_vol) <= 1e-9 * std::max(1.0, dom_vol);
    }
    return rep;
}

PartitionReport verify_partition(const std::vector<AffineMap>& maps, const Box& domain) {
    if (maps.empty()) throw EmptyFamily("partition requires at least one map");
    std::vector<Box> images;
    std::vector<double> lips;
    for (const AffineMap& m : maps) {
        for (const Scalar& s : m.scale)
            if (s.value() == 0.0)
                throw NonInjectiveMap("affine map with zero scale component");
        images.push_back(m.image_of(domain));
        lips.push_back(m.lipschitz());
    }
    return verify_images(images, lips, domain);
}

Partition Partition::create(Box domain, std::vector<AffineMap> maps) {
    if (maps.empty()) throw EmptyFamily("partition requires at least one map");
    Partition p;
    p.domain = std::move(domain);
    p.maps = std::move(maps);
    for (const AffineMap& m : p.maps) {
        for (const Scalar& s : m.scale)
            if (s.value() == 0.0)
                throw NonInjectiveMap("affine map with zero scale component");
        Box img = m.image_of(p.domain);
        // Half-open on the right except where the image reaches the domain's
        // right endpoint.
        for (int j = 0; j < img.dim(); ++j)
            img.closed_right[j] = scalar_eq(img.hi[j], p.domain.hi[j]);
        p.images.push_back(std::move(img));
    }
    return p;
}

int Partition::locate(std::span<const double> x) const {
    for (int i = 0; i < size(); ++i) {
        const Box& img = images[i];
        bool inside = true;
        for (int j = 0; j < img.dim() && inside; ++j) {
            double lo = img.lo[j].value(), hi = img.hi[j].value();
            if (x[j] < lo) inside = false;
            else if (img.closed_right[j] ? x[j] > hi : x[j] >= hi) inside = false;
        }
        if (inside) return i;
    }
    return -1;
}

int Partition::locate_exact(const Rational& x) const {
    for (int i = 0; i < size(); ++i) {
        const Box& img = images[i];
        if (!img.lo[0].exact() || !img.hi[0].exact())
            throw ExactUnavailable("partition endpoints are not all rational");
        const Rational& lo = img.lo[0].rat();
        const Rational& hi = img.hi[0].rat();
        if (x < lo) continue;
        if (img.closed_right[0] ? hi < x : hi <= x) continue;
        return i;
    }
    return -1;
}

}  // namespace frif
