#pragma once

#include <random>
#include <vector>

#include "frif/rb_global.hpp"

namespace frif::testing {

// Random admissible global operator on [0,1]: 2..4 adjacent pieces with cut
// points on the 1/64 lattice, constant |s| <= 0.85, q drawn from constants,
// affine pieces and scaled sin/cos.
inline RBOperator random_global_operator(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_dist(2, 4);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> s_dist(-0.85, 0.85);
    std::uniform_int_distribution<int> kind(0, 3);

    const int n = n_dist(rng);
    std::vector<int> cuts{0, 64};
    std::uniform_int_distribution<int> cut_dist(1, 63);
    while (static_cast<int>(cuts.size()) < n + 1) {
        int c = cut_dist(rng);
        bool fresh = true;
        for (int v : cuts) fresh = fresh && v != c;
        if (fresh) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());

    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<AffineMap> maps;
    std::vector<CoefficientFn> q, s;
    for (int i = 0; i < n; ++i) {
        Scalar a = Scalar::ratio(cuts[i + 1] - cuts[i], 64);
        Scalar b = Scalar::ratio(cuts[i], 64);
        maps.push_back(AffineMap::make(a, b));

        ExprPtr qe;
        double c0 = coeff(rng), c1 = coeff(rng);
        switch (kind(rng)) {
            case 0: qe = ex::num(Scalar::exact_from_double(c0)); break;
            case 1:
                qe = ex::affine(Scalar::exact_from_double(c1),
                                Scalar::exact_from_double(c0));
                break;
            case 2:
                qe = ex::mul(ex::num(Scalar::exact_from_double(c0)),
                             ex::sin(ex::var()));
                break;
            default:
                qe = ex::mul(ex::num(Scalar::exact_from_double(c0)),
                             ex::cos(ex::var()));
        }
        q.push_back(CoefficientFn::make(qe, domain, 1));
        s.push_back(CoefficientFn::make(
            ex::num(Scalar::exact_from_double(s_dist(rng))), domain, 1));
    }
    return RBOperator::create(Partition::create(domain, std::move(maps)),
                              std::move(q), std::move(s));
}

inline GridFunction random_grid(std::mt19937_64& rng, const Box& domain,
                                int resolution, int value_dim = 1) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction g = GridFunction::zero(domain, resolution, value_dim);
    for (double& v : g.values) v = dist(rng);
    return g;
}

}  // namespace frif::testing
