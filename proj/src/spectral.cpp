#include "isolab/spectral.hpp"

#include "isolab/errors.hpp"
#include "isolab/linalg.hpp"
#include "isolab/rng.hpp"

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace isolab {

namespace {

constexpr double kSingularRelTol = 1e-12;

struct SvdCache {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd;
    explicit SvdCache(const Eigen::MatrixXcd& m)
        : svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV) {}
    bool invertible() const {
        const auto& sv = svd.singularValues();
        return sv(sv.size() - 1) > kSingularRelTol * sv(0);
    }
};

} // namespace

bool is_invertible(const Element& a) { return SvdCache(regular_rep(a)).invertible(); }

Element invert(const Element& a) {
    const Eigen::MatrixXcd la = regular_rep(a);
    SvdCache cache(la);
    if (!cache.invertible())
        throw NotInvertible("smallest singular value of L_a is below 1e-12 * ||L_a||");
    const Element inv = a.algebra()->element(cache.svd.solve(a.algebra()->unit_coords()));
    const Element e = a.algebra()->unit();
    const double r1 = norm(mul(a, inv) - e);
    const double r2 = norm(mul(inv, a) - e);
    if (r1 > 1e-9 || r2 > 1e-9)
        throw NotInvertible("inverse residual " + std::to_string(std::max(r1, r2)) +
                            " exceeds 1e-9 (L_a too ill-conditioned)");
    return inv;
}

SpectrumResult spectrum(const Element& a) {
    SpectrumResult out;
    out.eigenvalues = linalg::balanced_eigenvalues(regular_rep(a));
    out.spectral_radius = out.eigenvalues.size() == 0 ? 0.0 : out.eigenvalues.cwiseAbs().maxCoeff();
    return out;
}

double gelfand_radius(const Element& a, int k_max) {
    if (k_max < 1 || k_max > 1024 || (k_max & (k_max - 1)) != 0)
        throw IncompatibleSpec("k_max must be a power of two in [1, 1024], got " +
                               std::to_string(k_max));

    auto attempt = [&](const Element& x) -> double {
        Element p = x;
        int k = 1;
        while (k < k_max) {
            p = mul(p, p);
            k *= 2;
            if (!p.coords().allFinite() || !(norm(p) < 1e300))
                throw Overflow("intermediate norm exceeded 1e300");
        }
        return std::pow(norm(p), 1.0 / static_cast<double>(k_max));
    };

    try {
        return attempt(a);
    } catch (const Overflow&) {
        // gelfand_radius is homogeneous, so retry once on a/||a||
        const double na = norm(a);
        if (!(na > 0.0) || !std::isfinite(na)) throw;
        return na * attempt((1.0 / na) * a);
    }
}

bool in_subgroup(const Element& a, const SubgroupDescriptor& d) {
    switch (d.kind) {
        case SubgroupKind::FullInvertibleGroup:
            return is_invertible(a);
        case SubgroupKind::PrincipalComponent:
            if (!a.algebra()->invertible_group_connected())
                throw UnknownComponentStructure(
                    "no connectedness certificate for algebra '" + a.algebra()->name() +
                    "'; principal-component membership is undecidable here");
            return is_invertible(a);
        case SubgroupKind::CustomPredicate:
            return d.predicate(a);
    }
    return false;
}

bool check_subgroup_closure(const AlgebraPtr& algebra, const SubgroupDescriptor& d, int samples,
                            std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Element> members;
    int attempts = 0;
    while (static_cast<int>(members.size()) < samples && attempts++ < 100 * samples) {
        const Element g = mul(exp_element(random_element(algebra, rng, 0.5)),
                              exp_element(random_element(algebra, rng, 0.5)));
        if (in_subgroup(g, d)) members.push_back(g);
    }
    for (const Element& g : members) {
        if (!in_subgroup(invert(g), d)) return false;
        for (const Element& h : members)
            if (!in_subgroup(mul(g, h), d)) return false;
    }
    return !members.empty();
}

bool in_omega(const Element& a) {
    const double na = norm(a);
    if (!(na > 0.0)) return false;  // ||0 - re|| = r is never < r
    const Element e = a.algebra()->unit();
    auto defect = [&](double r) { return norm(a - r * e) - r; };

    double best = std::numeric_limits<double>::infinity();
    double best_r = na;
    for (int j = -20; j <= 20; ++j) {
        const double r = std::ldexp(na, j);
        const double v = defect(r);
        if (v < best) { best = v; best_r = r; }
    }
    // golden-section refinement in log r around the grid minimum
    const double phi = 0.6180339887498949;
    double lo = std::log(best_r) - std::log(2.0), hi = std::log(best_r) + std::log(2.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = defect(std::exp(x1)), f2 = defect(std::exp(x2));
    for (int it = 0; it < 60; ++it) {
        if (f1 <= f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = defect(std::exp(x1));
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = defect(std::exp(x2));
        }
    }
    best = std::min({best, f1, f2});
    return best < -1e-10;
}

Element exp_element(const Element& a) {
    const Eigen::MatrixXcd la = regular_rep(a);
    return a.algebra()->element(la.exp() * a.algebra()->unit_coords());
}

} // namespace isolab
