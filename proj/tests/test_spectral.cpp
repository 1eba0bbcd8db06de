#include <doctest.h>

#include <isolab/catalog.hpp>
#include <isolab/errors.hpp>
#include <isolab/spectral.hpp>

#include "oracles.hpp"

using namespace isolab;

TEST_CASE("inversion of catalog elements") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    CHECK(norm(invert(m2->unit()) - m2->unit()) == doctest::Approx(0.0));
    CHECK_THROWS_AS((void)invert(m2->basis_element(1)), NotInvertible);  // E12 nilpotent

    // zero-product unitization: (alpha I + m)^-1 = alpha^-1 I - alpha^-2 m
    const auto [uni_zero, uni_matrix] = make_unitization_pair();
    Eigen::VectorXcd x(4);
    x << std::complex<double>(2.0, 1.0), 0.5, std::complex<double>(0.0, -1.5), 3.0;
    const Element a = uni_zero->element(x);
    const Element inv = invert(a);
    const std::complex<double> alpha = x(0);
    Eigen::VectorXcd expected(4);
    expected(0) = 1.0 / alpha;
    for (int i = 1; i < 4; ++i) expected(i) = -x(i) / (alpha * alpha);
    CHECK((inv.coords() - expected).cwiseAbs().maxCoeff() <= 1e-12);

    // alpha = 0 is singular in both unitization algebras
    Eigen::VectorXcd y = x;
    y(0) = 0.0;
    CHECK_THROWS_AS((void)invert(uni_zero->element(y)), NotInvertible);
    CHECK_THROWS_AS((void)invert(uni_matrix->element(y)), NotInvertible);
}

TEST_CASE("inverse residuals stay below 1e-9 on random invertibles") {
    const AlgebraPtr m3 = make_matrix_algebra(3);
    Rng rng(5);
    for (int s = 0; s < 50; ++s) {
        const Element g = mul(exp_element(random_element(m3, rng, 0.5)),
                              exp_element(random_element(m3, rng, 0.5)));
        const Element gi = invert(g);
        CHECK(norm(mul(g, gi) - m3->unit()) <= 1e-9);
        CHECK(norm(mul(gi, g) - m3->unit()) <= 1e-9);
    }
}

TEST_CASE("spectrum of simple elements") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    const SpectrumResult triple = spectrum(3.0 * m2->unit());
    CHECK(triple.eigenvalues.size() == 4);
    CHECK(triple.spectral_radius == doctest::Approx(3.0));
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(std::abs(triple.eigenvalues(i) - 3.0) <= 1e-12);

    const AlgebraPtr c2 = make_function_algebra(2);
    Eigen::VectorXcd f(2);
    f << 0.0, 10.0;
    const SpectrumResult diag = spectrum(c2->element(f));
    CHECK(diag.spectral_radius == doctest::Approx(10.0));
    CHECK(oracles::multiset_distance(diag.eigenvalues, Eigen::Vector2cd(0.0, 10.0)) <= 1e-12);

    // nilpotent: the balancing pass must return exact zeros
    const SpectrumResult nil = spectrum(m2->basis_element(1));
    CHECK(nil.spectral_radius == 0.0);
}

TEST_CASE("spectrum properties on samples") {
    const AlgebraPtr m3 = make_matrix_algebra(3);
    Rng rng(17);
    for (int s = 0; s < 30; ++s) {
        const Element a = random_element(m3, rng);
        const Element b = random_element(m3, rng);
        // r(ab) = r(ba)
        CHECK(spectrum(mul(a, b)).spectral_radius ==
              doctest::Approx(spectrum(mul(b, a)).spectral_radius).epsilon(1e-8));
        // spectrum of the inverse is the reciprocal multiset
        const Element g = exp_element((0.5 * a));
        const Eigen::VectorXcd ev = spectrum(g).eigenvalues;
        Eigen::VectorXcd reciprocal(ev.size());
        for (Eigen::Index i = 0; i < ev.size(); ++i) reciprocal(i) = 1.0 / ev(i);
        CHECK(oracles::multiset_distance(spectrum(invert(g)).eigenvalues, reciprocal) <= 1e-8);
    }
}

TEST_CASE("gelfand radius by repeated squaring") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    CHECK(gelfand_radius(m2->unit(), 64) == doctest::Approx(1.0));
    CHECK(gelfand_radius(m2->basis_element(1), 2) == doctest::Approx(0.0));

    Eigen::MatrixXcd d(2, 2);
    d << 2.0, 0.0, 0.0, 1.0;
    const Element diag21 = element_from_matrix(m2, d);
    CHECK(gelfand_radius(diag21, 64) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(oracles::power_norm_root(diag21, 64) == doctest::Approx(gelfand_radius(diag21, 64)));

    CHECK_THROWS_AS((void)gelfand_radius(m2->unit(), 3), IncompatibleSpec);     // not a power of two
    CHECK_THROWS_AS((void)gelfand_radius(m2->unit(), 2048), IncompatibleSpec);  // too large

    // internal rescale: huge element would overflow 1e300 at k = 1024
    const Element huge = 1e20 * m2->unit();
    CHECK(gelfand_radius(huge, 1024) == doctest::Approx(1e20).epsilon(1e-9));

    Rng rng(3);
    for (int s = 0; s < 20; ++s) {
        const Element a = random_element(m2, rng);
        const double g = gelfand_radius(a, 128);
        CHECK(g >= spectrum(a).spectral_radius - 1e-6);
        CHECK(g <= norm(a) + 1e-6);
    }
}

TEST_CASE("subgroup membership") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    CHECK(in_subgroup(m2->unit(), SubgroupDescriptor::principal()));
    Eigen::MatrixXcd d(2, 2);
    d << 1.0, 0.0, 0.0, -1.0;
    CHECK(in_subgroup(element_from_matrix(m2, d), SubgroupDescriptor::principal()));
    CHECK_FALSE(in_subgroup(m2->basis_element(1), SubgroupDescriptor::full()));

    const SubgroupDescriptor custom =
        SubgroupDescriptor::custom([](const Element& a) { return std::abs(a.coords()(0)) > 0.5; });
    CHECK(in_subgroup(m2->unit(), custom));
    CHECK_FALSE(in_subgroup(0.1 * m2->unit(), custom));

    // principal-component membership needs the catalog certificate
    std::vector<std::complex<double>> scalar_tensor{1.0};
    const AlgebraPtr uncertified =
        validate_algebra(1, scalar_tensor, Eigen::VectorXcd::Ones(1), NormRule::Sup);
    CHECK_THROWS_AS((void)in_subgroup(uncertified->unit(), SubgroupDescriptor::principal()),
                    UnknownComponentStructure);
}

TEST_CASE("Omega membership") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    CHECK(in_omega(m2->unit()));
    CHECK_FALSE(in_omega(-1.0 * m2->unit()));
    CHECK_FALSE(in_omega(m2->zero()));

    Rng rng(29);
    const auto [uni_zero, uni_matrix] = make_unitization_pair();
    for (const AlgebraPtr& algebra : {m2, make_function_algebra(3), uni_zero, uni_matrix}) {
        for (int s = 0; s < 25; ++s) {
            const Element a = random_element(algebra, rng);
            // a + 2||a||e always lies in Omega
            const Element shifted = a + (2.0 * norm(a)) * algebra->unit();
            CHECK(in_omega(shifted));
            // and Omega sits inside the principal component
            if (in_omega(a)) {
                CHECK(is_invertible(a));
                CHECK(in_subgroup(a, SubgroupDescriptor::principal()));
            }
        }
    }
}

TEST_CASE("exponentials") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    CHECK(norm(exp_element(m2->zero()) - m2->unit()) == doctest::Approx(0.0));

    const AlgebraPtr c1 = make_function_algebra(1);
    CHECK(exp_element(c1->element(Eigen::VectorXcd::Constant(1, std::log(2.0)))).coords()(0).real() ==
          doctest::Approx(2.0));

    // nilpotent series truncates: exp(E12) = I + E12
    const Element e12 = m2->basis_element(1);
    const Element expected = m2->unit() + e12;
    CHECK(norm(exp_element(e12) - expected) <= 1e-14);

    Rng rng(41);
    for (int s = 0; s < 25; ++s) {
        const Element a = random_element(m2, rng, 0.6);
        CHECK(norm(exp_element(a) - oracles::exp_series(a)) <= 1e-10);
        CHECK(is_invertible(exp_element(a)));
    }
}

TEST_CASE("subgroup descriptors are closed under product and inverse on witnesses") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    CHECK(check_subgroup_closure(m2, SubgroupDescriptor::full(), 12, 1));
    CHECK(check_subgroup_closure(m2, SubgroupDescriptor::principal(), 12, 1));
    // membership by norm distance is an open set but not a subgroup
    const AlgebraPtr c2 = make_function_algebra(2);
    const SubgroupDescriptor not_a_group = SubgroupDescriptor::custom(
        [c2](const Element& a) { return is_invertible(a) && norm(a - c2->unit()) < 0.9; });
    CHECK_FALSE(check_subgroup_closure(c2, not_a_group, 12, 1));
}

TEST_CASE("gelfand radius is tight for normal concrete matrices") {
    const AlgebraPtr m3 = make_matrix_algebra(3);
    Rng rng(47);
    for (int s = 0; s < 20; ++s) {
        const Eigen::MatrixXcd q = random_unitary(3, rng);
        Eigen::VectorXcd d(3);
        for (int i = 0; i < 3; ++i) d(i) = rng.cnormal();
        const Element a = element_from_matrix(m3, q * d.asDiagonal() * q.adjoint());
        const double r = spectrum(a).spectral_radius;
        CHECK(gelfand_radius(a, 128) == doctest::Approx(r).epsilon(0.05));
    }
}
