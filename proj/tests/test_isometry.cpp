#include <doctest.h>

#include <isolab/catalog.hpp>
#include <isolab/errors.hpp>
#include <isolab/isometry.hpp>
#include <isolab/radical.hpp>

#include "oracles.hpp"

using namespace isolab;

namespace {

Element unitization_radical_element(const AlgebraPtr& algebra, int slot) {
    return algebra->basis_element(slot);
}

} // namespace

TEST_CASE("u0 estimation") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    CHECK(norm(estimate_u0(make_identity_map(m2, m2))) <= 1e-12);

    const auto [uni_zero, uni_matrix] = make_unitization_pair();
    const Element u = unitization_radical_element(uni_matrix, 2);  // E13
    CHECK(norm(estimate_u0(make_translation_map(uni_matrix, u)) - u) <= 1e-9);

    Rng rng(3);
    const Eigen::MatrixXcd q = random_unitary(3, rng);
    const AlgebraPtr m3 = make_matrix_algebra(3);
    CHECK(norm(estimate_u0(make_similarity_map(m3, q, IsometryForm::SimilarityLinear))) <= 1e-9);
}

TEST_CASE("u0 estimation fails loudly when differences do not contract") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    PartialIsometry slow;
    slow.source = slow.target = m2;
    // ||T(2^-k e)|| = 2^-k/10: contraction ratio 2^-0.1 ~ 0.933 > 0.9
    slow.forward = [m2](const Element& a) {
        const double na = norm(a);
        return na > 0 ? std::pow(na, 0.1) * (1.0 / na) * a : a;
    };
    slow.name = "radial_tenth_root";
    CHECK_THROWS_AS((void)estimate_u0(slow), NoLimit);

    // a ball domain that excludes scalars near zero
    PartialIsometry offcenter;
    offcenter.source = offcenter.target = make_function_algebra(2);
    Eigen::VectorXcd f0(2);
    f0 << 0.0, 10.0;
    offcenter.domain = UnionOfBalls{{Ball{offcenter.source->element(f0), 1.0}}};
    offcenter.forward = [](const Element& a) { return a; };
    offcenter.name = "offcenter_ball";
    CHECK_THROWS_AS((void)estimate_u0(offcenter), NoLimit);
}

TEST_CASE("identity extends to the identity candidate") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    const auto [cand, report] = extend_isometry(make_identity_map(m2, m2), 100, 42);
    CHECK(report.verdict == ExtensionVerdict::ExtendsAsTheorem);
    CHECK(report.additivity_residual <= 1e-10);
    CHECK(report.homogeneity_residual <= 1e-10);
    CHECK(report.isometry_residual <= 1e-10);
    CHECK(report.agreement_residual <= 1e-10);
    REQUIRE(report.surjectivity_probe_residual.has_value());
    CHECK(*report.surjectivity_probe_residual <= 1e-9);
    CHECK(report.u0_in_radical);
    CHECK((cand.matrix_real - Eigen::MatrixXd::Identity(8, 8)).norm() <= 1e-10);
    CHECK(cand.is_complex_linear());
}

TEST_CASE("non-isometric similarity is rejected through the isometry residual") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    Eigen::MatrixXcd u(2, 2);
    u << 1.0, 1.0, 0.0, 1.0;
    const PartialIsometry map =
        make_similarity_map(m2, u, IsometryForm::SimilarityLinear, /*claims_isometric=*/false);
    const auto [cand, report] = extend_isometry(map, 150, 7);
    CHECK(report.verdict == ExtensionVerdict::FailsExtension);
    // the map is linear, so only the isometry residual can fail
    CHECK(report.additivity_residual <= 1e-9);
    CHECK(report.homogeneity_residual <= 1e-9);
    CHECK(report.agreement_residual <= 1e-9);
    CHECK(report.isometry_residual > 1e-2);
    REQUIRE(report.witness.has_value());
    CHECK(report.witness->check == "isometry");
}

TEST_CASE("the two-ball map fails extension with a concrete witness") {
    const PartialIsometry two_ball = make_two_ball_map();
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto [cand, report] = extend_isometry(two_ball, 150, seed);
        CHECK(report.verdict == ExtensionVerdict::FailsExtension);
        CHECK(norm(report.u0) <= 1e-9);
        REQUIRE(report.witness.has_value());
        CHECK(report.witness->check == "agreement");
        CHECK(report.witness->discrepancy >= 0.5);

        // frozen witness: f = (0.5, 10) maps to itself under T but
        // to (-0.5, 10) under any candidate assembled from the small ball
        Eigen::VectorXcd f(2);
        f << 0.5, 10.0;
        const Element probe = two_ball.source->element(f);
        CHECK(norm(cand.apply_with_offset(probe) - two_ball.forward(probe)) == doctest::Approx(1.0));
    }
}

TEST_CASE("the extension formula refuses to leave a union-of-balls domain") {
    const PartialIsometry two_ball = make_two_ball_map();
    Eigen::VectorXcd big(2);
    big << 5.0, 0.0;  // x + 2||x||e lands far outside both balls
    CHECK_THROWS_AS((void)formula_extension(two_ball, two_ball.source->element(big)), DomainViolation);
    // inside the small ball the formula evaluates to the flip
    Eigen::VectorXcd small(2);
    small << 0.1, 0.05;
    Eigen::VectorXcd flipped(2);
    flipped << -0.1, 0.05;
    CHECK(norm(formula_extension(two_ball, two_ball.source->element(small)) -
               two_ball.source->element(flipped)) <= 1e-12);
}

TEST_CASE("translation by a radical element extends with the injected offset") {
    const auto [uni_zero, uni_matrix] = make_unitization_pair();
    const Element u = unitization_radical_element(uni_matrix, 2);
    const auto [cand, report] = extend_isometry(make_translation_map(uni_matrix, u), 150, 5);
    CHECK(report.verdict == ExtensionVerdict::ExtendsAsTheorem);
    CHECK(norm(report.u0 - u) <= 1e-9);
    CHECK(report.u0_in_radical);
    CHECK((cand.matrix_real - Eigen::MatrixXd::Identity(8, 8)).norm() <= 1e-9);
    CHECK(report.agreement_residual <= 1e-10);
}

TEST_CASE("verify_linear_isometry audits a hand-built candidate") {
    const auto [uni_zero, uni_matrix] = make_unitization_pair();
    const Element u = unitization_radical_element(uni_matrix, 1);
    const PartialIsometry map = make_translation_map(uni_matrix, u);
    LinearCandidate cand{uni_matrix, uni_matrix, Eigen::MatrixXd::Identity(8, 8), u};
    const ExtensionReport report = verify_linear_isometry(cand, map, 100, 11);
    CHECK(report.verdict == ExtensionVerdict::ExtendsAsTheorem);
    CHECK(report.agreement_residual <= 1e-10);

    // sabotage the offset: agreement must blow up by exactly ||u||
    LinearCandidate wrong{uni_matrix, uni_matrix, Eigen::MatrixXd::Identity(8, 8), uni_matrix->zero()};
    const ExtensionReport bad = verify_linear_isometry(wrong, map, 100, 11);
    CHECK(bad.verdict == ExtensionVerdict::FailsExtension);
    CHECK(bad.agreement_residual == doctest::Approx(norm(u)));
}

TEST_CASE("conjugate-linear isometries pass real checks and fail the complex-linearity test") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    const PartialIsometry conj =
        make_similarity_map(m2, Eigen::MatrixXcd::Identity(2, 2), IsometryForm::SimilarityConjugate);
    const auto [cand, report] = extend_isometry(conj, 120, 9);
    CHECK(report.verdict == ExtensionVerdict::ExtendsAsTheorem);
    CHECK_FALSE(cand.is_complex_linear());
    CHECK(cand.complex_linearity_residual() > 1.0);

    const PartialIsometry swap = make_coordinate_permutation_map(make_function_algebra(2), {1, 0});
    const auto [cand2, report2] = extend_isometry(swap, 120, 9);
    CHECK(report2.verdict == ExtensionVerdict::ExtendsAsTheorem);
    CHECK(cand2.is_complex_linear());
}

TEST_CASE("surjectivity probe is skipped without an inverse handle") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    PartialIsometry no_inverse = make_identity_map(m2, m2);
    no_inverse.inverse = {};
    const auto [cand, report] = extend_isometry(no_inverse, 80, 13);
    CHECK_FALSE(report.surjectivity_probe_residual.has_value());
    CHECK(report.verdict == ExtensionVerdict::ExtendsAsTheorem);
}

TEST_CASE("midpoint check") {
    const AlgebraPtr m2 = make_matrix_algebra(2);
    const PartialIsometry identity = make_identity_map(m2, m2);
    Rng rng(17);
    const Element f = mul(exp_element(random_element(m2, rng, 0.4)), m2->unit());
    const Element g = f + 0.05 * random_element(m2, rng);
    CHECK(midpoint_check(identity, f, g) <= 1e-12);

    const auto [uni_zero, uni_matrix] = make_unitization_pair();
    const PartialIsometry translation =
        make_translation_map(uni_matrix, unitization_radical_element(uni_matrix, 3));
    Eigen::VectorXcd x(4), y(4);
    x << 1.0, 0.3, -0.2, 0.1;
    y << 1.2, 0.1, 0.4, -0.3;
    CHECK(midpoint_check(translation, uni_matrix->element(x), uni_matrix->element(y)) <= 1e-9);

    // segment from one ball to the other leaves the domain
    const PartialIsometry two_ball = make_two_ball_map();
    Eigen::VectorXcd p(2), q(2);
    p << 0.5, 0.0;
    q << 0.5, 10.0;
    CHECK_THROWS_AS((void)midpoint_check(two_ball, two_ball.source->element(p), two_ball.source->element(q)),
                    SegmentLeavesDomain);
}

TEST_CASE("reflection fixed point: three-point set") {
    const AlgebraPtr c2 = make_function_algebra(2);
    Rng rng(19);
    const Element c = random_element(c2, rng);
    const Element v = random_element(c2, rng);
    const std::vector<Element> points{c - v, c, c + v};
    CHECK(reflection_fixed_point_check(points, c, {2, 1, 0}) == doctest::Approx(0.0));
    CHECK(reflection_fixed_point_check(points, c, {0, 1, 2}) == doctest::Approx(0.0));

    // identity permutation with a shuffled pair is not distance-preserving
    // when the spokes are asymmetric
    const Element w = 2.0 * v;
    const std::vector<Element> uneven{c - v, c, c + v, c + w, c - w};
    CHECK_THROWS_AS((void)reflection_fixed_point_check(uneven, c, {0, 1, 2, 4, 3}),
                    NotIsometric);
}

TEST_CASE("reflection fixed point: sampled midpoint sphere in the sup norm") {
    // L = { u : ||u - h|| = r = ||u - h'|| } around c = (h + h')/2, sampled as
    // c + (0, w) with |w +- delta_2| <= r, where the norm gap lives in the
    // first coordinate
    const AlgebraPtr c2 = make_function_algebra(2);
    Eigen::VectorXcd h(2), hp(2);
    h << 1.0, 0.5;
    hp << -1.0, 0.3;
    const Element center = c2->element(0.5 * (h + hp));
    const Eigen::VectorXcd delta = 0.5 * (h - hp);
    const double r = std::abs(delta(0));
    REQUIRE(r > std::abs(delta(1)));

    Rng rng(23);
    std::vector<Element> points{center};
    for (int s = 0; s < 25; ++s) {
        std::complex<double> w = rng.cnormal();
        w *= (r - std::abs(delta(1))) * 0.99 * rng.uniform() / std::abs(w);
        Eigen::VectorXcd offset(2);
        offset << 0.0, w;
        points.push_back(center + c2->element(offset));
        points.push_back(center - c2->element(offset));
    }
    // every sampled point is genuinely on the two-sphere
    for (const auto& u : points) {
        CHECK(norm(u - c2->element(h)) == doctest::Approx(r));
        CHECK(norm(u - c2->element(hp)) == doctest::Approx(r));
    }
    std::vector<std::size_t> perm(points.size());
    perm[0] = 0;
    for (std::size_t i = 1; i < points.size(); i += 2) {
        perm[i] = i + 1;
        perm[i + 1] = i;
    }
    CHECK(reflection_fixed_point_check(points, center, perm) <= 1e-9);
}

TEST_CASE("reflection fixed point rejects bad inputs") {
    const AlgebraPtr c2 = make_function_algebra(2);
    Rng rng(29);
    const Element c = random_element(c2, rng);
    const Element v = random_element(c2, rng);
    CHECK_THROWS_AS((void)reflection_fixed_point_check({c, c + v}, c, {0, 1}), NotSymmetric);
    CHECK_THROWS_AS((void)reflection_fixed_point_check({c - v, c + v}, c, {1, 0}), NotSymmetric);
    CHECK_THROWS_AS((void)reflection_fixed_point_check({c - v, c, c + v}, c, {0, 0, 2}),
                    NotIsometric);
}

TEST_CASE("u0 of every genuine catalog isometry lies in the target radical span") {
    const auto [uni_zero, uni_matrix] = make_unitization_pair();
    const AlgebraPtr m2 = make_matrix_algebra(2);
    Rng rng(31);
    const std::vector<PartialIsometry> maps = {
        make_identity_map(m2, m2),
        make_similarity_map(m2, random_unitary(2, rng), IsometryForm::SimilarityLinear),
        make_coordinate_permutation_map(make_function_algebra(3), {2, 0, 1}),
        make_translation_map(uni_matrix, unitization_radical_element(uni_matrix, 1)),
        make_translation_map(uni_zero, unitization_radical_element(uni_zero, 3)),
    };
    for (const auto& map : maps) {
        const auto [cand, report] = extend_isometry(map, 100, 37);
        CHECK(report.verdict == ExtensionVerdict::ExtendsAsTheorem);
        CHECK(report.u0_radical_distance <= 1e-8);
    }
}
