#pragma once

#include "isolab/classify.hpp"
#include "isolab/isometry.hpp"

#include <map>
#include <utility>

namespace isolab {

/// M_n with the E_ij basis in row-major order and the spectral norm of the
/// concrete matrix.
AlgebraPtr make_matrix_algebra(int n);

/// C(X) for an X with k points: pointwise product, sup norm.
AlgebraPtr make_function_algebra(int k);

/// The two unitizations of the 3-dimensional strictly-upper 3x3 space over
/// the basis {I, E12, E13, E23}: first with the zero product on that space,
/// second with the genuine matrix product. Both carry the 3x3 operator norm.
std::pair<AlgebraPtr, AlgebraPtr> make_unitization_pair();

/// Conversion helpers for matrix algebras (row-major E_ij coordinates).
Element element_from_matrix(const AlgebraPtr& matrix_algebra, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_element(const Element& a);

/// The two-ball isometry on C({x,y}) that negates the first coordinate on
/// ball(0,1) and is the identity on ball((0,10),1). Self-checked to be an
/// isometry on 10^4 sampled pairs; it has no linear extension.
PartialIsometry make_two_ball_map();

enum class MapKind {
    Identity,
    TranslationByRadical,
    Similarity,
    TwoBall,
    UnitizationIdentity,
    SwapCoordinates,
    CustomTable
};

struct AlgebraDesc {
    enum class Kind { Matrix, Function, UnitizationZero, UnitizationMatrix, Custom };
    Kind kind = Kind::Matrix;
    int n = 2;  // matrix size or point count
    // Custom only:
    int dim = 0;
    std::vector<std::complex<double>> structure_constants;
    Eigen::VectorXcd unit;
    NormRule rule = NormRule::RegularRepOperator;
    std::vector<Eigen::MatrixXcd> embedding;
};

AlgebraPtr build_algebra(const AlgebraDesc& desc);

/// In-memory form of a scenario file.
struct ScenarioSpec {
    std::string id = "scenario";
    AlgebraDesc source;
    AlgebraDesc target;
    MapKind map_kind = MapKind::Identity;

    Eigen::VectorXcd translation_coords;                   // TranslationByRadical
    Eigen::MatrixXcd similarity_u;                         // Similarity
    IsometryForm similarity_form = IsometryForm::SimilarityLinear;
    std::vector<int> permutation;                          // SwapCoordinates; empty = reverse order
    Eigen::VectorXcd unimodular_factor;                    // optional left factor for SwapCoordinates
    std::vector<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> table;  // CustomTable

    bool claims_isometric = true;
    bool flag_source_commutative = false;
    bool flag_target_semisimple = false;

    std::vector<std::string> checks;
    std::map<std::string, std::string> expect;  // check name -> expected verdict
    std::optional<Eigen::VectorXcd> expect_u0;

    double tol_residual = 1e-8;
    int samples = 200;
    int pairs = 300;
    int segments = 100;
    std::uint64_t seed = 1;
};

/// Builds the map with verified metadata. Known-isometric kinds are
/// self-checked on 1000 seeded pairs and raise FixtureSelfCheckFailed on a
/// defect above 1e-9; kinds whose non-isometry is the point of the scenario
/// record the measured defect instead.
PartialIsometry make_map(const ScenarioSpec& spec);

// individual constructors (used directly by tests and the built-in suite)
PartialIsometry make_identity_map(AlgebraPtr source, AlgebraPtr target, std::string name = "identity");
PartialIsometry make_translation_map(AlgebraPtr algebra, const Element& u);
PartialIsometry make_similarity_map(const AlgebraPtr& matrix_algebra, const Eigen::MatrixXcd& u,
                                    IsometryForm form, bool claims_isometric = true);
PartialIsometry make_coordinate_permutation_map(const AlgebraPtr& function_algebra,
                                                std::vector<int> permutation,
                                                const Eigen::VectorXcd& unimodular_factor = {});

/// Haar-ish random unitary (QR of a Gaussian matrix with phase fix).
Eigen::MatrixXcd random_unitary(int n, Rng& rng);

/// Random matrix with prescribed condition number cap (singular values
/// log-uniform in [1/sqrt(cond), sqrt(cond)]).
Eigen::MatrixXcd random_conditioned(int n, double cond, Rng& rng);

} // namespace isolab
