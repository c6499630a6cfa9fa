#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ulam/paradox.hpp"
#include "ulam/stability.hpp"

using namespace ulam;

namespace {

constexpr double kPi = std::numbers::pi;

OperatorMap<FiniteGroup> z2_scalar(double theta) {
  return OperatorMap<FiniteGroup>(FiniteGroup::cyclic(2), {0, 1},
                                  {Operator::scalar(1.0), Operator::scalar(std::polar(1.0, theta))});
}

VectorFamily<int> scalar_family(std::vector<int> F, std::vector<Complex> values) {
  std::vector<CVector> row;
  for (auto v : values) row.push_back(CVector::Constant(1, v));
  return VectorFamily<int>(std::move(F), 1, {row});
}

std::vector<FiniteGroup> test_groups() {
  return {FiniteGroup::cyclic(6), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4),
          FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4))};
}

ProbMeasure<int> random_measure(const FiniteGroup& g, Rng& rng) { return dirichlet_measure(g.elements(), rng); }

}  // namespace

TEST(AverageMap, GenuineRepresentationIsFixed) {
  const auto g = FiniteGroup::dihedral(3);
  const auto pi = regular_representation(g);
  Rng rng = make_rng(2);
  const auto psi = average_map(pi, random_measure(g, rng));
  EXPECT_LT(proximity(pi, psi), 1e-14);
}

TEST(AverageMap, ScalarZ2Uniform) {
  const double theta = 0.8;
  const auto psi = average_map(z2_scalar(theta), ProbMeasure<int>::uniform({0, 1}));
  EXPECT_LT(std::abs(psi.at(1)(0, 0) - std::cos(theta)), 1e-15);
  EXPECT_LT(std::abs(psi.at(0)(0, 0) - 1.0), 1e-15);
}

TEST(AverageMap, PointMassAtIdentity) {
  const auto g = FiniteGroup::symmetric(3);
  const auto phi = perturb_representation(regular_representation(g), 0.1, 4).map;
  const auto psi = average_map(phi, ProbMeasure<int>::point_mass(0));
  for (int x : g.elements()) EXPECT_LT(op_norm(psi.at(x) - phi.at(x) * phi.at(0).adjoint()), 1e-15);
}

TEST(AverageMap, UnitaryInputGivesUnitalOutput) {
  for (const auto& g : test_groups()) {
    const auto phi = perturb_representation(regular_representation(g), 0.1, 6).map;
    Rng rng = make_rng(1);
    EXPECT_TRUE(is_unital(average_map(phi, random_measure(g, rng)), 1e-13));
  }
}

TEST(AverageMap, DomainEscapeIsReported) {
  const IntegerLattice z1(1);
  const auto phi = OperatorMap<IntegerLattice>::from_function(
      z1, z1.ball(3), [](const Point& k) { return Operator::scalar(std::polar(1.0, 0.1 * k[0] * k[0])); });
  const auto box = folner_box(1, 2);
  EXPECT_THROW(average_map(phi, box, std::vector<Point>{{2}}), DomainEscape);
  const auto psi = average_map(phi, box);
  EXPECT_EQ(psi.domain(), (std::vector<Point>{{-1}, {0}, {1}}));
  EXPECT_THROW(average_map(phi, folner_box(1, 4)), DomainEscape);
}

TEST(AmenableCorrection, ScalarZ2) {
  const double theta = kPi / 3;
  const auto phi = z2_scalar(theta);
  const auto psi = amenable_correction(phi);
  EXPECT_NEAR(psi.at(1)(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(proximity(phi, psi), std::sin(theta), 1e-15);
  EXPECT_NEAR(defect(phi).epsilon, 2 * std::sin(theta), 1e-14);
  EXPECT_LE(proximity(phi, psi), 2 * defect(phi).epsilon);
}

TEST(AmenableCorrection, PositiveAndCloseOnTestGroups) {
  for (const auto& g : test_groups()) {
    for (double eps : {0.01, 0.05, 0.1}) {
      const auto phi = perturb_representation(regular_representation(g), eps, 17).map;
      const auto psi = amenable_correction(phi);
      const double measured = defect(phi).epsilon;
      EXPECT_LE(proximity(phi, psi), measured + 1e-12) << g.name();
      EXPECT_GE(pd_defect(psi, g.elements()).min_eigenvalue, -1e-9) << g.name();
      EXPECT_TRUE(is_unital(psi, 1e-12));
      for (int x : g.elements()) EXPECT_LE(op_norm(psi.at(x) - phi.at(x)), row_defect(phi, x) + 1e-12);
    }
  }
}

TEST(AmenableCorrection, PositiveOnEverySubsample) {
  const auto g = FiniteGroup::dihedral(4);
  const auto psi = amenable_correction(perturb_representation(regular_representation(g), 0.1, 8).map);
  Rng rng = make_rng(3);
  for (int t = 0; t < 30; ++t) {
    auto els = g.elements();
    std::shuffle(els.begin(), els.end(), rng);
    els.resize(1 + t % g.order());
    EXPECT_GE(pd_defect(psi, els).min_eigenvalue, -1e-9);
  }
}

TEST(AmenableCorrection, GenuineRepresentationUnchanged) {
  const auto pi = regular_representation(FiniteGroup::symmetric(3));
  EXPECT_LT(proximity(pi, amenable_correction(pi)), 1e-15);
}

TEST(AmenableCorrection, NeedsWholeGroup) {
  const OperatorMap<FiniteGroup> partial(FiniteGroup::cyclic(3), {0, 1}, {Operator::scalar(1.0), Operator::scalar(1.0)});
  EXPECT_THROW(amenable_correction(partial), InvalidInput);
}

TEST(VectorFamily, Validation) {
  EXPECT_THROW(VectorFamily<int>({}, 1, {{}}), InvalidInput);
  EXPECT_THROW(VectorFamily<int>({0}, 1, {}), InvalidInput);
  EXPECT_THROW(VectorFamily<int>({0}, 2, {{CVector::Ones(1)}}), InvalidInput);
  Rng rng = make_rng(0);
  const auto f = VectorFamily<int>::random_unit({0, 2}, 3, 4, rng);
  EXPECT_EQ(f.n(), 3);
  EXPECT_NEAR(f.at(1, 1).norm(), 1.0, 1e-14);
  EXPECT_EQ(f.stacked(2).size(), 8);
}

TEST(Condition5, GenuineRepresentationWitnessAtFirstElement) {
  const auto g = FiniteGroup::symmetric(3);
  const auto pi = regular_representation(g);
  Rng rng = make_rng(12);
  const auto xi = VectorFamily<int>::random_unit({1, 4}, 2, 6, rng);
  const auto zeta = VectorFamily<int>::random_unit({1, 4}, 2, 6, rng);
  const auto scan = std::vector<int>{3, 0, 1};
  const auto res = check_condition5(pi, pi, xi, zeta, std::span<const int>(scan));
  ASSERT_TRUE(res.witness_y);
  EXPECT_EQ(*res.witness_y, 3);
  EXPECT_LT(res.lhs, 1e-28);
}

TEST(Condition5, ScalarZ2HandComputation) {
  const double theta = 0.6;
  const auto phi = z2_scalar(theta);
  const auto psi = amenable_correction(phi);
  const auto xi = scalar_family({1}, {1.0});
  const auto zeta = scalar_family({1}, {std::polar(1.0, theta)});
  const auto scan = std::vector<int>{0, 1};
  const auto res = check_condition5(phi, psi, xi, zeta, std::span<const int>(scan));
  ASSERT_TRUE(res.witness_y);
  EXPECT_EQ(*res.witness_y, 1);
  const double s2 = std::sin(theta) * std::sin(theta);
  EXPECT_NEAR(res.lhs, s2, 1e-14);
  EXPECT_NEAR(res.rhs, 4 * s2, 1e-14);
  const auto only0 = std::vector<int>{0};
  const auto miss = check_condition5(phi, psi, xi, zeta, std::span<const int>(only0));
  EXPECT_FALSE(miss.witness_y);
  EXPECT_NEAR(miss.lhs, s2, 1e-14);
  EXPECT_NEAR(miss.rhs, 0.0, 1e-14);
}

TEST(Condition5, ZetaEqualPsiXiGivesEquality) {
  const auto g = FiniteGroup::cyclic(6);
  const auto phi = perturb_representation(regular_representation(g), 0.05, 2).map;
  const auto psi = amenable_correction(phi);
  Rng rng = make_rng(9);
  const std::vector<int> F{0, 2, 5};
  const auto xi = VectorFamily<int>::random_unit(F, 2, 6, rng);
  std::vector<std::vector<CVector>> z(2);
  for (int i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < F.size(); ++k) z[i].push_back(psi.at(F[k]) * xi.at(i, k));
  const VectorFamily<int> zeta(F, 6, z);
  const auto scan = g.elements();
  const auto res = check_condition5(phi, psi, xi, zeta, std::span<const int>(scan));
  ASSERT_TRUE(res.witness_y);
  EXPECT_EQ(*res.witness_y, 0);
  EXPECT_NEAR(res.lhs, res.rhs, 1e-12);
}

TEST(Condition5, InputValidation) {
  const auto phi = z2_scalar(0.3);
  const auto xi = scalar_family({1}, {1.0});
  const auto zeta2 = scalar_family({0}, {1.0});
  const std::vector<int> none, scan{0};
  EXPECT_THROW(check_condition5(phi, phi, xi, xi, std::span<const int>(none)), InvalidInput);
  EXPECT_THROW(check_condition5(phi, phi, xi, zeta2, std::span<const int>(scan)), InvalidInput);
}

TEST(Condition5, AlwaysWitnessedOnFiniteGroups) {
  for (const auto& g : test_groups()) {
    const auto phi = perturb_representation(regular_representation(g), 0.1, 21).map;
    const auto psi = amenable_correction(phi);
    const auto scan = g.elements();
    const auto sweep = sample_condition5(phi, psi, std::span<const int>(scan), Condition5Sampling{100, 4, 3, 5});
    EXPECT_EQ(sweep.trials, 100);
    EXPECT_EQ(sweep.witnesses, 100) << g.name();
  }
}

TEST(PhiF, BlockStructure) {
  const auto g = FiniteGroup::cyclic(4);
  const auto pi = regular_representation(g);
  const auto single = build_phi_F(pi, {0});
  for (int y : g.elements()) EXPECT_LT(op_norm(single(y) - Operator::identity(4)), 1e-15);
  const auto pf = build_phi_F(pi, {1, 3});
  for (int y : g.elements()) EXPECT_LT(op_norm(pf(y) - direct_sum({pi.at(1), pi.at(3)})), 1e-15);

  const double theta = 0.4;
  const auto phi = z2_scalar(theta);
  const auto two = build_phi_F(phi, {0, 1});
  const Operator at1 = two(1);
  EXPECT_LT(std::abs(at1(0, 0) - 1.0), 1e-15);
  EXPECT_LT(std::abs(at1(1, 1) - std::polar(1.0, -theta)), 1e-15);
  EXPECT_EQ(at1(0, 1), Complex(0, 0));
}

TEST(PhiF, NormIsMaxBlockNorm) {
  const auto g = FiniteGroup::symmetric(3);
  const auto phi = perturb_representation(regular_representation(g), 0.1, 1).map;
  std::vector<Operator> vals;
  for (int x : g.elements()) vals.push_back((1.0 + 0.1 * x) * phi.at(x));
  const OperatorMap<FiniteGroup> scaled(g, g.elements(), vals);
  const std::vector<int> F{1, 2, 5};
  const auto pf = build_phi_F(scaled, F);
  for (int y : g.elements()) {
    double best = 0;
    for (int x : F) best = std::max(best, op_norm(scaled.at(g.mul(x, y)) * scaled.at(y).adjoint()));
    EXPECT_NEAR(op_norm(pf(y)), best, 1e-12);
  }
}

TEST(BuildT, Blocks) {
  const double theta = 1.0;
  const auto psi = amenable_correction(z2_scalar(theta));
  const std::vector<int> F{0, 1};
  const Operator t = build_T(psi, std::span<const int>(F));
  EXPECT_NEAR(t(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(t(1, 1).real(), std::cos(theta), 1e-15);
  const auto pi = regular_representation(FiniteGroup::cyclic(3));
  const std::vector<int> F2{0, 2};
  EXPECT_EQ(build_T(pi, std::span<const int>(F2)), build_phi_F(pi, F2)(0));
}

TEST(BuildT, IsTheAverageOfPhiF) {
  Rng rng = make_rng(77);
  for (const auto& g : test_groups()) {
    const auto phi = perturb_representation(regular_representation(g), 0.1, 3).map;
    const auto mu = random_measure(g, rng);
    const std::vector<int> F{0, 1, g.order() - 1};
    const Operator t = build_T(average_map(phi, mu), std::span<const int>(F));
    const auto pf = build_phi_F(phi, F);
    CMatrix acc = CMatrix::Zero(t.dim(), t.dim());
    for (std::size_t k = 0; k < mu.size(); ++k) acc += mu.weights()[k] * pf(mu.support()[k]).matrix();
    EXPECT_LT((t.matrix() - acc).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(EmbedDirectSum, SingleAndPair) {
  const auto phi = z2_scalar(kPi / 3);
  const std::vector<OperatorMap<FiniteGroup>> one{phi};
  const auto e1 = embed_direct_sum(std::span<const OperatorMap<FiniteGroup>>(one));
  EXPECT_EQ(e1.values(), phi.values());
  const std::vector<OperatorMap<FiniteGroup>> two{phi, phi};
  const auto psi = amenable_correction(embed_direct_sum(std::span<const OperatorMap<FiniteGroup>>(two)));
  EXPECT_NEAR(psi.at(1)(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(psi.at(1)(1, 1).real(), 0.5, 1e-15);
  EXPECT_EQ(psi.at(1)(0, 1), Complex(0, 0));
}

TEST(EmbedDirectSum, CommutesWithAveraging) {
  Rng rng = make_rng(31);
  const auto g = FiniteGroup::dihedral(3);
  const auto scalar = OperatorMap<FiniteGroup>::from_function(
      g, g.elements(), [](int x) { return Operator::scalar(std::polar(1.0, 0.3 * x)); });
  const std::vector<OperatorMap<FiniteGroup>> maps{perturb_representation(regular_representation(g), 0.1, 1).map,
                                                   scalar};
  const std::span<const OperatorMap<FiniteGroup>> span(maps);
  const auto mu = random_measure(g, rng);
  const auto lhs = average_map(embed_direct_sum(span), mu);
  const auto dims = block_dims(span);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto rhs = average_map(maps[i], mu);
    for (int x : g.elements()) EXPECT_EQ(compress_block(lhs.at(x), dims, i), rhs.at(x));
  }
}

TEST(EmbedDirectSum, RejectsMismatchedDomains) {
  const auto a = z2_scalar(0.1);
  const auto b = regular_representation(FiniteGroup::cyclic(3));
  const std::vector<OperatorMap<FiniteGroup>> maps{a, b};
  EXPECT_THROW(embed_direct_sum(std::span<const OperatorMap<FiniteGroup>>(maps)), InvalidInput);
}

TEST(PredualPairing, ResidualIsRounding) {
  for (const auto& g : test_groups()) {
    const auto phi = perturb_representation(regular_representation(g), 0.1, 2).map;
    EXPECT_LT(predual_pairing_residual(phi, ProbMeasure<int>::uniform(g.elements()), 10, 4), 1e-12);
  }
}

TEST(Folner, GenuineCharacterHasZeroIncrements) {
  const IntegerLattice z1(1);
  const std::vector<int> radii{1, 2, 4};
  std::vector<Point> F0{{-2}, {-1}, {0}, {1}, {2}}, sample{{0}, {1}, {2}};
  const int R = folner_required_radius(radii, F0, sample);
  const std::vector<Operator> gen{Operator::scalar(std::polar(1.0, 0.9))};
  const auto chi = representation_from_generators(z1, z1.ball(R), std::span<const Operator>(gen));
  const auto rep = folner_convergence_experiment(chi, radii, F0, sample);
  for (const auto& row : rep.rows) {
    EXPECT_LT(row.increment, 1e-13);
    EXPECT_LT(row.shift_error, 1e-13);
    for (std::size_t k = 0; k < F0.size(); ++k) EXPECT_LT(op_norm(row.psi_on_F0[k] - chi.at(rep.F0[k])), 1e-13);
  }
  EXPECT_TRUE(rep.final_psd.verdict);
}

TEST(Folner, QuadraticPhaseShiftBoundAndDecay) {
  const IntegerLattice z1(1);
  const std::vector<int> radii{1, 2, 4, 8, 16};
  std::vector<Point> F0{{-2}, {-1}, {0}, {1}, {2}}, sample{{0}, {1}, {2}};
  const int R = folner_required_radius(radii, F0, sample);
  const auto phi = OperatorMap<IntegerLattice>::from_function(
      z1, z1.ball(R), [](const Point& k) { return Operator::scalar(std::polar(1.0, 1.0 * k[0] * k[0])); });
  EXPECT_GT(defect(phi).epsilon, 0.5);  // not a representation
  const auto rep = folner_convergence_experiment(phi, radii, F0, sample);
  ASSERT_EQ(rep.rows.size(), radii.size());
  for (const auto& row : rep.rows) EXPECT_LE(row.shift_error, row.shift_bound + 1e-12);
  EXPECT_LE(rep.rows[4].increment, 0.5 * rep.rows[2].increment);
  EXPECT_THROW(folner_convergence_experiment(phi, std::vector<int>{R}, F0, sample), DomainEscape);
}
