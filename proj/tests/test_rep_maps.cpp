#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ulam/rep_maps.hpp"

using namespace ulam;

namespace {

constexpr double kPi = std::numbers::pi;

/// phi(0) = 1, phi(1) = e^{i theta} on Z_2.
OperatorMap<FiniteGroup> z2_scalar(double theta) {
  return OperatorMap<FiniteGroup>(FiniteGroup::cyclic(2), {0, 1},
                                  {Operator::scalar(1.0), Operator::scalar(std::polar(1.0, theta))});
}

OperatorMap<FiniteGroup> z2_values(Complex v0, Complex v1) {
  return OperatorMap<FiniteGroup>(FiniteGroup::cyclic(2), {0, 1}, {Operator::scalar(v0), Operator::scalar(v1)});
}

}  // namespace

TEST(OperatorMap, Validation) {
  const auto z2 = FiniteGroup::cyclic(2);
  EXPECT_THROW(OperatorMap<FiniteGroup>(z2, {}, {}), InvalidInput);
  EXPECT_THROW(OperatorMap<FiniteGroup>(z2, {0, 1}, {Operator::identity(1)}), InvalidInput);
  EXPECT_THROW(OperatorMap<FiniteGroup>(z2, {0, 1}, {Operator::identity(1), Operator::identity(2)}), InvalidInput);
  EXPECT_THROW(OperatorMap<FiniteGroup>(z2, {0, 0}, {Operator::identity(1), Operator::identity(1)}), InvalidInput);
  EXPECT_THROW(OperatorMap<FiniteGroup>(z2, {0}, {Operator::identity(65)}), CapExceeded);
  const auto m = z2_scalar(0.3);
  EXPECT_THROW(m.at(5), DomainEscape);
  EXPECT_TRUE(m.is_unitary());
  EXPECT_NEAR(m.uniform_bound(), 1.0, 1e-15);
}

TEST(OperatorMap, DomainIsSortedWithValues) {
  const auto m = OperatorMap<FiniteGroup>(FiniteGroup::cyclic(3), {2, 0, 1},
                                          {Operator::scalar(2.0), Operator::scalar(0.5), Operator::scalar(1.0)});
  EXPECT_EQ(m.domain(), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(m.at(2), Operator::scalar(2.0));
  EXPECT_NEAR(m.uniform_bound(), 2.0, 1e-15);
}

TEST(RegularRepresentation, HandValues) {
  const auto pi2 = regular_representation(FiniteGroup::cyclic(2));
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  EXPECT_EQ(pi2.at(1), Operator(swap));
  const auto pi3 = regular_representation(FiniteGroup::cyclic(3));
  EXPECT_EQ(pi3.at(1) * pi3.at(1) * pi3.at(1), Operator::identity(3));
}

TEST(RegularRepresentation, DefectIsExactlyZero) {
  for (const auto& g : {FiniteGroup::cyclic(6), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4),
                        FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4))}) {
    const auto pi = regular_representation(g);
    const auto rep = defect(pi);
    EXPECT_EQ(rep.epsilon, 0.0) << g.name();
    EXPECT_EQ(rep.pairs_scanned, static_cast<std::size_t>(g.order() * g.order()));
    EXPECT_TRUE(pi.is_unitary());
  }
  EXPECT_THROW(regular_representation(FiniteGroup::cyclic(65)), CapExceeded);
}

TEST(Defect, ScalarZ2) {
  // |1 - e^{2 i theta}| = 2 |sin theta|
  EXPECT_NEAR(defect(z2_scalar(kPi / 6)).epsilon, 1.0, 1e-14);
  EXPECT_NEAR(defect(z2_scalar(kPi / 4)).epsilon, std::sqrt(2.0), 1e-14);
  const auto rep = defect(z2_scalar(kPi / 4));
  ASSERT_TRUE(rep.argmax_pair);
  EXPECT_EQ(*rep.argmax_pair, std::make_pair(1, 1));
}

TEST(Defect, RowDefectMaximumIsDefect) {
  const auto pi = regular_representation(FiniteGroup::symmetric(3));
  const auto phi = perturb_representation(pi, 0.1, 3).map;
  double best = 0;
  for (int x : phi.domain()) best = std::max(best, row_defect(phi, x));
  EXPECT_NEAR(best, defect(phi).epsilon, 1e-15);
}

TEST(Defect, TruncatedDomainRecordsExclusions) {
  const FreeGroup f2(2);
  const std::vector<Operator> gens{Operator::scalar(std::polar(1.0, 0.3)), Operator::scalar(std::polar(1.0, 1.1))};
  const auto pi = representation_from_generators(f2, f2.ball(2), std::span<const Operator>(gens));
  const auto rep = defect(pi);
  EXPECT_LT(rep.epsilon, 1e-14);
  EXPECT_GT(rep.pairs_excluded, 0u);
  EXPECT_EQ(rep.pairs_scanned + rep.pairs_excluded, pi.size() * pi.size());
  EXPECT_NE(rep.domain_note.find("excluded"), std::string::npos);
}

TEST(RepresentationFromGenerators, LatticeAndFreeGroup) {
  Rng rng = make_rng(4);
  const std::vector<Operator> u{random_unitary(3, rng), random_unitary(3, rng)};
  const FreeGroup f2(2);
  const auto pi = representation_from_generators(f2, f2.ball(3), std::span<const Operator>(u));
  EXPECT_LT(defect(pi).epsilon, 1e-12);
  EXPECT_LT(op_norm(pi.at(parse_word("aB")) - u[0] * u[1].adjoint()), 1e-13);
  const IntegerLattice z1(1);
  const std::vector<Operator> w{Operator::scalar(std::polar(1.0, 0.7))};
  const auto chi = representation_from_generators(z1, z1.ball(4), std::span<const Operator>(w));
  EXPECT_LT(std::abs(chi.at({-3})(0, 0) - std::polar(1.0, -2.1)), 1e-14);
}

TEST(PerturbRepresentation, ZeroTargetReturnsInput) {
  const auto pi = regular_representation(FiniteGroup::cyclic(4));
  const auto p = perturb_representation(pi, 0.0, 9);
  for (std::size_t i = 0; i < pi.size(); ++i) EXPECT_EQ(p.map.values()[i], pi.values()[i]);
  EXPECT_EQ(p.achieved_defect, 0.0);
}

TEST(PerturbRepresentation, CalibratedUnitaryAndDeterministic) {
  for (const auto& g : {FiniteGroup::cyclic(6), FiniteGroup::symmetric(3), FiniteGroup::dihedral(4)}) {
    const auto pi = regular_representation(g);
    for (double eps : {0.01, 0.05, 0.1}) {
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto p = perturb_representation(pi, eps, seed);
        const double measured = defect(p.map).epsilon;
        EXPECT_LE(measured, eps);
        EXPECT_GE(measured, 0.5 * eps);
        EXPECT_NEAR(measured, p.achieved_defect, 1e-15);
        EXPECT_TRUE(p.map.is_unitary(1e-10));
        EXPECT_EQ(p.map.at(0), Operator::identity(g.order()));
        const auto again = perturb_representation(pi, eps, seed);
        for (std::size_t i = 0; i < pi.size(); ++i) EXPECT_EQ(again.map.values()[i], p.map.values()[i]);
      }
    }
  }
}

TEST(PerturbRepresentation, RejectsBadInputs) {
  const auto pi = regular_representation(FiniteGroup::cyclic(3));
  EXPECT_THROW(perturb_representation(pi, -0.1, 1), InvalidInput);
  EXPECT_THROW(perturb_representation(pi, 1.5, 1), InvalidInput);
  EXPECT_THROW(perturb_representation(z2_values(1.0, 2.0), 0.1, 1), InvalidInput);
}

TEST(PdDefect, ScalarGramMatrices) {
  const double theta = 0.9;
  const auto psi = z2_values(1.0, std::cos(theta));
  const auto rep = pd_defect(psi, {0, 1});
  EXPECT_NEAR(rep.min_eigenvalue, 1 - std::abs(std::cos(theta)), 1e-14);
  EXPECT_TRUE(rep.verdict);
  const auto bad = pd_defect(z2_values(1.0, 1.5), {0, 1});
  EXPECT_NEAR(bad.min_eigenvalue, -0.5, 1e-14);
  EXPECT_FALSE(bad.verdict);
}

TEST(PdDefect, GenuineRepresentationsArePositive) {
  for (const auto& g : {FiniteGroup::symmetric(3), FiniteGroup::dihedral(4)}) {
    const auto pi = regular_representation(g);
    EXPECT_GE(pd_defect(pi, g.elements()).min_eigenvalue, -1e-12);
    const auto gb = gram_block(pi, g.elements());
    for (int i = 0; i < g.order(); ++i)
      EXPECT_EQ(Operator(gb.matrix.block(i * g.order(), i * g.order(), g.order(), g.order())), pi.at(0));
  }
}

TEST(PdDefect, InterlacingUnderSampleRefinement) {
  const auto g = FiniteGroup::symmetric(3);
  const auto phi = perturb_representation(regular_representation(g), 0.1, 5).map;
  // A non-positive map built from phi: its values are only almost positive
  // definite, so both small and large samples give informative eigenvalues.
  std::vector<Operator> vals;
  for (int x : g.elements()) vals.push_back(0.5 * (phi.at(x) + phi.at(g.inverse(x)).adjoint()));
  const OperatorMap<FiniteGroup> psi(g, g.elements(), vals);
  const auto small = pd_defect(psi, {0, 1}, 1e-9, 1e-6);
  const auto large = pd_defect(psi, {0, 1, 2, 3}, 1e-9, 1e-6);
  EXPECT_LE(large.min_eigenvalue, small.min_eigenvalue + 1e-9);
}

TEST(PdDefect, VerdictInvariantUnderPositiveScaling) {
  const auto g = FiniteGroup::cyclic(4);
  const auto pi = regular_representation(g);
  for (double c : {0.1, 3.0}) {
    std::vector<Operator> vals;
    for (const auto& v : pi.values()) vals.push_back(c * v);
    const OperatorMap<FiniteGroup> scaled(g, g.elements(), vals);
    EXPECT_EQ(pd_defect(scaled, g.elements()).verdict, pd_defect(pi, g.elements()).verdict);
  }
  const auto bad = z2_values(1.0, 1.5);
  const auto bad3 = z2_values(3.0, 4.5);
  EXPECT_EQ(pd_defect(bad, {0, 1}).verdict, pd_defect(bad3, {0, 1}).verdict);
}

TEST(Proximity, ScalarDistance) {
  const double theta = 0.7;
  EXPECT_NEAR(proximity(z2_scalar(theta), z2_values(1.0, std::cos(theta))), std::abs(std::sin(theta)), 1e-14);
  EXPECT_EQ(proximity(z2_scalar(theta), z2_scalar(theta)), 0.0);
  EXPECT_THROW(proximity(z2_scalar(theta), regular_representation(FiniteGroup::cyclic(2))), InvalidInput);
}

TEST(IsUnital, IdentityAtE) {
  EXPECT_TRUE(is_unital(z2_scalar(0.2)));
  EXPECT_FALSE(is_unital(z2_values(0.9, 1.0)));
}
