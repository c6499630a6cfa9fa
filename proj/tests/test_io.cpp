#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "ulam/io.hpp"

using namespace ulam;

TEST(OperatorJson, RoundTrip) {
  Rng rng = make_rng(6);
  const Operator a(random_gaussian_matrix(3, 3, rng));
  const Json j = operator_to_json(a);
  EXPECT_EQ(j.at("dim"), 3);
  EXPECT_EQ(operator_from_json(Json::parse(j.dump())), a);
}

TEST(OperatorJson, ShorthandsAndErrors) {
  EXPECT_EQ(operator_from_json(Json(0.3)), Operator::scalar(0.3));
  EXPECT_EQ(operator_from_json(Json::parse(R"({"re": [[1, 0], [0, 1]]})")), Operator::identity(2));
  EXPECT_THROW(operator_from_json(Json::parse(R"({"re": [[1, 0]]})")), InvalidInput);
  EXPECT_THROW(operator_from_json(Json::parse(R"({"re": [[1]], "foo": 1})")), InvalidInput);
  EXPECT_THROW(operator_from_json(Json::parse(R"({"dim": 2, "re": [[1]]})")), InvalidInput);
  EXPECT_THROW(operator_from_json(Json::parse(R"("x")")), InvalidInput);
}

TEST(GroupDescriptor, NamesAndObjects) {
  EXPECT_EQ(std::get<FiniteGroup>(parse_group(Json("Z6"))), FiniteGroup::cyclic(6));
  EXPECT_EQ(std::get<FiniteGroup>(parse_group(Json("D4"))).order(), 8);
  EXPECT_EQ(std::get<FiniteGroup>(parse_group(Json("S3"))), FiniteGroup::symmetric(3));
  EXPECT_EQ(std::get<FiniteGroup>(parse_group(Json("Z2xZ4"))),
            FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(4)));
  EXPECT_EQ(std::get<FreeGroup>(parse_group(Json("F2"))).rank(), 2);
  EXPECT_EQ(std::get<IntegerLattice>(parse_group(Json("Z^2"))).dim(), 2);
  EXPECT_EQ(std::get<FiniteGroup>(parse_group(Json::parse(R"({"kind": "dihedral", "n": 3})"))).order(), 6);
  EXPECT_EQ(std::get<FiniteGroup>(parse_group(Json::parse(R"({"kind": "product", "factors": ["Z2", "Z3"]})"))).order(), 6);
  EXPECT_EQ(std::get<FiniteGroup>(parse_group(Json::parse(R"({"kind": "table", "table": [[0,1],[1,0]]})"))),
            FiniteGroup::cyclic(2));
  for (const char* bad : {"Q8", "Z", "Zx", "F", "Z^0", "Z-3"}) EXPECT_THROW(parse_group(Json(bad)), InvalidInput) << bad;
  EXPECT_THROW(parse_group(Json::parse(R"({"kind": "cyclic", "n": 3, "m": 1})")), InvalidInput);
  EXPECT_THROW(parse_group(Json::parse(R"({"kind": "weird"})")), InvalidInput);
  EXPECT_THROW(parse_group(Json::parse(R"({"kind": "product", "factors": ["Z2", "F2"]})")), InvalidInput);
}

TEST(GroupDescriptor, TableFiles) {
  const std::string txt = ::testing::TempDir() + "ulam_table.txt";
  {
    std::ofstream out(txt);
    out << "3\n0 1 2\n1 2 0\n2 0 1\n";
  }
  EXPECT_EQ(load_table(txt), FiniteGroup::cyclic(3));
  const std::string js = ::testing::TempDir() + "ulam_table.json";
  {
    std::ofstream out(js);
    out << R"({"table": [[0, 1], [1, 0]]})";
  }
  EXPECT_EQ(load_table(js), FiniteGroup::cyclic(2));
  {
    std::ofstream out(txt);
    out << "2\n0 1\n1\n";
  }
  EXPECT_THROW(load_table(txt), InvalidInput);
  EXPECT_THROW(load_table(::testing::TempDir() + "missing_table.txt"), InvalidInput);
  std::remove(txt.c_str());
  std::remove(js.c_str());
}

TEST(MapJson, RoundTripAcrossGroupKinds) {
  const auto pi = regular_representation(FiniteGroup::symmetric(3));
  const auto back = map_from_json(FiniteGroup::symmetric(3), Json::parse(map_to_json(pi).dump()));
  EXPECT_EQ(back.values(), pi.values());

  const FreeGroup f2(2);
  const auto words = OperatorMap<FreeGroup>::from_function(
      f2, f2.ball(1), [](const Word& w) { return Operator::scalar(static_cast<double>(w.length()) + 0.5); });
  const auto wb = map_from_json(f2, map_to_json(words));
  EXPECT_EQ(wb.domain(), words.domain());
  EXPECT_EQ(wb.values(), words.values());

  const IntegerLattice z2(2);
  const auto pts = OperatorMap<IntegerLattice>::from_function(z2, z2.ball(1), [](const Point& p) {
    return Operator::scalar(Complex(p[0], p[1]));
  });
  EXPECT_EQ(map_from_json(z2, map_to_json(pts)).values(), pts.values());
  EXPECT_THROW(map_from_json(FiniteGroup::cyclic(2), Json::parse(R"({"entries": [{"element": 5, "operator": 1}]})")),
               InvalidInput);
}

TEST(HullJson, Fields) {
  const PointSet ps({RVector::Zero(2), RVector::Ones(2)});
  const auto h = project_onto_hull(ps, RVector::Constant(2, 2.0));
  const Json j = hull_to_json(h, 2);
  EXPECT_FALSE(j.at("member").get<bool>());
  EXPECT_EQ(j.at("weights").size(), 2u);
  EXPECT_FALSE(j.at("witness").is_null());
  const auto back = point_set_from_json(point_set_to_json(ps));
  EXPECT_EQ(back.size(), 2u);
  EXPECT_THROW(point_set_from_json(Json::parse(R"({"ambient_dim": 3, "points": [[0, 0]]})")), InvalidInput);
}

TEST(Csv, Escaping) {
  Table t{{"a", "b"}, {{"1", "x,y"}, {"say \"hi\"", "2"}}};
  EXPECT_EQ(to_csv(t), "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",2\n");
}
