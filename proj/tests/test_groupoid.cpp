#include <gtest/gtest.h>

#include <set>

#include "gql/corpus.hpp"
#include "gql/error.hpp"
#include "gql/groupoid.hpp"

using namespace gql;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::ParseError;
}

ExplicitDescription z2_description() {
  ExplicitDescription d;
  d.elements = {"e", "u"};
  d.units = {"e"};
  d.src = {{"e", "e"}, {"u", "e"}};
  d.rng = d.src;
  d.inv = {{"e", "e"}, {"u", "u"}};
  d.compose = {{"e", "e", "e"}, {"e", "u", "u"}, {"u", "e", "u"}, {"u", "u", "e"}};
  return d;
}

}  // namespace

TEST(BuildGroupoid, TrivialGroup) {
  ExplicitDescription d;
  d.elements = {"e"};
  d.units = {"e"};
  d.src = d.rng = d.inv = {{"e", "e"}};
  d.compose = {{"e", "e", "e"}};
  auto g = build_groupoid(d);
  EXPECT_EQ(g->size(), 1);
  EXPECT_EQ(g->unit_count(), 1);
}

TEST(BuildGroupoid, Z2FromTables) {
  auto g = build_groupoid(z2_description());
  EXPECT_EQ(g->size(), 2);
  EXPECT_EQ(g->unit_count(), 1);
  const Elem u = g->index_of("u");
  EXPECT_EQ(g->compose(u, u), g->index_of("e"));
}

TEST(BuildGroupoid, ComposeDefinedOffComposablePairs) {
  // Two isolated units x, y with a bogus product x*y.
  ExplicitDescription d;
  d.elements = {"x", "y"};
  d.units = {"x", "y"};
  d.src = d.rng = d.inv = {{"x", "x"}, {"y", "y"}};
  d.compose = {{"x", "x", "x"}, {"y", "y", "y"}, {"x", "y", "x"}};
  try {
    build_groupoid(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AxiomViolation);
    EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos);
  }
}

TEST(BuildGroupoid, RejectsBrokenInverse) {
  auto d = z2_description();
  d.inv["u"] = "e";
  EXPECT_EQ(kind_of([&] { build_groupoid(d); }), ErrorKind::AxiomViolation);
}

TEST(BuildGroupoid, RejectsNonAssociativeTable) {
  // Unit laws and inverses hold, associativity fails: a loop of order 5 that is not a group.
  const std::vector<std::vector<int>> loop = {
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  ExplicitDescription d;
  for (int i = 0; i < 5; ++i) d.elements.push_back("g" + std::to_string(i));
  d.units = {"g0"};
  for (const auto& e : d.elements) {
    d.src[e] = "g0";
    d.rng[e] = "g0";
    d.inv[e] = e;
  }
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) d.compose.push_back({d.elements[i], d.elements[j], d.elements[loop[i][j]]});
  try {
    build_groupoid(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AxiomViolation);
    EXPECT_NE(std::string(e.what()).find("associativity"), std::string::npos);
  }
}

TEST(PairGroupoid, Sizes) {
  const std::vector<std::string> one{"a"}, two{"a", "b"}, three{"a", "b", "c"};
  EXPECT_EQ(pair_groupoid(one)->size(), 1);
  auto g2 = pair_groupoid(two);
  EXPECT_EQ(g2->size(), 4);
  EXPECT_EQ(g2->unit_count(), 2);
  EXPECT_EQ(g2->inv(g2->index_of("(a,b)")), g2->index_of("(b,a)"));
  auto g3 = pair_groupoid(three);
  EXPECT_EQ(g3->size(), 9);
  EXPECT_EQ(source_fibre(*g3, g3->index_of("(c,c)")).size(), 3u);
  EXPECT_EQ(kind_of([] { pair_groupoid(std::vector<std::string>{}); }), ErrorKind::EmptySet);
}

TEST(PairGroupoid, CompositionLaw) {
  const std::vector<std::string> pts{"a", "b", "c"};
  auto g = pair_groupoid(pts);
  for (const auto& x : pts)
    for (const auto& y : pts)
      for (const auto& z : pts) {
        EXPECT_EQ(g->compose(g->index_of(pair_id(x, y)), g->index_of(pair_id(y, z))), g->index_of(pair_id(x, z)));
      }
  EXPECT_EQ(g->src(g->index_of("(a,b)")), g->index_of("(b,b)"));
  EXPECT_EQ(g->rng(g->index_of("(a,b)")), g->index_of("(a,a)"));
}

TEST(GroupGroupoid, CyclicGroups) {
  auto z2 = group_groupoid(cyclic_group(2));
  EXPECT_EQ(z2->size(), 2);
  EXPECT_EQ(z2->unit_count(), 1);
  auto z4 = group_groupoid(cyclic_group(4));
  const Elem g = z4->index_of("1");
  EXPECT_EQ(z4->inv(g), z4->compose(g, z4->compose(g, g)));
  for (Elem a = 0; a < z4->size(); ++a)
    for (Elem b = 0; b < z4->size(); ++b) EXPECT_TRUE(z4->composable(a, b));
}

TEST(GroupGroupoid, S3MatchesPermutationComposition) {
  auto g = group_groupoid(symmetric_group_s3());
  EXPECT_EQ(g->size(), 6);
  // Independent oracle: compose permutations given in one-line notation.
  auto perm = [](const std::string& s) { return std::array<int, 3>{s[0] - '1', s[1] - '1', s[2] - '1'}; };
  bool noncommuting = false;
  for (Elem a = 0; a < 6; ++a)
    for (Elem b = 0; b < 6; ++b) {
      const auto pa = perm(g->name(a)), pb = perm(g->name(b));
      std::string expect;
      for (int i = 0; i < 3; ++i) expect += static_cast<char>('1' + pa[pb[i]]);
      EXPECT_EQ(g->name(g->compose(a, b)), expect);
      if (g->compose(a, b) != g->compose(b, a)) noncommuting = true;
    }
  EXPECT_TRUE(noncommuting);
}

TEST(GroupGroupoid, RejectsNonGroups) {
  GroupTable t{{"a", "b"}, {{"a", "b"}, {"b", "b"}}};
  EXPECT_EQ(kind_of([&] { group_groupoid(t); }), ErrorKind::NotAGroup);
  GroupTable open{{"a", "b"}, {{"a", "b"}, {"b", "c"}}};
  EXPECT_EQ(kind_of([&] { group_groupoid(open); }), ErrorKind::NotAGroup);
}

TEST(TransformationGroupoid, TrivialActionOnTwoPoints) {
  const std::vector<std::string> space{"p", "q"};
  auto g = transformation_groupoid(space, cyclic_group(1), {{"p", "q"}});
  EXPECT_EQ(g->size(), 2);
  EXPECT_EQ(g->unit_count(), 2);
}

TEST(TransformationGroupoid, SwapAction) {
  auto e = swap_entry();
  const auto& g = *e.filt.groupoid();
  EXPECT_EQ(g.size(), 4);
  EXPECT_EQ(g.unit_count(), 2);
  // src((p,u)) = u^{-1} p = q.
  EXPECT_EQ(g.src(g.index_of("(p,1)")), g.index_of("(q,0)"));
}

TEST(TransformationGroupoid, SimplyTransitiveIsPairLike) {
  const std::vector<std::string> space{"0", "1", "2"};
  auto g = transformation_groupoid(space, cyclic_group(3), {{"0", "1", "2"}, {"1", "2", "0"}, {"2", "0", "1"}});
  EXPECT_EQ(g->size(), 9);
  EXPECT_TRUE(is_principal(*g));
  EXPECT_TRUE(is_transitive(*g));
  auto swap = swap_entry();
  EXPECT_TRUE(is_principal(*swap.filt.groupoid()));
  auto refl = reflection_entry();
  EXPECT_FALSE(is_principal(*refl.filt.groupoid()));
  EXPECT_FALSE(is_transitive(*refl.filt.groupoid()));
}

TEST(TransformationGroupoid, RejectsBadActions) {
  const std::vector<std::string> space{"p", "q"};
  // Not bijective.
  EXPECT_EQ(kind_of([&] { transformation_groupoid(space, cyclic_group(2), {{"p", "q"}, {"p", "p"}}); }),
            ErrorKind::NotAnAction);
  // Identity moves points.
  EXPECT_EQ(kind_of([&] { transformation_groupoid(space, cyclic_group(2), {{"q", "p"}, {"q", "p"}}); }),
            ErrorKind::NotAnAction);
  // Homomorphism failure: Z/3 acting by a transposition.
  const std::vector<std::string> three{"a", "b", "c"};
  EXPECT_EQ(kind_of([&] {
              transformation_groupoid(three, cyclic_group(3), {{"a", "b", "c"}, {"b", "a", "c"}, {"b", "a", "c"}});
            }),
            ErrorKind::NotAnAction);
}

TEST(SourceFibre, Basics) {
  const std::vector<std::string> two{"a", "b"};
  auto g = pair_groupoid(two);
  const auto& f = source_fibre(*g, g->index_of("(b,b)"));
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(g->name(f.members[0]), "(a,b)");
  EXPECT_EQ(g->name(f.members[1]), "(b,b)");
  EXPECT_EQ(kind_of([&] { source_fibre(*g, g->index_of("(a,b)")); }), ErrorKind::NotAUnit);
  auto z4 = group_groupoid(cyclic_group(4));
  EXPECT_EQ(source_fibre(*z4, z4->units()[0]).size(), 4u);
}

TEST(Invariants, FibresPartitionAndInverseInvolution) {
  for (const auto& entry : standard_corpus()) {
    const auto& g = *entry.filt.groupoid();
    std::size_t total = 0;
    std::set<Elem> seen;
    for (Elem x : g.units()) {
      const auto& f = source_fibre(g, x);
      EXPECT_NE(std::find(f.members.begin(), f.members.end(), x), f.members.end()) << entry.name;
      EXPECT_TRUE(std::is_sorted(f.members.begin(), f.members.end(),
                                 [&](Elem a, Elem b) { return g.name(a) < g.name(b); }));
      total += f.size();
      seen.insert(f.members.begin(), f.members.end());
    }
    EXPECT_EQ(total, static_cast<std::size_t>(g.size())) << entry.name;
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(g.size()));
    for (Elem e = 0; e < g.size(); ++e) {
      EXPECT_EQ(g.inv(g.inv(e)), e);
      EXPECT_EQ(g.src(g.inv(e)), g.rng(e));
      EXPECT_EQ(g.rng(g.inv(e)), g.src(e));
    }
  }
}

TEST(Bisection, Examples) {
  const std::vector<std::string> two{"a", "b"};
  auto g = pair_groupoid(two);
  EXPECT_TRUE(is_bisection(*g, g->units()));
  const std::vector<Elem> bad{g->index_of("(a,b)"), g->index_of("(a,a)")};
  EXPECT_FALSE(is_bisection(*g, bad));
  const std::vector<Elem> single{g->index_of("(a,b)")};
  EXPECT_TRUE(is_bisection(*g, single));
}

TEST(SetHelpers, ProductsAndSymmetry) {
  auto z4 = group_groupoid(cyclic_group(4));
  const std::vector<Elem> gen{z4->index_of("1"), z4->index_of("3")};
  EXPECT_TRUE(is_symmetric(*z4, gen));
  const auto sq = product_set(*z4, gen, gen);
  EXPECT_EQ(sq, (std::vector<Elem>{z4->index_of("0"), z4->index_of("2")}));
  const std::vector<Elem> half{z4->index_of("1")};
  EXPECT_FALSE(is_symmetric(*z4, half));
  const std::vector<std::string> ids{"0", "x"};
  EXPECT_EQ(kind_of([&] { resolve(*z4, ids); }), ErrorKind::DomainMismatch);
}
