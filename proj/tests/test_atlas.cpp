#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace fqr;
using namespace fqr::test;

namespace {

const Quiver L1 = Quiver::loops(1);
const Quiver L2 = Quiver::loops(2);

std::string key_text(const Quiver& q, std::initializer_list<const char*> labels, const FramedShape& s) {
  PlueckerKey k;
  for (const char* l : labels) k.push_back(parse_path(q, s, l));
  return format_key(q, k);
}

Rational coord(const PlueckerVector<RationalField>& v, const Quiver& q, const FramedShape& s, std::initializer_list<const char*> labels) {
  PlueckerKey k;
  for (const char* l : labels) k.push_back(parse_path(q, s, l));
  int sign = canonicalize_key(k);
  Rational x = v.at(k.front().start).at(k);
  return sign > 0 ? x : Rational(-x);
}

// Independent essential set: chart rows are the universe paths outside S
// that are roots or have their prefix in S; essential keys differ from a
// skeleton in at most one such row.
std::set<std::pair<int, std::vector<FramedPath>>> essential_oracle(const Quiver& q, const FramedShape& shape) {
  auto atlas = ShapeAtlas::build(q, shape);
  std::set<std::pair<int, std::vector<FramedPath>>> out;
  for (const auto& s : atlas.skeleta) {
    for (int i = 1; i <= q.vertex_count(); ++i) {
      const auto& base = s.at(i);
      std::vector<FramedPath> rows;
      for (const auto& p : atlas.universe.gamma_tilde_at(i)) {
        if (s.contains(p)) continue;
        auto pre = p.prefix(q);
        if (!pre || s.contains(*pre)) rows.push_back(p);
      }
      std::vector<FramedPath> universe = atlas.universe.gamma_tilde_at(i);
      detail::for_each_subset(universe.size(), base.size(), [&](const std::vector<std::size_t>& idx) {
        std::vector<FramedPath> key;
        for (auto r : idx) key.push_back(universe[r]);
        std::size_t outside = 0;
        bool allowed = true;
        for (const auto& p : key) {
          if (std::binary_search(base.begin(), base.end(), p)) continue;
          ++outside;
          allowed = allowed && std::find(rows.begin(), rows.end(), p) != rows.end();
        }
        if (outside <= 1 && allowed) out.insert({i, key});
      });
    }
  }
  return out;
}

}  // namespace

TEST(Pluecker, TwoFramingsFixture) {
  auto rep = loop_rep(QQ, {qm({{1, 2}, {3, 4}})}, qm({{1, 0}, {0, 1}}));
  auto b = build_row_bundle(rep, path_universe(L1, rep.shape).gamma_tilde);
  auto v = pluecker(b);
  EXPECT_EQ(v.at(1).size(), 15u);
  EXPECT_EQ(coord(v, L1, rep.shape, {"f1.1", "f1.2"}), 1);
  EXPECT_EQ(coord(v, L1, rep.shape, {"f1.1", "f1.1*a"}), 2);
  EXPECT_EQ(coord(v, L1, rep.shape, {"f1.1*a", "f1.1"}), -2);
}

TEST(Pluecker, DeficientVertexIsZero) {
  auto rep = loop_rep(QQ, {qm({{0, 0}, {0, 1}})}, qm({{1, 0}, {0, 0}}));
  auto v = pluecker(build_row_bundle(rep, path_universe(L1, rep.shape).gamma_tilde));
  for (const auto& [k, x] : v.at(1)) EXPECT_EQ(x, 0);
}

TEST(Pluecker, ScalesByInverseDeterminant) {
  std::mt19937_64 rng(51);
  auto q = two_vertex_quiver();
  FramedShape s{{2, 1}, {1, 1}};
  auto u = path_universe(q, s).gamma_tilde;
  for (int t = 0; t < 20; ++t) {
    auto rep = any_rep(QQ, q, s, rng);
    auto g = random_group_element(QQ, s, rng, 3);
    auto before = pluecker(build_row_bundle(rep, u));
    auto after = pluecker(build_row_bundle(act(g, rep), u));
    for (int i = 1; i <= 2; ++i) {
      Rational factor = 1 / determinant(g.at(i));
      for (const auto& [k, x] : before.at(i)) EXPECT_EQ(after.at(i).at(k), x * factor);
    }
  }
}

TEST(Pluecker, CanonicalizeKeySign) {
  auto s = loop_shape(2, 2);
  PlueckerKey k{path(L1, s, "f1.1*a"), path(L1, s, "f1.2")};
  EXPECT_EQ(canonicalize_key(k), -1);
  EXPECT_EQ(format_key(L1, k), "p[f1.2,f1.1*a]");
  PlueckerKey dup{path(L1, s, "f1.2"), path(L1, s, "f1.2")};
  EXPECT_EQ(canonicalize_key(dup), 0);
}

TEST(ChartMembership, HoldsOnImages) {
  std::mt19937_64 rng(52);
  std::vector<std::pair<Quiver, FramedShape>> cases = {
      {L1, loop_shape(3, 1)}, {L1, loop_shape(2, 2)}, {L2, loop_shape(2, 1)}, {two_vertex_quiver(), {{2, 1}, {1, 0}}}};
  for (const auto& [q, s] : cases) {
    auto atlas = ShapeAtlas::build(q, s);
    for (int t = 0; t < 10; ++t) {
      auto rep = stable_rep(QQ, q, s, rng);
      auto b = build_row_bundle(rep, atlas.universe.gamma_tilde);
      for (const auto& sk : skeleta_of_rep(rep, atlas)) EXPECT_TRUE(verify_chart_membership(q, b, sk));
    }
  }
}

TEST(ChartMembership, PerturbedRowFails) {
  auto rep = loop_rep(QQ, {qm({{1, 2}, {3, 4}})}, qm({{1, 0}, {0, 1}}));
  auto b = build_row_bundle(rep, path_universe(L1, rep.shape).gamma_tilde);
  auto s = skel(L1, rep.shape, {"f1.1", "f1.2"});
  EXPECT_TRUE(verify_chart_membership(L1, b, s));
  auto r = *b.index_of(path(L1, rep.shape, "f1.2*a*a"));
  b.block(1)(r, 0) += 1;
  EXPECT_FALSE(verify_chart_membership(L1, b, s));
}

TEST(Classification, ReferenceCounts) {
  auto c42 = classify_coordinates(L1, loop_shape(2, 2));
  EXPECT_EQ(c42.total(), 15u);
  EXPECT_EQ(c42.essential.size(), 9u);
  EXPECT_EQ(c42.exceed.size(), 6u);
  auto c43 = classify_coordinates(L2, loop_shape(2, 1));
  EXPECT_EQ(c43.total(), 21u);
  EXPECT_EQ(c43.essential.size(), 11u);
  EXPECT_EQ(c43.exceed.size(), 10u);
  for (int m = 1; m <= 5; ++m) {
    auto c = classify_coordinates(L1, loop_shape(m, 1));
    EXPECT_EQ(c.total(), std::size_t(m + 1));
    EXPECT_TRUE(c.exceed.empty());
  }
}

TEST(Classification, TwoFramingsExceedSet) {
  auto s = loop_shape(2, 2);
  auto c = classify_coordinates(L1, s);
  std::set<std::string> got;
  for (const auto& [v, k] : c.exceed) got.insert(format_key(L1, k));
  EXPECT_EQ(got, (std::set<std::string>{key_text(L1, {"f1.1*a", "f1.2*a"}, s), key_text(L1, {"f1.1", "f1.2*a*a"}, s),
                                        key_text(L1, {"f1.2", "f1.1*a*a"}, s), key_text(L1, {"f1.1*a", "f1.2*a*a"}, s),
                                        key_text(L1, {"f1.2*a", "f1.1*a*a"}, s), key_text(L1, {"f1.1*a*a", "f1.2*a*a"}, s)}));
}

TEST(Classification, MatchesOracle) {
  std::vector<std::pair<Quiver, FramedShape>> cases = {
      {L1, loop_shape(2, 2)}, {L2, loop_shape(2, 1)}, {L1, loop_shape(3, 2)}, {L2, loop_shape(3, 1)},
      {Quiver::loops(3), loop_shape(2, 1)}, {two_vertex_quiver(), {{2, 1}, {1, 0}}}, {two_vertex_quiver(), {{1, 1}, {1, 1}}}};
  for (const auto& [q, s] : cases) {
    auto atlas = ShapeAtlas::build(q, s);
    if (atlas.universe.gamma_tilde.size() > 12) continue;
    auto c = classify_coordinates(atlas);
    std::set<std::pair<int, std::vector<FramedPath>>> got(c.essential.begin(), c.essential.end());
    EXPECT_EQ(got, essential_oracle(q, s));
    for (const auto& e : c.essential) EXPECT_FALSE(c.exceed.contains(e));
    std::size_t all = 0;
    for (const auto& keys : c.all) all += keys.size();
    EXPECT_EQ(c.total(), all);
  }
}

TEST(Classification, CramerConsistency) {
  std::mt19937_64 rng(53);
  std::vector<std::pair<Quiver, FramedShape>> cases = {{L1, loop_shape(2, 2)}, {L2, loop_shape(2, 1)}, {two_vertex_quiver(), {{2, 1}, {1, 0}}}};
  for (const auto& [q, s] : cases) {
    auto atlas = ShapeAtlas::build(q, s);
    auto c = classify_coordinates(atlas);
    for (std::size_t si = 0; si < atlas.skeleta.size(); ++si) {
      const Skeleton& sk = atlas.skeleta[si];
      for (int t = 0; t < 10; ++t) {
        auto labels = chart_row_labels(q, sk);
        std::vector<QMatrix> coords;
        for (std::size_t i = 0; i < labels.size(); ++i) coords.push_back(random_matrix(QQ, labels[i].size(), static_cast<std::size_t>(s.alpha[i]), rng, 5));
        auto point = make_chart_point(q, sk, coords);
        auto rep = section(QQ, q, sk, point);
        auto v = pluecker(build_row_bundle(rep, atlas.universe.gamma_tilde));
        for (const auto& [key, provs] : c.provenance) {
          for (const auto& pv : provs) {
            if (pv.skeleton_index != si || !pv.replaced) continue;
            const auto& base = sk.at(pv.vertex);
            auto col = static_cast<std::size_t>(std::find(base.begin(), base.end(), *pv.replaced) - base.begin());
            Rational expected = pv.sign * v.at(pv.vertex).at(key.second) / v.at(pv.vertex).at(base);
            EXPECT_EQ(point.entry(*pv.replacement, col), expected);
          }
        }
      }
    }
  }
}

TEST(ChartDimension, Examples) {
  for (int m = 1; m <= 5; ++m) EXPECT_EQ(chart_dimension(L1, loop_shape(m, 1)).dimension, m);
  EXPECT_EQ(chart_dimension(L1, loop_shape(2, 2)).dimension, 4);
  EXPECT_EQ(chart_dimension(L2, loop_shape(2, 1)).dimension, 6);
  auto neg = chart_dimension(Quiver(2, {}), FramedShape{{1, 2}, {1, 0}});
  EXPECT_TRUE(neg.negative);
  EXPECT_TRUE(neg.per_chart.empty());
}

TEST(ChartDimension, LoopFormula) {
  for (int q = 0; q <= 3; ++q)
    for (int k = 0; k <= 3; ++k)
      for (int m = 1; m <= 3; ++m) {
        auto d = chart_dimension(Quiver::loops(q), loop_shape(m, k));
        EXPECT_EQ(d.dimension, m * (m * q + k - m));
        for (auto e : d.per_chart) EXPECT_EQ(static_cast<long>(e), d.dimension);
      }
}

TEST(Relations, ReferenceSetsVanish) {
  std::mt19937_64 rng(54);
  struct Case {
    Quiver q;
    FramedShape s;
    const char* file;
  };
  for (const auto& [q, s, file] : {Case{L1, loop_shape(2, 2), "relations/l12.json"}, Case{L1, loop_shape(2, 2), "relations/l12_exceed.json"},
                                   Case{L2, loop_shape(2, 1), "relations/l21.json"}}) {
    auto atlas = ShapeAtlas::build(q, s);
    std::vector<QRep> samples;
    for (int t = 0; t < 20; ++t) samples.push_back(stable_rep(QQ, q, s, rng, 5));
    auto rels = load_relations(file);
    auto report = verify_relations<RationalField>(rels, samples, atlas);
    EXPECT_TRUE(report.all_zero()) << file;
    // Over a prime field as well.
    PrimeField f(101);
    std::vector<FramedRep<PrimeField>> psamples;
    for (int t = 0; t < 10; ++t) psamples.push_back(stable_rep(f, q, s, rng, 50));
    EXPECT_TRUE(verify_relations<PrimeField>(rels, psamples, atlas).all_zero()) << file;
  }
}

TEST(Relations, AlternateFormsFailWhereExpected) {
  std::mt19937_64 rng(55);
  auto atlas42 = ShapeAtlas::build(L1, loop_shape(2, 2));
  auto atlas43 = ShapeAtlas::build(L2, loop_shape(2, 1));
  std::vector<QRep> s42, s43;
  for (int t = 0; t < 10; ++t) {
    s42.push_back(stable_rep(QQ, L1, loop_shape(2, 2), rng, 5));
    s43.push_back(stable_rep(QQ, L2, loop_shape(2, 1), rng, 5));
  }
  auto r42 = verify_relations<RationalField>(load_relations("relations/l12_exceed_alt.json"), s42, atlas42);
  std::vector<bool> vanish42;
  for (const auto& row : r42.values) vanish42.push_back(std::all_of(row.begin(), row.end(), [](const Rational& x) { return x == 0; }));
  EXPECT_EQ(vanish42, (std::vector<bool>{false, false, false, false, true}));
  auto r43 = verify_relations<RationalField>(load_relations("relations/l21_alt.json"), s43, atlas43);
  std::vector<bool> vanish43;
  for (const auto& row : r43.values) vanish43.push_back(std::all_of(row.begin(), row.end(), [](const Rational& x) { return x == 0; }));
  EXPECT_EQ(vanish43, (std::vector<bool>{false, false, true, true}));
}

TEST(Relations, OffLocusPerturbationDetected) {
  std::mt19937_64 rng(56);
  auto s = loop_shape(2, 2);
  auto atlas = ShapeAtlas::build(L1, s);
  auto rels = load_relations("relations/l12.json");
  auto rep = stable_rep(QQ, L1, s, rng, 5);
  auto v = pluecker(build_row_bundle(rep, atlas.universe.gamma_tilde));
  for (const auto& r : rels) EXPECT_EQ(evaluate_relation(QQ, L1, s, r, v), 0);
  PlueckerKey k{path(L1, s, "f1.1*a"), path(L1, s, "f1.1*a*a")};
  v.by_vertex[0][k] += 1;
  std::size_t broken = 0;
  for (const auto& r : rels) broken += evaluate_relation(QQ, L1, s, r, v) != 0;
  EXPECT_GE(broken, 1u);
}

TEST(Relations, UnknownVariable) {
  auto s = loop_shape(2, 2);
  PlueckerVector<RationalField> v;
  v.by_vertex.resize(1);
  auto code_of = [&](const std::string& label) {
    RelationPoly r{"x", {{1, {{label, 1}}}}};
    try {
      evaluate_relation(QQ, L1, s, r, v);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::SchemaError;
  };
  EXPECT_EQ(code_of("p[f1.1,f1.9]"), ErrorCode::UnknownVariable);
  EXPECT_EQ(code_of("p[f1.1]"), ErrorCode::UnknownVariable);
  EXPECT_EQ(code_of("q[f1.1,f1.2]"), ErrorCode::UnknownVariable);
  EXPECT_EQ(code_of("p[f1.1,f1.1]"), ErrorCode::UnknownVariable);
  EXPECT_EQ(code_of("p[f1.1,f1.2]"), ErrorCode::UnknownVariable);  // not in this (empty) vector
}
