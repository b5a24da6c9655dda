#include <gtest/gtest.h>

#include "tqf/represent.hpp"

using namespace tqf;

namespace {

// Values of f over a box, as a membership table on [0, N].
Membership box_oracle(const TernaryForm& f, i64 N, i64 box) {
  Membership t(static_cast<std::size_t>(N) + 1, 0);
  for (i64 x = -box; x <= box; ++x)
    for (i64 y = -box; y <= box; ++y)
      for (i64 z = -box; z <= box; ++z) {
        i64 v = evaluate(f, {x, y, z});
        if (v <= N) t[static_cast<std::size_t>(v)] = 1;
      }
  return t;
}

i64 from_rank(i64 k) { return k % 2 == 1 ? (k + 1) / 2 : -(k / 2); }

// First solution in the order x, y, z over 0, 1, -1, 2, -2, ... inside a box.
std::optional<Vec3> first_in_order(const TernaryForm& f, i64 m, i64 box) {
  for (i64 kx = 0; kx <= 2 * box; ++kx)
    for (i64 ky = 0; ky <= 2 * box; ++ky)
      for (i64 kz = 0; kz <= 2 * box; ++kz) {
        Vec3 v{from_rank(kx), from_rank(ky), from_rank(kz)};
        if (evaluate(f, v) == m) return v;
      }
  return std::nullopt;
}

const std::vector<TernaryForm>& sample_forms() {
  static const std::vector<TernaryForm> forms{make_form(1, 1, 2),       make_form(1, 2, 5),
                                              make_form(1, 2, 3, 2),    make_form(2, 2, 3, 2, 2),
                                              make_form(1, 1, 6),       make_form(3, 4, 7, 2, -2, 2),
                                              make_form(2, 10, 3, 0, 2, 8)};
  return forms;
}

}  // namespace

TEST(FindRepresentation, Examples) {
  EXPECT_FALSE(find_representation(make_form(1, 1, 3), 6));
  EXPECT_EQ(find_representation(make_form(1, 2, 5), 1), (Vec3{1, 0, 0}));
  EXPECT_EQ(find_representation(make_form(1, 1, 5), 7), (Vec3{1, 1, 1}));
  EXPECT_EQ(find_representation(make_form(1, 1, 2), 0), (Vec3{0, 0, 0}));
}

TEST(FindRepresentation, RangeErrors) {
  EXPECT_THROW(find_representation(make_form(1, 1, 1), -1), invalid_input);
  EXPECT_THROW(find_representation(make_form(1, 1, 1), 1'000'000'001), invalid_input);
  EXPECT_THROW(find_representation(TernaryForm{1, 1, 1, 3, 0, 0}, 1), invalid_input);
}

TEST(FindRepresentation, MatchesOrderedBoxSearch) {
  for (const auto& f : sample_forms())
    for (i64 m = 0; m <= 150; ++m) {
      auto got = find_representation(f, m);
      auto want = first_in_order(f, m, 14);
      ASSERT_EQ(got, want) << format_form(f) << " m=" << m;
    }
}

TEST(FindRepresentation, LargeValues) {
  TernaryForm f = make_form(1, 1, 1);
  for (i64 m : {999'999'998LL, 1'000'000'000LL, 123'456'789LL, 10'000'007LL, 9'999'999LL}) {
    auto v = find_representation(f, m);
    ASSERT_EQ(v.has_value(), !is_excluded({4, 8, {7}}, m));
    if (v) {
      EXPECT_EQ(evaluate(f, *v), m);
    }
  }
}

TEST(RepresentedSet, Examples) {
  Membership t = represented_set(make_form(1, 1, 2), 16);
  EXPECT_EQ(t[14], 0);
  for (i64 v : {0, 1, 2, 3, 4, 6, 8, 9, 11, 12, 16}) EXPECT_EQ(t[v], 1) << v;
  EXPECT_EQ(represented_set(make_form(1, 2, 2, 2), 5)[5], 0);
  EXPECT_EQ(represented_set(make_form(3, 5, 7), 0), Membership{1});
}

TEST(RepresentedSet, MatchesBoxOracle) {
  for (const auto& f : sample_forms()) EXPECT_EQ(represented_set(f, 300), box_oracle(f, 300, 25)) << format_form(f);
}

TEST(RepresentedSet, IndependentOfWorkerCount) {
  for (const auto& f : sample_forms()) {
    Membership one = represented_set(f, 20'000, 1);
    for (unsigned jobs : {2u, 3u, 7u}) EXPECT_EQ(represented_set(f, 20'000, jobs), one) << format_form(f);
  }
}

TEST(RepresentedSet, AgreesWithPointQueries) {
  TernaryForm f = make_form(1, 2, 3, 2);
  Membership t = represented_set(f, 2000);
  for (i64 m = 0; m <= 2000; ++m) ASSERT_EQ(t[m] != 0, represents(f, m)) << m;
}

TEST(RepresentedSet, RangeErrors) {
  EXPECT_THROW(represented_set(make_form(1, 1, 1), -1), invalid_input);
  EXPECT_THROW(represented_set(make_form(1, 1, 1), 1'000'001), invalid_input);
  EXPECT_THROW(represented_set(make_form(1, 1, 1), 10, 0), invalid_input);
}

TEST(Membership, RunLengthRoundTrip) {
  Membership t = represented_set(make_form(1, 1, 2), 16);
  std::string text = membership_to_rle(t);
  EXPECT_EQ(text.substr(0, text.find('\n')), "tqf-membership 16");
  EXPECT_EQ(membership_from_rle(text), t);
  // 0 present, so the leading absent run is empty
  EXPECT_EQ(text.substr(text.find('\n') + 1, 2), "0,");
  for (const auto& f : sample_forms()) {
    Membership big = represented_set(f, 5000);
    ASSERT_EQ(membership_from_rle(membership_to_rle(big)), big);
  }
}

TEST(Membership, RunLengthErrors) {
  EXPECT_THROW(membership_from_rle("nope 3\n1,2\n"), parse_error);
  EXPECT_THROW(membership_from_rle("tqf-membership 3\n1,2\n"), parse_error);
  EXPECT_THROW(membership_from_rle("tqf-membership 3\n1,x,2\n"), parse_error);
  EXPECT_THROW(membership_from_rle("tqf-membership 3\n1,-1,3\n"), parse_error);
}

TEST(IsExcluded, Examples) {
  ExcludedSpec f1{25, 25, {10, 15}};
  EXPECT_TRUE(is_excluded(f1, 250));
  EXPECT_TRUE(is_excluded(f1, 35));
  EXPECT_FALSE(is_excluded({4, 16, {14}}, 7));
  EXPECT_TRUE(is_excluded({4, 16, {14}}, 14 * 64));
  EXPECT_FALSE(is_excluded({4, 16, {14}}, 28));
  EXPECT_THROW(is_excluded(f1, 0), invalid_input);
}

TEST(IsExcluded, ScalingStability) {
  for (const auto& e : registry())
    for (i64 m = 1; m <= 10'000; ++m) ASSERT_EQ(is_excluded(e.spec, e.spec.s * m), is_excluded(e.spec, m)) << e.id << " " << m;
}

TEST(Registry, Entries) {
  const auto& reg = registry();
  ASSERT_EQ(reg.size(), 11u);
  for (const auto& e : reg) {
    EXPECT_EQ(determinant(e.target), e.D) << e.id;
    for (i64 r : e.spec.R) EXPECT_LT(r, e.spec.M);
  }
  EXPECT_EQ(find_entry("1e").spec, (ExcludedSpec{4, 16, {14}}));
  EXPECT_EQ(find_entry("2b").spec, (ExcludedSpec{25, 25, {5, 20}}));
  EXPECT_EQ(find_entry("3sq").spec, (ExcludedSpec{4, 8, {7}}));
  EXPECT_EQ(find_entry("3sq").kind, EntryKind::bonus);
  EXPECT_EQ(find_entry("aux-d3q2").kind, EntryKind::lemma_only);
  EXPECT_FALSE(find_entry("aux-d3q2").separation);
  EXPECT_EQ(find_entry("1b").separation, (Separation{5, 8}));
  EXPECT_THROW(find_entry("9z"), invalid_input);
}

TEST(Registry, CharacterizationsHoldToTenThousand) {
  for (const auto& e : registry()) {
    Membership t = represented_set(e.target, 10'000);
    for (i64 m = 1; m <= 10'000; ++m) ASSERT_EQ(t[m] != 0, !is_excluded(e.spec, m)) << e.id << " m=" << m;
  }
}

TEST(Registry, SeparationResidueMissedByOddSiblings) {
  for (const auto& e : registry()) {
    if (!e.separation) continue;
    for (const auto& cls : enumerate_classes(e.D)) {
      if (is_equivalent(cls, e.target)) continue;
      Membership t = represented_set(cls, 10'000);
      for (i64 m = e.separation->E; m <= 10'000; m += e.separation->M)
        ASSERT_EQ(t[m], 0) << e.id << " sibling " << format_form(cls) << " m=" << m;
    }
  }
}
