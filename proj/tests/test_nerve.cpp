#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "hinf/nerve.hpp"

using namespace hinf;

namespace {

Word w(std::string_view text) { return parse_word(text, builtin_presentation("F2")); }

// Applies the chain map to the boundary of each fine simplex and compares with
// the boundary of its image.
bool commutes(const CoverNerve& fine, const CoverNerve& coarse, const RefinementChainMap& F, const PrimeField& f)
{
    for (int d = 1; d <= fine.complex.top_dim() && d < static_cast<int>(F.chain_matrices.size()); ++d)
        for (std::uint32_t j = 0; j < fine.complex.count(d); ++j) {
            const Chain img{d, F.chain_matrices[d][j]};
            const Chain lhs = boundary(coarse.complex, img, f);
            Chain rhs{d - 1, {}};
            for (const auto& e : boundary_of_simplex(fine.complex, d, j, f).terms)
                axpy(rhs.terms, e.value, F.chain_matrices[d - 1][e.index], f);
            if (!(lhs == rhs))
                return false;
        }
    return true;
}

}  // namespace

TEST_CASE("scale parsing")
{
    CHECK(Scale::parse("0.3").value == doctest::Approx(0.3));
    CHECK(Scale::parse("e^-2").exponent == -2);
    CHECK(Scale::parse("e-2").exponent == -2);
    CHECK(Scale::parse("exp(-3)").exponent == -3);
    CHECK(Scale::parse("e^-2").value == doctest::Approx(std::exp(-2.0)));
    CHECK(Scale::parse("0.45").to_string() == "0.45");
    CHECK(Scale::exp(-1).to_string() == "e^-1");
    CHECK_THROWS_AS(Scale::parse("e^x"), Error);
    CHECK_THROWS_AS(Scale::parse("abc"), Error);
}

TEST_CASE("visual distance examples")
{
    auto d = visual_distance(w("aabab"), w("aaba'b"));
    REQUIRE(d.prefix.has_value());
    CHECK(*d.prefix == 3);
    CHECK(d.value == doctest::Approx(std::exp(-3.0)));
    CHECK(visual_distance(w("abab"), w("abab")).value == 0);
    CHECK_FALSE(visual_distance(w("abab"), w("abab")).prefix.has_value());
    CHECK(visual_distance(w("ab"), w("ba")).value == doctest::Approx(1.0));
}

TEST_CASE("metric samples are validated")
{
    CHECK_THROWS_AS(MetricSample("bad", MetricKind::Linear, 1, 3, {0, 1, 5, 1, 0, 1, 5, 1, 0}), Error);
    CHECK_THROWS_AS(MetricSample("asym", MetricKind::Linear, 1, 2, {0, 1, 2, 0}), Error);
    CHECK_NOTHROW(MetricSample("ok", MetricKind::Linear, 1, 3, {0, 1, 2, 1, 0, 1, 2, 1, 0}));
    CHECK(parse_sample("builtin:circle64").size() == 64);
    CHECK(parse_sample("circle n=10").size() == 10);
    CHECK(parse_sample("cantor k=2 depth=3").size() == 36);
    CHECK(parse_sample("point").size() == 1);
    CHECK_THROWS_AS(parse_sample("sphere"), Error);
}

TEST_CASE("nerve examples")
{
    const PrimeField f(2);
    MetricSample two("two", MetricKind::Linear, 1, 2, {0, 1, 1, 0});
    const int edge[] = {0, 1};
    CHECK_FALSE(witnessed_simplex(two, Scale::of(0.4), edge));
    CHECK(witnessed_simplex(two, Scale::of(1.5), edge));

    auto circle = circle_sample(64);
    auto N = build_nerve(circle, Scale::of(0.3), 2);
    for (int i = 0; i < 64; ++i)
        CHECK(N.spans(Simplex::from_unsorted(std::vector<int>{i, (i + 1) % 64})));
    CHECK(betti(N.complex, 1, f) == 1);

    // Ultrametric: the e^-2 nerve is a disjoint union of simplices, one per
    // 3-letter prefix (open balls of radius e^-2 hold rays agreeing in 3 letters).
    auto rays = boundary_ray_sample(2, 4);
    auto words = reduced_words(2, 4);
    std::set<Word> prefixes;
    for (const auto& u : words)
        prefixes.insert(Word(u.begin(), u.begin() + 3));
    auto C = build_nerve(rays, Scale::exp(-2), 2);
    CHECK(component_count(C.complex) == prefixes.size());
    CHECK(betti(C.complex, 1, f) == 0);
}

TEST_CASE("property: ultrametric law on ray samples")
{
    auto words = reduced_words(2, 5);
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    for (int k = 0; k < 5000; ++k) {
        const auto &u = words[pick(rng)], &v = words[pick(rng)], &x = words[pick(rng)];
        CHECK(visual_distance(u, x).value <= std::max(visual_distance(u, v).value, visual_distance(v, x).value));
    }
}

TEST_CASE("property: nerves grow with the scale")
{
    auto circle = circle_sample(64);
    auto a = build_nerve(circle, Scale::of(0.3), 2), b = build_nerve(circle, Scale::of(0.45), 2);
    for (int d = 0; d <= a.complex.top_dim(); ++d)
        for (const auto& s : a.complex.simplices(d))
            CHECK(b.spans(s));
    auto rays = boundary_ray_sample(2, 4);
    auto c = build_nerve(rays, Scale::exp(-3), 2), e = build_nerve(rays, Scale::exp(-1), 2);
    for (int d = 0; d <= c.complex.top_dim(); ++d)
        for (const auto& s : c.complex.simplices(d))
            CHECK(e.spans(s));
}

TEST_CASE("refinement maps")
{
    const PrimeField f(2);
    auto circle = circle_sample(64);
    auto fine = build_nerve(circle, Scale::of(0.3), 2), coarse = build_nerve(circle, Scale::of(0.6), 2);
    auto F = refinement_map(circle, fine, coarse, f);
    CHECK(commutes(fine, coarse, F, f));
    HomologyContext Hf(fine.complex, f), Hc(coarse.complex, f);
    CHECK(induced_rank(Hf, Hc, 1, [&](int v) { return F.vertex_map[static_cast<std::size_t>(v)]; }) == 1);

    // Same scale: the map is eligible to be the identity on vertices.
    auto same = refinement_map(circle, fine, fine, f);
    for (std::size_t v = 0; v < same.vertex_map.size(); ++v)
        CHECK(same.vertex_map[v] == static_cast<int>(v));

    auto rays = boundary_ray_sample(2, 4);
    auto rf = build_nerve(rays, Scale::exp(-3), 2), rc = build_nerve(rays, Scale::exp(-2), 2);
    auto R = refinement_map(rays, rf, rc, PrimeField(3));
    CHECK(commutes(rf, rc, R, PrimeField(3)));
}

TEST_CASE("betti numbers across scales")
{
    const PrimeField f(2);
    auto circle = circle_sample(64);
    for (double eps : {0.15, 0.3, 0.6, 1.0, 1.5})
        CHECK(betti(build_nerve(circle, Scale::of(eps), 2).complex, 1, f) == 1);
    auto rays = boundary_ray_sample(2, 4);
    for (int k = 1; k <= 4; ++k)
        CHECK(betti(build_nerve(rays, Scale::exp(-k), 2).complex, 1, f) == 0);
    CHECK(betti(build_nerve(rays, Scale::of(0.5), 2).complex, 1, f) == 0);
}

TEST_CASE("cech towers")
{
    const PrimeField f(2);
    auto T = cech_tower(circle_sample(64), {Scale::of(0.6), Scale::of(0.45), Scale::of(0.3)}, 1, f, 2);
    REQUIRE(T.stable_rank.has_value());
    CHECK(*T.stable_rank == 1);
    for (const auto& e : T.entries)
        CHECK(e.rank == 1);

    auto P = cech_tower(point_sample(), {Scale::of(1), Scale::of(0.5), Scale::of(0.1)}, 0, f, 1);
    for (const auto& e : P.entries) {
        CHECK(e.rank == 1);
        CHECK(e.surjective);
    }

    auto rays = boundary_ray_sample(2, 4);
    const std::vector<Scale> ladder{Scale::exp(-1), Scale::exp(-2), Scale::exp(-3)};
    for (const auto& e : cech_tower(rays, ladder, 0, f, 2).entries)
        CHECK(e.surjective);
    for (const auto& e : cech_tower(rays, ladder, 1, f, 2).entries)
        CHECK(e.rank == 0);
}

TEST_CASE("divergence check examples")
{
    const Scale eps = Scale::exp(-4);
    auto v = divergence_check(w("aaaaabb"), w("aaaaab'b'"), 1, 1, eps, 6);
    REQUIRE(v.t0.has_value());
    CHECK(*v.t0 == 5);
    CHECK(v.hypothesis_distance == 2);
    CHECK(v.hypothesis_holds);
    CHECK(v.conclusion_holds);
    CHECK(v.visual.value == doctest::Approx(std::exp(-5.0)));

    auto same = divergence_check(w("abab"), w("abab"), 1, 1, eps, 3);
    CHECK_FALSE(same.t0.has_value());
    CHECK(same.conclusion_holds);

    auto apart = divergence_check(w("ab"), w("ba"), 1, 1, Scale::of(0.5), 1);
    CHECK(*apart.t0 == 0);
    CHECK(apart.hypothesis_holds);
    CHECK_FALSE(apart.conclusion_holds);
    CHECK(apart.mismatch);
}
