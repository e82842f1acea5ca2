#include <set>

#include "doctest.h"
#include "hinf/filling.hpp"
#include "support/dense_oracle.hpp"

using namespace hinf;

namespace {

RipsWindow window(const char* group, int R, int t)
{
    RipsOptions o;
    o.t = t;
    return RipsWindow::build(std::make_shared<const CayleyBall>(CayleyBall::enumerate(builtin_presentation(group), R)), o);
}

std::set<int> support_vertices(const RipsWindow& W, const Chain& c)
{
    std::set<int> out;
    for (const auto& e : c.terms)
        for (int v : W.complex().simplex(c.dim, e.index))
            out.insert(v);
    return out;
}

// Dense check that the boundary of b agrees with c on simplices inside the open ball B(r).
bool boundary_matches_on_ball(const RipsWindow& W, const Chain& b, const Chain& c, int r, std::int64_t p)
{
    const auto db = oracle::boundary_of(W.complex(), b, p);
    const auto dc = oracle::dense(c, W.complex().count(c.dim), p);
    for (std::size_t j = 0; j < db.size(); ++j)
        if (W.max_dist(W.complex().simplex(c.dim, j)) < r && db[j] != dc[j])
            return false;
    return true;
}

}  // namespace

TEST_CASE("restriction examples")
{
    const PrimeField f(2);
    auto W = window("Z2", 8, 3);
    LFCycleWindow zero(W, 0, Chain{1, {}}, f);
    CHECK(restrict(zero, 3).is_zero());

    LFCycleWindow line(W, 0, axis_chain(W, 1, f), f);
    CHECK(line.certified_region() == 8);
    const Chain seg = restrict(line, 2);
    CHECK(seg.terms.size() == 4);  // edges a^j a^(j+1) for j = -2 .. 1
    for (const auto& e : seg.terms)
        CHECK(W.max_dist(W.complex().simplex(1, e.index)) <= 2);
    CHECK(restrict(line, 8) == line.chain());
}

TEST_CASE("boundary near the sphere")
{
    const PrimeField f(2);
    auto W = window("Z2", 8, 3);
    LFCycleWindow line(W, 0, axis_chain(W, 1, f), f);
    const auto sb = boundary_near_sphere(line, 3);
    CHECK(sb.z.terms.size() == 2);
    CHECK(sb.min_dist >= 0);
    CHECK(sb.max_dist == 3);

    LFCycleWindow loop(W, 0, square_loop(W, 1, f), f);
    CHECK(boundary(W.complex(), loop.chain(), f).is_zero());
    CHECK(boundary_near_sphere(loop, 3).z.is_zero());

    // A chain with a boundary defect cannot be certified on a region containing it.
    const Chain edge = path_chain(W, {{}, {1}}, f);
    CHECK_THROWS_AS(LFCycleWindow(W, 0, edge, f, 5), Error);
    LFCycleWindow defect(W, 0, edge, f);
    CHECK(defect.certified_region() == 0);
}

TEST_CASE("fill_outside examples and support knob")
{
    const PrimeField f(2);
    auto W = window("Z2", 10, 3);
    LFCycleWindow line(W, 0, axis_chain(W, 1, f), f);
    const Chain z = boundary_near_sphere(line, 3).z;
    CHECK_FALSE(fill_outside(z, W, 6, f).has_value());
    auto x = fill_outside(z, W, 0, f);
    REQUIRE(x.has_value());
    CHECK(boundary(W.complex(), *x, f) == z);
    for (int v : support_vertices(W, *x))
        CHECK(W.vertex_dist(v) > 0);

    auto zero = fill_outside(Chain{0, {}}, W, 3, f);
    REQUIRE(zero.has_value());
    CHECK(zero->is_zero());

    // In a tree the two ends of a truncated geodesic cannot be joined away from the root.
    auto T = window("F2", 8, 2);
    LFCycleWindow geo(T, 0, axis_chain(T, 1, f), f);
    const Chain zt = boundary_near_sphere(geo, 2).z;
    CHECK_FALSE(zt.is_zero());
    CHECK_FALSE(fill_outside(zt, T, 4, f).has_value());
}

TEST_CASE("assemble_and_fill on a finite loop and on the axis")
{
    for (std::uint32_t p : {2u, 3u}) {
        const PrimeField f(p);
        auto W = window("Z2", 12, 3);
        LFCycleWindow loop(W, 0, square_loop(W, 2, f), f);
        auto step = assemble_and_fill(loop, 3, 7, 3);
        CHECK(step.status == FillStatus::Ok);
        CHECK(boundary(W.complex(), step.b_n, f) == step.c_n);
        CHECK(step.c_n == subtract(step.outer, step.restriction, f));

        LFCycleWindow zero(W, 0, Chain{1, {}}, f);
        auto zs = assemble_and_fill(zero, 3, 7, 3);
        CHECK(zs.status == FillStatus::Ok);
        CHECK(zs.c_n.is_zero());
        CHECK(zs.b_n.is_zero());

        LFCycleWindow line(W, 0, axis_chain(W, 1, f), f);
        auto ls = assemble_and_fill(line, 3, 7, 3);
        REQUIRE(ls.status == FillStatus::Ok);
        CHECK(boundary(W.complex(), ls.b_n, f) == ls.c_n);
        CHECK(oracle::boundary_of(W.complex(), ls.b_n, p) == oracle::dense(ls.c_n, W.complex().count(1), p));
        CHECK_THROWS_AS(assemble_and_fill(line, 3, 6, 3), Error);
        CHECK_THROWS_AS(assemble_and_fill(line, 3, 10, 3), Error);
    }
}

TEST_CASE("property: locality of every successful step")
{
    const PrimeField f(2);
    auto W = window("Z2", 12, 3);
    LFCycleWindow line(W, 0, axis_chain(W, 1, f), f);
    for (int n = 2; n <= 5; ++n) {
        auto s = fill_with_scan(line, n, 3);
        REQUIRE(s.status == FillStatus::Ok);
        CHECK(s.m > n + 3);
        CHECK(boundary(W.complex(), s.b_n, f) == s.c_n);
        const auto outer = support_vertices(W, s.outer);
        bool avoids_ball = true;
        for (int v : outer)
            avoids_ball = avoids_ball && W.vertex_dist(v) > n + 3;
        CHECK(avoids_ball);
        CHECK(s.outer_avoids_inner_ball == avoids_ball);
        // No simplex of c(m) is a simplex of the restriction to B(n - 1).
        const Chain inner = restrict(line, n - 1);
        std::set<std::uint32_t> inner_idx;
        for (const auto& e : inner.terms)
            inner_idx.insert(e.index);
        bool disjoint = true;
        for (const auto& e : s.outer.terms)
            disjoint = disjoint && !inner_idx.count(e.index);
        CHECK(disjoint);
        CHECK(s.outer_avoids_restriction);
    }
}

TEST_CASE("stabilization scan on the plane")
{
    std::optional<int> radius[2];
    for (std::uint32_t p : {2u, 3u}) {
        const PrimeField f(p);
        auto W = window("Z2", 13, 3);
        LFCycleWindow line(W, 0, axis_chain(W, 1, f), f);
        auto S = stabilization_scan(line, {3, 4, 5, 6}, {2, 3}, 3);
        CHECK_FALSE(S.obstructed);
        for (const auto& st : S.steps)
            CHECK(st.status == FillStatus::Ok);
        for (const auto& k : S.inner) {
            CHECK(k.run_length >= 1);
            CHECK(k.pigeonhole_ok);
            CHECK(k.verified);
            CHECK(k.distinct <= S.steps.size());
        }
        REQUIRE(S.b.has_value());
        REQUIRE(S.claimed_radius.has_value());
        CHECK(*S.claimed_radius == 0);
        // Scan soundness: recompute the boundary of b densely.
        CHECK(boundary_matches_on_ball(W, *S.b, line.chain(), *S.claimed_radius, p));
        REQUIRE(S.verification_radius.has_value());
        CHECK(boundary_matches_on_ball(W, *S.b, line.chain(), *S.verification_radius, p));
        CHECK(*S.verification_radius >= *S.claimed_radius);
        radius[p == 3] = S.verification_radius;
    }
    CHECK(radius[0] == radius[1]);
}

TEST_CASE("stabilization scan on a finite cycle settles")
{
    const PrimeField f(2);
    auto W = window("Z2", 12, 3);
    LFCycleWindow loop(W, 0, square_loop(W, 1, f), f);
    auto S = stabilization_scan(loop, {3, 4, 5}, {2, 3, 4}, 3);
    REQUIRE(S.steps.size() == 3);
    for (const auto& st : S.steps)
        CHECK(st.b_n == S.steps.back().b_n);
    for (const auto& k : S.inner)
        CHECK(k.distinct == 1);
}

TEST_CASE("stabilization scan in a tree is obstructed")
{
    const PrimeField f(2);
    auto T = window("F2", 10, 2);
    LFCycleWindow geo(T, 0, axis_chain(T, 1, f), f);
    auto S = stabilization_scan(geo, {2, 3, 4}, {2, 3}, 2);
    CHECK(S.obstructed);
    for (const auto& st : S.steps)
        CHECK(st.status == FillStatus::OuterInfeasible);
    CHECK_FALSE(S.b.has_value());
}
