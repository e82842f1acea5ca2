#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hinf/rips.hpp"

namespace hinf {

/// A chain of dimension i+1 on a Rips window whose boundary vanishes inside B(r_c).
/// The chain may be supported on arbitrarily many simplices of the window; the
/// window edge is where the truncation shows up as boundary.
class LFCycleWindow {
public:
    /// r_c defaults to the largest radius certified by the chain itself: the least
    /// max vertex distance over the terms of the boundary (R + 1 for a true cycle).
    /// A requested r_c beyond that throws NotACycle.
    LFCycleWindow(const RipsWindow& W, int i, Chain c, const PrimeField& f, std::optional<int> certified_region = {});

    const RipsWindow& window() const noexcept { return *W_; }
    int degree() const noexcept { return i_; }
    const Chain& chain() const noexcept { return c_; }
    const PrimeField& field() const noexcept { return f_; }
    int certified_region() const noexcept { return rc_; }

private:
    const RipsWindow* W_;
    int i_;
    Chain c_;
    PrimeField f_;
    int rc_;
};

/// Sub-chain of a chain on W on simplices with every vertex at distance <= n.
Chain restrict_closed(const RipsWindow& W, const Chain& c, int n);
/// Sub-chain on simplices with every vertex at distance < k (the open ball B(k)).
Chain restrict_open(const RipsWindow& W, const Chain& c, int k);

Chain restrict(const LFCycleWindow& c, int n);

struct SphereBoundary {
    Chain z;
    /// Extremes of vertex distances over the support of z (0, 0 when z = 0).
    int min_dist = 0;
    int max_dist = 0;
};

/// z = boundary of restrict(c, n). Certifies that every simplex of z has all of
/// its vertices at distance in [n - t, n]; throws LocalityViolation otherwise.
SphereBoundary boundary_near_sphere(const LFCycleWindow& c, int n);

/// Fills z by a chain supported on simplices all of whose vertices lie beyond
/// support_radius. nullopt means no filling exists inside the window.
std::optional<Chain> fill_outside(const Chain& z, const RipsWindow& W, int support_radius, const PrimeField& f);

enum class FillStatus { Ok, OuterInfeasible, InnerInfeasible };

std::string fill_status_name(FillStatus s);

struct FillStep {
    int n = 0;
    /// The outer radius used; the last one tried when nothing worked.
    int m = 0;
    std::vector<int> tried;
    FillStatus status = FillStatus::OuterInfeasible;
    Chain restriction;  // c restricted to closed B(m)
    Chain outer;        // c(m): fills the boundary of the restriction outside closed B(n + t)
    Chain c_n;          // outer - restriction, a finite cycle
    Chain b_n;          // boundary(b_n) = c_n
    bool outer_avoids_inner_ball = false;   // supp c(m) misses closed B(n + t)
    bool outer_avoids_restriction = false;  // supp c(m) misses supp restrict(c, n - 1)
};

/// Builds c_n for one fixed m and fills it. m must exceed n + t and lie within
/// the certified window (m <= R - margin).
FillStep assemble_and_fill(const LFCycleWindow& c, int n, int m, int margin);

/// Scans m = n + t + 1 .. R - margin and keeps the first m whose outer fill
/// succeeds.
FillStep fill_with_scan(const LFCycleWindow& c, int n, int margin);

struct InnerRadiusScan {
    int k = 0;
    /// class_of[j]: class of b_j restricted to B(k) among successful steps (-1 for failed steps).
    std::vector<int> class_of;
    std::size_t distinct = 0;
    /// Longest run of consecutive schedule entries with equal restrictions.
    std::size_t run_start = 0;
    std::size_t run_length = 0;
    /// Nested subsequence chosen at this radius (indices into the schedule).
    std::vector<std::size_t> selected;
    /// Pigeonhole bound p^(#(i+2)-simplices in B(k)) holds for `distinct`.
    bool pigeonhole_ok = false;
    /// boundary(-b restricted to B(k)) = c on B(k - t).
    bool verified = false;
};

struct FillingScanReport {
    int degree = 0;
    int margin = 0;
    int certified_region = 0;
    std::vector<FillStep> steps;
    std::vector<InnerRadiusScan> inner;
    bool obstructed = false;  // no step succeeded
    std::optional<Chain> b;   // the assembled partial limit on B(k_max)
    /// Largest r <= k_max with boundary(b) = c on B(r), when b exists.
    std::optional<int> verification_radius;
    std::optional<int> claimed_radius;  // k_max - t when every inner radius verified
};

/// Runs fill_with_scan for every n of the (strictly increasing) schedule, groups
/// the fillings by their restriction to B(k) for each k of `inner_radii`, selects
/// nested subsequences that agree on each B(k), and assembles b = -b_j on B(k_max).
FillingScanReport stabilization_scan(const LFCycleWindow& c, const std::vector<int>& schedule,
                                     const std::vector<int>& inner_radii, int margin);

/// Oriented edge chain following a path of group words (consecutive words must be
/// Rips-adjacent). Throws OutOfWindow when an element lies outside the window.
Chain path_chain(const RipsWindow& W, const std::vector<Word>& path, const PrimeField& f);

/// The bi-infinite axis of generator g truncated to the window: edges g^j -> g^(j+1).
Chain axis_chain(const RipsWindow& W, int generator, const PrimeField& f);

/// Boundary loop of the square [-r, r]^2 in a two-generator group, walked counterclockwise.
Chain square_loop(const RipsWindow& W, int r, const PrimeField& f);

}  // namespace hinf
