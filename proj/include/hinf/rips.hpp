#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hinf/complex.hpp"
#include "hinf/group_metric.hpp"

namespace hinf {

inline constexpr std::size_t kDefaultSimplexCap = 5'000'000;

struct RipsOptions {
    int t = 2;
    int max_dim = 3;
    /// false: simplices need pairwise distance < t. true: <= t.
    bool closed = false;
    std::size_t simplex_cap = kDefaultSimplexCap;
};

/// The Rips complex of a group restricted to a ball window. Vertex labels are
/// ball element indices, so label order is BFS order.
class RipsWindow {
public:
    static RipsWindow build(std::shared_ptr<const CayleyBall> ball, const RipsOptions& opts);

    const CayleyBall& ball() const noexcept { return *ball_; }
    std::shared_ptr<const CayleyBall> ball_ptr() const noexcept { return ball_; }
    int t() const noexcept { return opts_.t; }
    int radius() const noexcept { return ball_->radius(); }
    const RipsOptions& options() const noexcept { return opts_; }
    const SimplicialComplex& complex() const noexcept { return complex_; }
    int vertex_dist(int label) const { return ball_->dist(static_cast<std::size_t>(label)); }

    /// Largest and smallest vertex distance over a simplex.
    int max_dist(const Simplex& s) const;
    int min_dist(const Simplex& s) const;

private:
    std::shared_ptr<const CayleyBall> ball_;
    RipsOptions opts_;
    SimplicialComplex complex_;
};

enum class RadialKind { OpenBall, Sphere, ClosedBall, Complement };

std::string radial_kind_name(RadialKind k);

/// The full subcomplexes B(n) (d < n), S(n) (d = n), closed B(n) (d <= n) and
/// Complement(n) (d > n) of a window.
struct RadialSubcomplex {
    RadialKind kind;
    int n;
    SimplicialComplex complex;
};

/// Errors with OutOfWindow when n is not below the window radius, or, for
/// complements, when n exceeds radius - margin.
RadialSubcomplex radial_subcomplex(const RipsWindow& W, RadialKind kind, int n, int margin);

/// Default margin for certified complement statements: the Rips scale t.
inline int default_margin(const RipsWindow& W) { return W.t(); }

/// Rank of H_i(Complement(m)) -> H_i(Complement(n)) induced by inclusion (m > n).
std::size_t induced_map_rank(const RipsWindow& W, int i, int m, int n, const PrimeField& f, int margin);

struct EndsEstimate {
    /// counts[j]: components of the window minus the open ball B(j+1), i.e. of Complement(j).
    std::vector<std::size_t> counts;
    /// image_ranks[j]: rank of H_0(Complement(deepest)) -> H_0(Complement(j)).
    std::vector<std::size_t> image_ranks;
    std::optional<std::size_t> stable;
    bool growing = false;
    int margin = 0;
};

/// Component counts of the complements of the open balls B(n), n = 1 .. R - margin.
EndsEstimate ends_estimate(const RipsWindow& W, const PrimeField& f, int margin);

struct TowerEntry {
    int m;
    int n;
    std::size_t rank;
};

struct TowerVerdict {
    int n;
    bool trivial_so_far;  // some m > n has rank 0
};

struct TowerReport {
    int degree = 0;
    int margin = 0;
    int first = 1;
    int last = 0;
    std::vector<std::size_t> complement_betti;      // by n = first .. last
    std::vector<std::size_t> complement_simplices;  // total simplex count, by n
    std::vector<TowerEntry> entries;
    std::vector<TowerVerdict> verdicts;
};

/// All ranks H_i(Complement(m)) -> H_i(Complement(n)) for first <= n < m <= R - margin.
TowerReport tower_report(const RipsWindow& W, int i, const PrimeField& f, int margin, int first = 1);

}  // namespace hinf
