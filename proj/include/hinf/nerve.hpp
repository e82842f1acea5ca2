#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hinf/complex.hpp"
#include "hinf/group_metric.hpp"

namespace hinf {

/// A scale value. Scales written as powers of e keep their exponent so that
/// comparisons against visual distances stay exact.
struct Scale {
    double value = 0;
    std::optional<int> exponent;  // value == e^exponent when set

    static Scale of(double v) { return Scale{v, std::nullopt}; }
    static Scale exp(int k);
    /// Accepts decimals ("0.3") and e-powers ("e^-2", "e-2", "exp(-2)").
    static Scale parse(std::string_view text);
    std::string to_string() const;
};

/// How integer levels become distances.
///   Linear:           d = unit * L
///   EuclideanSquared: d = unit * sqrt(L)
///   Visual:           d = e^-L, with L = kInfiniteLevel for d = 0
enum class MetricKind { Linear, EuclideanSquared, Visual };

inline constexpr std::int64_t kInfiniteLevel = std::numeric_limits<std::int64_t>::max();

std::string_view metric_kind_name(MetricKind k) noexcept;

/// The set of levels accepted by a distance comparison, as an inclusive range.
struct Cutoff {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    bool accepts(std::int64_t level) const noexcept { return lo <= level && level <= hi; }
};

/// A finite metric space with an exact integer level table.
class MetricSample {
public:
    MetricSample(std::string tag, MetricKind kind, double unit, std::size_t n, std::vector<std::int64_t> levels,
                 std::vector<std::string> labels = {});

    const std::string& tag() const noexcept { return tag_; }
    MetricKind kind() const noexcept { return kind_; }
    double unit() const noexcept { return unit_; }
    std::size_t size() const noexcept { return n_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    std::int64_t level(std::size_t a, std::size_t b) const { return levels_[a * n_ + b]; }
    double distance(std::size_t a, std::size_t b) const;

    /// Levels L with d(L) < x (strict) or d(L) <= x. Values within 1e-9 of a
    /// level boundary snap to it, so ties resolve as exact comparisons.
    Cutoff cutoff(const Scale& x, bool strict) const;

private:
    void check_metric() const;

    std::string tag_;
    MetricKind kind_;
    double unit_;
    std::size_t n_;
    std::vector<std::int64_t> levels_;
    std::vector<std::string> labels_;
};

/// n equally spaced points on a circle of circumference 2 pi, arc-length metric.
MetricSample circle_sample(int n);

/// All reduced words of length `depth` in the free group of rank k, as rays from
/// the identity, with the visual metric e^-(common prefix length).
std::vector<Word> reduced_words(int k, int depth);
MetricSample boundary_ray_sample(int k, int depth);

MetricSample point_sample();

/// "circle n=64", "cantor k=2 depth=6", "point", or "builtin:<name>" for
/// circle64, cantor (k=2, depth=6) and point.
MetricSample parse_sample(std::string_view source);

struct VisualDistance {
    std::optional<int> prefix;  // nullopt for equal rays (distance 0)
    double value = 0;
};

/// e^-(u|v) where (u|v) is the common prefix length. Throws on unreduced input.
VisualDistance visual_distance(const Word& u, const Word& v);

struct CoverNerve {
    Scale eps;
    int max_dim = 2;
    SimplicialComplex complex;
    /// Distinct witness sets {u : d(u, w) < eps}, one per witnessing class.
    std::size_t witness_sets = 0;

    bool spans(const Simplex& s) const { return complex.index_of(s).has_value(); }
};

/// Whether the vertices span a simplex of the eps-nerve of S: some sample point
/// lies within eps (strictly) of all of them. Answers without building the nerve.
bool witnessed_simplex(const MetricSample& S, const Scale& eps, std::span<const int> vertices);

/// Nerve of the cover by open eps-balls about every sample point, with
/// intersections witnessed by sample points, truncated at max_dim.
CoverNerve build_nerve(const MetricSample& S, const Scale& eps, int max_dim);

struct RefinementChainMap {
    Scale fine_eps;
    Scale coarse_eps;
    std::vector<int> vertex_map;
    /// chain_matrices[d][j]: image of the j-th d-simplex of the fine nerve.
    std::vector<std::vector<SparseVec>> chain_matrices;
};

/// Sends each fine center u to the smallest-index coarse center v with
/// d(u, v) <= eps - eps'. Throws InvalidArgument naming the first vertex without one.
RefinementChainMap refinement_map(const MetricSample& S, const CoverNerve& fine, const CoverNerve& coarse,
                                  const PrimeField& f);

struct CechEntry {
    std::size_t fine = 0;    // ladder index of the source
    std::size_t coarse = 0;  // ladder index of the target
    std::size_t rank = 0;
    bool surjective = false;
};

struct CechTowerReport {
    int degree = 0;
    std::vector<Scale> ladder;
    std::vector<std::size_t> simplices;
    std::vector<std::size_t> betti;
    std::vector<CechEntry> entries;
    std::optional<std::size_t> stable_rank;  // set when every entry has the same rank
};

/// Ranks of H_i(N_fine) -> H_i(N_coarse) for every pair of a strictly descending ladder.
CechTowerReport cech_tower(const MetricSample& S, const std::vector<Scale>& ladder, int i, const PrimeField& f,
                           int max_dim);

struct BoundSample {
    int t = 0;
    int tree_distance = 0;
    double lower_bound = 0;
    bool consistent = false;  // tree_distance >= lower_bound
};

struct DivergenceVerdict {
    std::optional<int> t0;  // split point; nullopt for equal rays
    int t_prime = 0;
    int hypothesis_distance = 0;
    bool hypothesis_holds = false;  // d(r(t'), r'(t')) < 10 C
    std::vector<BoundSample> bound_samples;
    bool bound_consistent = true;
    VisualDistance visual;
    bool conclusion_holds = false;           // e^-t0 < eps
    bool conclusion_literal_reading = false;  // e^t0 < eps, sign of t0 taken literally
    double threshold_literal = 0;    // delta log2(10 C) + 1 + ln(eps)
    double threshold_corrected = 0;  // delta log2(10 C) + 1 - ln(eps)
    bool exceeds_literal = false;
    bool exceeds_corrected = false;
    bool mismatch = false;  // hypothesis holds but the conclusion fails
};

/// Evaluates the ray divergence bound in the tree model, where d(r(t), r'(t)) = 2 (t - t0) past the split.
DivergenceVerdict divergence_check(const Word& r, const Word& r2, double delta, double C, const Scale& eps, int t_prime);

}  // namespace hinf
