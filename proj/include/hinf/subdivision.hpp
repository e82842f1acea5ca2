#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hinf/nerve.hpp"

namespace hinf {

struct DiskPoint {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend bool operator==(const DiskPoint&, const DiskPoint&) = default;
};

/// Points of the closed unit disk with coordinates x / den, y / den.
class DiskSample {
public:
    DiskSample(std::int64_t den, std::vector<DiskPoint> points, double tau = 0.05);
    /// Truncates each coordinate toward zero to a multiple of 1 / den, so points of
    /// the closed disk stay inside it.
    static DiskSample from_doubles(const std::vector<std::array<double, 2>>& pts, std::int64_t den = 1'000'000,
                                   double tau = 0.05);

    std::int64_t den() const noexcept { return den_; }
    double tau() const noexcept { return tau_; }
    std::size_t size() const noexcept { return pts_.size(); }
    const DiskPoint& operator[](std::size_t i) const { return pts_.at(i); }
    const std::vector<DiskPoint>& points() const noexcept { return pts_; }
    double norm(std::size_t i) const;
    /// Squared distance in units of 1 / den^2, exact.
    std::int64_t dist2(std::size_t a, std::size_t b) const;

private:
    std::int64_t den_;
    std::vector<DiskPoint> pts_;
    double tau_;
};

struct DensityWitness {
    double x = 0, y = 0;  // uncovered grid center
};
struct ClosenessWitness {
    std::size_t d1 = 0, d2 = 0;
    double disk_distance = 0;
    double image_distance = 0;
};
struct BoundaryWitness {
    std::size_t loop_position = 0;
    std::size_t disk_index = 0;
    double norm = 0;
};

/// Certificate that (D, phi) is an eps-subdivision of the loop L in the eps-nerve of S.
struct SubdivisionCertificate {
    double delta = 0;
    Scale eps;
    double tau = 0;
    std::size_t grid_centers = 0;
    std::size_t close_pairs = 0;
    bool density = false;    // every delta-ball about a disk point meets D
    bool closeness = false;  // |d1 - d2| <= 10 delta implies d(phi d1, phi d2) < eps
    bool boundary = false;   // preimages of loop vertices have norm >= 1 - tau
    std::optional<DensityWitness> density_witness;
    std::optional<ClosenessWitness> closeness_witness;
    std::optional<BoundaryWitness> boundary_witness;

    bool valid() const noexcept { return density && closeness && boundary; }
};

/// phi[j] is the sample point (nerve vertex) assigned to disk point j; L is a
/// cyclic sequence of sample points. Throws InvalidArgument when phi is not
/// injective or out of range, and when L is not a loop in the nerve (consecutive
/// vertices distinct and spanning an edge, every vertex in the image of phi).
///
/// Density is tested on a grid of spacing delta / 2 over every node within
/// delta / (2 sqrt 2) of the disk; each node needs a point of D closer than
/// 0.64 delta, which forces every delta-ball centred in the disk to meet D.
SubdivisionCertificate check_conditions(const DiskSample& D, const std::vector<int>& phi, const std::vector<int>& L,
                                        double delta, const Scale& eps, const MetricSample& S);

enum class FillStage { Ok, Triangulation, ImageSimplexMissing, BoundaryMismatch };

std::string fill_stage_name(FillStage s);

struct DiskFilling {
    FillStage stage = FillStage::Triangulation;
    std::string message;
    /// Faces of the triangulation as counterclockwise triples of disk indices.
    std::vector<std::array<std::size_t, 3>> triangles;
    std::size_t edges = 0;
    std::vector<std::size_t> hull;  // counterclockwise, collinear points kept
    std::optional<std::array<std::size_t, 3>> missing_triangle;
    /// The subcomplex of the nerve spanned by the image triangles and the loop edges.
    SimplicialComplex complex;
    Chain F{2, {}};
    Chain loop{1, {}};
    Chain defect{1, {}};  // boundary(F) - L on mismatch
};

/// Triangulates D with edges of length <= 10 delta (greedy, shortest first,
/// rejecting crossings and edges through other points), checks over GF(2) that
/// the faces tile the hull, pushes each face through phi into the eps-nerve of S,
/// and checks boundary(F) = L. F is negated when its boundary is -L.
DiskFilling triangulate_and_fill(const DiskSample& D, const std::vector<int>& phi, const std::vector<int>& L,
                                 double delta, const Scale& eps, const MetricSample& S, const PrimeField& f);

/// A ready-made subdivision problem.
struct SubdivisionFixture {
    std::string name;
    DiskSample D;
    MetricSample S;
    std::vector<int> phi;
    std::vector<int> loop;
    double delta;
    Scale eps;
};

/// Planar points (coordinates over den) under the Euclidean metric.
MetricSample euclidean_sample(std::int64_t den, const std::vector<DiskPoint>& pts, const std::string& tag);

/// Hexagonal grid of spacing 0.08 inside radius 0.96 plus 128 points on the unit
/// circle; S is the same point set, phi the identity, L the circle points in
/// counterclockwise order, delta = 0.1, eps = 1.1.
SubdivisionFixture hex_fixture();
/// hex_fixture with the interior points removed (density must fail).
SubdivisionFixture hex_fixture_no_interior();
/// hex_fixture with the image of the central disk point moved to (5, 5).
SubdivisionFixture hex_fixture_moved_image();
/// hex_fixture with eps = 0.06, below the image edge lengths.
SubdivisionFixture hex_fixture_small_eps();
/// Three points on the unit circle whose images already span a 2-simplex.
SubdivisionFixture triangle_fixture();

}  // namespace hinf
