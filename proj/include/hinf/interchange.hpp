#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "hinf/complex.hpp"
#include "hinf/nerve.hpp"
#include "hinf/subdivision.hpp"

namespace hinf {

using VertexNamer = std::function<std::string(int)>;
using VertexResolver = std::function<int(std::string_view)>;

/// Chain text format:
///
///     chain 1
///     dim 1
///     field 2
///     term <coeff> <vertex> <vertex> ...
///
/// Terms are written in simplex index order. Vertices are named by `name`
/// (default: the label as a decimal number).
std::string write_chain(const SimplicialComplex& K, const Chain& c, const PrimeField& f, const VertexNamer& name = {});

/// Parses the chain format. Vertex tokens go through `resolve` (default: decimal
/// labels). Repeated simplices accumulate; coefficients are reduced mod p, and
/// the result is normalized to the simplex's ascending orientation.
Chain read_chain(std::string_view text, const SimplicialComplex& K, const PrimeField& f,
                 const VertexResolver& resolve = {});

/// Complex text format: `complex 1`, then one `simplex v0 v1 ...` line per
/// maximal simplex (faces are implied). Reading closes under faces.
std::string write_complex(const SimplicialComplex& K);
SimplicialComplex read_complex(std::string_view text, int max_dim = kMaxSimplexSize - 1);

/// Sample text format:
///
///     sample 1
///     kind linear | euclidean-squared | visual
///     unit <double>
///     points <n>
///     label <name>          (optional, n lines)
///     row <n integers>      (n lines; "inf" allowed for visual)
MetricSample read_sample(std::string_view text);

/// Subdivision problem text format. Each point line gives a disk point and its
/// image; the images form S under the Euclidean metric and phi is the identity
/// on indices. The loop lists disk indices in order.
///
///     subdivision 1
///     den <integer>
///     tau <double>
///     delta <double>
///     eps <scale>
///     point <x> <y> <image x> <image y>
///     loop <i0> <i1> ...
SubdivisionFixture read_subdivision(std::string_view text);

/// Splits text into lines, dropping '#' comments and blank lines.
std::vector<std::pair<std::size_t, std::string>> content_lines(std::string_view text);

}  // namespace hinf
