#include "hinf/interchange.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace hinf {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg)
{
    fail(ErrorCode::Parse, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string> tokens(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string t; in >> t;)
        out.push_back(t);
    return out;
}

template <class T>
T number(const std::string& tok, std::size_t line)
{
    T v{};
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        parse_fail(line, "expected a number, got '" + tok + "'");
    return v;
}

void expect_header(const std::vector<std::pair<std::size_t, std::string>>& lines, const std::string& word)
{
    if (lines.empty())
        fail(ErrorCode::Parse, "empty " + word + " file");
    auto t = tokens(lines.front().second);
    if (t.size() != 2 || t[0] != word || t[1] != "1")
        parse_fail(lines.front().first, "expected header '" + word + " 1'");
}

}  // namespace

std::vector<std::pair<std::size_t, std::string>> content_lines(std::string_view text)
{
    std::vector<std::pair<std::size_t, std::string>> out;
    std::size_t lineno = 0, pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        ++lineno;
        std::string line(text.substr(pos, end - pos));
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            out.emplace_back(lineno, line);
        pos = end + 1;
    }
    return out;
}

std::string write_chain(const SimplicialComplex& K, const Chain& c, const PrimeField& f, const VertexNamer& name)
{
    std::ostringstream os;
    os << "chain 1\ndim " << c.dim << "\nfield " << f.p() << "\n";
    for (const auto& e : c.terms) {
        os << "term " << e.value;
        for (int v : K.simplex(c.dim, e.index))
            os << ' ' << (name ? name(v) : std::to_string(v));
        os << '\n';
    }
    return os.str();
}

Chain read_chain(std::string_view text, const SimplicialComplex& K, const PrimeField& f, const VertexResolver& resolve)
{
    const auto lines = content_lines(text);
    expect_header(lines, "chain");
    Chain c{-1, {}};
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& [ln, s] = lines[k];
        auto t = tokens(s);
        if (t[0] == "dim" && t.size() == 2) {
            c.dim = number<int>(t[1], ln);
            if (c.dim < 0 || c.dim >= kMaxSimplexSize)
                parse_fail(ln, "dimension out of range");
        } else if (t[0] == "field" && t.size() == 2) {
            if (number<std::uint32_t>(t[1], ln) != f.p())
                parse_fail(ln, "chain field GF(" + t[1] + ") does not match GF(" + std::to_string(f.p()) + ")");
        } else if (t[0] == "term") {
            if (c.dim < 0)
                parse_fail(ln, "term before dim");
            if (static_cast<int>(t.size()) != c.dim + 3)
                parse_fail(ln, "a " + std::to_string(c.dim) + "-simplex term needs " + std::to_string(c.dim + 1) +
                                   " vertices");
            Coeff coeff = f.reduce(number<std::int64_t>(t[1], ln));
            std::vector<int> vs;
            for (std::size_t j = 2; j < t.size(); ++j) {
                int v = 0;
                try {
                    v = resolve ? resolve(t[j]) : number<int>(t[j], ln);
                } catch (const Error& e) {
                    parse_fail(ln, "vertex '" + t[j] + "': " + e.what());
                }
                vs.push_back(v);
            }
            int swaps = 0;
            for (std::size_t i = 1; i < vs.size(); ++i)
                for (std::size_t j = i; j > 0 && vs[j - 1] > vs[j]; --j) {
                    std::swap(vs[j - 1], vs[j]);
                    ++swaps;
                }
            if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
                parse_fail(ln, "repeated vertex in term");
            auto idx = K.index_of(Simplex::from_sorted(vs));
            if (!idx)
                parse_fail(ln, "simplex " + Simplex::from_sorted(vs).to_string() + " is not in the complex");
            axpy(c.terms, swaps % 2 ? f.neg(coeff) : coeff, SparseVec{{*idx, 1}}, f);
        } else {
            parse_fail(ln, "unexpected '" + t[0] + "'");
        }
    }
    if (c.dim < 0)
        fail(ErrorCode::Parse, "chain file has no dim line");
    return c;
}

std::string write_complex(const SimplicialComplex& K)
{
    std::ostringstream os;
    os << "complex 1\n";
    // A simplex is maximal when no simplex one dimension up contains it.
    for (int d = 0; d <= K.top_dim(); ++d) {
        std::vector<bool> covered(K.count(d));
        if (d + 1 <= K.top_dim())
            for (const auto& s : K.simplices(d + 1))
                for (int i = 0; i < s.size(); ++i)
                    covered[*K.index_of(s.face(i))] = true;
        for (std::size_t j = 0; j < covered.size(); ++j)
            if (!covered[j]) {
                os << "simplex";
                for (int v : K.simplex(d, j))
                    os << ' ' << v;
                os << '\n';
            }
    }
    return os.str();
}

SimplicialComplex read_complex(std::string_view text, int max_dim)
{
    const auto lines = content_lines(text);
    expect_header(lines, "complex");
    ComplexBuilder B(max_dim);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& [ln, s] = lines[k];
        auto t = tokens(s);
        if (t[0] != "simplex" || t.size() < 2 || t.size() > kMaxSimplexSize + 1)
            parse_fail(ln, "expected 'simplex v0 ... vk' with 1 to " + std::to_string(kMaxSimplexSize) + " vertices");
        std::vector<int> vs;
        for (std::size_t j = 1; j < t.size(); ++j) {
            vs.push_back(number<int>(t[j], ln));
            if (vs.back() < 0)
                parse_fail(ln, "vertex labels must be nonnegative");
        }
        try {
            B.add_with_faces(Simplex::from_unsorted(vs));
        } catch (const Error& e) {
            parse_fail(ln, e.what());
        }
    }
    return std::move(B).build();
}

MetricSample read_sample(std::string_view text)
{
    const auto lines = content_lines(text);
    expect_header(lines, "sample");
    MetricKind kind = MetricKind::Linear;
    double unit = 1;
    std::size_t n = 0;
    bool have_n = false;
    std::vector<std::string> labels;
    std::vector<std::int64_t> levels;
    std::size_t rows = 0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& [ln, s] = lines[k];
        auto t = tokens(s);
        if (t[0] == "kind" && t.size() == 2) {
            if (t[1] == "linear")
                kind = MetricKind::Linear;
            else if (t[1] == "euclidean-squared")
                kind = MetricKind::EuclideanSquared;
            else if (t[1] == "visual")
                kind = MetricKind::Visual;
            else
                parse_fail(ln, "unknown metric kind '" + t[1] + "'");
        } else if (t[0] == "unit" && t.size() == 2) {
            unit = number<double>(t[1], ln);
        } else if (t[0] == "points" && t.size() == 2) {
            n = number<std::size_t>(t[1], ln);
            if (n == 0 || n > 5000)
                parse_fail(ln, "point count must lie in [1, 5000]");
            have_n = true;
        } else if (t[0] == "label" && t.size() == 2) {
            labels.push_back(t[1]);
        } else if (t[0] == "row") {
            if (!have_n)
                parse_fail(ln, "row before points");
            if (t.size() != n + 1)
                parse_fail(ln, "row needs " + std::to_string(n) + " entries");
            for (std::size_t j = 1; j < t.size(); ++j)
                levels.push_back(t[j] == "inf" ? kInfiniteLevel : number<std::int64_t>(t[j], ln));
            ++rows;
        } else {
            parse_fail(ln, "unexpected '" + t[0] + "'");
        }
    }
    require(have_n && rows == n, ErrorCode::Parse, "sample needs a points line and exactly that many rows");
    return MetricSample("file", kind, unit, n, std::move(levels), std::move(labels));
}

SubdivisionFixture read_subdivision(std::string_view text)
{
    const auto lines = content_lines(text);
    expect_header(lines, "subdivision");
    std::int64_t den = 1'000'000;
    double tau = 0.05, delta = 0;
    Scale eps;
    std::vector<std::array<double, 2>> disk, image;
    std::vector<int> loop;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& [ln, s] = lines[k];
        auto t = tokens(s);
        if (t[0] == "den" && t.size() == 2)
            den = number<std::int64_t>(t[1], ln);
        else if (t[0] == "tau" && t.size() == 2)
            tau = number<double>(t[1], ln);
        else if (t[0] == "delta" && t.size() == 2)
            delta = number<double>(t[1], ln);
        else if (t[0] == "eps" && t.size() == 2)
            eps = Scale::parse(t[1]);
        else if (t[0] == "point" && t.size() == 5) {
            disk.push_back({number<double>(t[1], ln), number<double>(t[2], ln)});
            image.push_back({number<double>(t[3], ln), number<double>(t[4], ln)});
        } else if (t[0] == "loop") {
            for (std::size_t j = 1; j < t.size(); ++j)
                loop.push_back(number<int>(t[j], ln));
        } else
            parse_fail(ln, "unexpected '" + t[0] + "'");
    }
    require(delta > 0 && eps.value > 0, ErrorCode::Parse, "subdivision file needs positive delta and eps");
    DiskSample D = DiskSample::from_doubles(disk, den, tau);
    std::vector<DiskPoint> img;
    for (const auto& p : image)
        img.push_back({static_cast<std::int64_t>(std::trunc(p[0] * static_cast<double>(den))),
                       static_cast<std::int64_t>(std::trunc(p[1] * static_cast<double>(den)))});
    std::vector<int> phi(disk.size());
    for (std::size_t j = 0; j < phi.size(); ++j)
        phi[j] = static_cast<int>(j);
    return SubdivisionFixture{"file", std::move(D), euclidean_sample(den, img, "file"), std::move(phi), std::move(loop),
                              delta, eps};
}

}  // namespace hinf
