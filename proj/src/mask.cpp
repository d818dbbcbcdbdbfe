#include "rdo/mask.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rdo {

namespace {

// splitmix64; fixed algorithm so seeded masks are identical everywhere
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // unbiased bounded draw by rejection
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~0ULL - ~0ULL % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }
};

void check_box(const Grid& g, const MaskSpec& s) {
    if (!(s.x0 < s.x1) || !(s.y0 < s.y1))
        throw std::invalid_argument("mask: box must have positive extent");
    if (s.x0 < 0 || s.y0 < 0 || s.x1 > g.lx || s.y1 > g.ly)
        throw std::invalid_argument("mask: box outside the domain");
}

}  // namespace

MaskSpec MaskSpec::full() { return MaskSpec{}; }

MaskSpec MaskSpec::rectangle(double x0, double y0, double x1, double y1) {
    MaskSpec s;
    s.shape = Shape::rectangle;
    s.x0 = x0;
    s.y0 = y0;
    s.x1 = x1;
    s.y1 = y1;
    return s;
}

MaskSpec MaskSpec::pi_glyph(double x0, double y0, double x1, double y1) {
    MaskSpec s = rectangle(x0, y0, x1, y1);
    s.shape = Shape::pi_glyph;
    return s;
}

MaskSpec MaskSpec::random(double fraction, std::uint64_t seed) {
    MaskSpec s;
    s.shape = Shape::random;
    s.fraction = fraction;
    s.seed = seed;
    return s;
}

std::string MaskSpec::to_string() const {
    char buf[256];
    switch (shape) {
        case Shape::full:
            return "full";
        case Shape::rectangle:
            std::snprintf(buf, sizeof buf, "rectangle(%.17g,%.17g,%.17g,%.17g)", x0, y0, x1, y1);
            return buf;
        case Shape::pi_glyph:
            std::snprintf(buf, sizeof buf, "pi(%.17g,%.17g,%.17g,%.17g)", x0, y0, x1, y1);
            return buf;
        case Shape::random:
            std::snprintf(buf, sizeof buf, "random(%.17g,%llu)", fraction,
                          static_cast<unsigned long long>(seed));
            return buf;
    }
    return "full";
}

MaskSpec MaskSpec::parse(const std::string& text) {
    auto args_of = [&](size_t open) {
        if (text.back() != ')') throw std::invalid_argument("mask spec: missing ')' in " + text);
        std::string inner = text.substr(open + 1, text.size() - open - 2);
        std::vector<double> out;
        std::stringstream ss(inner);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
        return out;
    };
    if (text == "full") return full();
    if (text.rfind("rectangle(", 0) == 0) {
        auto a = args_of(text.find('('));
        if (a.size() != 4) throw std::invalid_argument("mask spec: rectangle needs 4 numbers");
        return rectangle(a[0], a[1], a[2], a[3]);
    }
    if (text.rfind("pi(", 0) == 0) {
        auto a = args_of(text.find('('));
        if (a.size() != 4) throw std::invalid_argument("mask spec: pi needs 4 numbers");
        return pi_glyph(a[0], a[1], a[2], a[3]);
    }
    if (text.rfind("random(", 0) == 0) {
        auto a = args_of(text.find('('));
        if (a.size() != 2) throw std::invalid_argument("mask spec: random needs fraction,seed");
        return random(a[0], static_cast<std::uint64_t>(a[1]));
    }
    throw std::invalid_argument("mask spec: cannot parse '" + text + "'");
}

SubdomainMask::SubdomainMask(const Grid& g, std::vector<int> labels)
    : grid_(g), labels_(std::move(labels)) {
    if (static_cast<int>(labels_.size()) != g.cell_count())
        throw std::invalid_argument("mask: label count must equal cell count");
    for (int l : labels_)
        if (l < 1) throw std::invalid_argument("mask: labels are 1-based");
    label_count_ = *std::max_element(labels_.begin(), labels_.end());
}

int SubdomainMask::cell_count(int label) const {
    return static_cast<int>(std::count(labels_.begin(), labels_.end(), label));
}

SubdomainMask make_mask(const Grid& g, const MaskSpec& spec) {
    std::vector<int> labels(g.cell_count(), 1);
    switch (spec.shape) {
        case MaskSpec::Shape::full:
            break;
        case MaskSpec::Shape::rectangle: {
            check_box(g, spec);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const double x = g.x_center(i), y = g.y_center(j);
                    if (x >= spec.x0 && x <= spec.x1 && y >= spec.y0 && y <= spec.y1)
                        labels[g.index(i, j)] = 2;
                }
            break;
        }
        case MaskSpec::Shape::pi_glyph: {
            check_box(g, spec);
            // cell-index bounding box of centers inside the geometric box
            int i0 = g.nx, i1 = -1, j0 = g.ny, j1 = -1;
            for (int i = 0; i < g.nx; ++i) {
                const double x = g.x_center(i);
                if (x >= spec.x0 && x <= spec.x1) {
                    i0 = std::min(i0, i);
                    i1 = std::max(i1, i);
                }
            }
            for (int j = 0; j < g.ny; ++j) {
                const double y = g.y_center(j);
                if (y >= spec.y0 && y <= spec.y1) {
                    j0 = std::min(j0, j);
                    j1 = std::max(j1, j);
                }
            }
            if (i1 < i0 || j1 < j0) break;  // box thinner than a cell: empty glyph
            const int bw = i1 - i0 + 1, bh = j1 - j0 + 1;
            const int bar = std::max(1, static_cast<int>(std::lround(0.12 * bh)));
            const int leg = std::max(1, static_cast<int>(std::lround(0.12 * bw)));
            const int inset = std::max(1, static_cast<int>(std::lround(0.18 * bw)));
            auto paint = [&](int ia, int ib, int ja, int jb) {
                ia = std::max(ia, i0);
                ib = std::min(ib, i1);
                ja = std::max(ja, j0);
                jb = std::min(jb, j1);
                for (int j = ja; j <= jb; ++j)
                    for (int i = ia; i <= ib; ++i) labels[g.index(i, j)] = 2;
            };
            paint(i0, i1, j1 - bar + 1, j1);                                // top bar
            paint(i0 + inset, i0 + inset + leg - 1, j0, j1 - bar);          // left leg
            paint(i1 - inset - leg + 1, i1 - inset, j0, j1 - bar);          // right leg
            break;
        }
        case MaskSpec::Shape::random: {
            if (spec.fraction < 0.0 || spec.fraction > 1.0)
                throw std::invalid_argument("mask: fraction must lie in [0,1]");
            const int nc = g.cell_count();
            const int m = static_cast<int>(std::lround(spec.fraction * nc));
            std::vector<int> perm(nc);
            std::iota(perm.begin(), perm.end(), 0);
            SplitMix64 rng{spec.seed};
            for (int i = nc - 1; i > 0; --i) {  // Fisher-Yates
                const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
                std::swap(perm[i], perm[k]);
            }
            for (int i = 0; i < m; ++i) labels[perm[i]] = 2;
            break;
        }
    }
    return SubdomainMask(g, std::move(labels));
}

}  // namespace rdo
