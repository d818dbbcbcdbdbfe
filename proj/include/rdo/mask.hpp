#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdo/grid.hpp"

namespace rdo {

/// Geometric description of the Omega_1/Omega_2 decomposition. Cells whose
/// centers fall inside the shape get label 2, the rest label 1.
struct MaskSpec {
    enum class Shape { full, rectangle, pi_glyph, random };
    Shape shape = Shape::full;
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // rectangle / pi_glyph bounding box
    double fraction = 0;                    // random
    std::uint64_t seed = 0;                 // random

    static MaskSpec full();
    static MaskSpec rectangle(double x0, double y0, double x1, double y1);
    static MaskSpec pi_glyph(double x0, double y0, double x1, double y1);
    static MaskSpec random(double fraction, std::uint64_t seed);

    std::string to_string() const;
    static MaskSpec parse(const std::string& text);
};

/// Per-cell subdomain labels in {1, ..., J}.
class SubdomainMask {
public:
    SubdomainMask() = default;
    SubdomainMask(const Grid& g, std::vector<int> labels);

    const Grid& grid() const { return grid_; }
    int label(int cell) const { return labels_[cell]; }
    int label(int i, int j) const { return labels_[grid_.index(i, j)]; }
    const std::vector<int>& labels() const { return labels_; }
    int label_count() const { return label_count_; }  // J

    int cell_count(int label) const;
    double measure(int label) const { return cell_count(label) * grid_.cell_volume(); }

private:
    Grid grid_;
    std::vector<int> labels_;
    int label_count_ = 0;
};

SubdomainMask make_mask(const Grid& g, const MaskSpec& spec);

}  // namespace rdo
