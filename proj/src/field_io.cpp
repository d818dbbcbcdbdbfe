#include "rdo/field_io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rdo {

namespace {

void fail(const std::filesystem::path& p, const std::string& why) {
    throw std::runtime_error("field csv '" + p.string() + "': " + why);
}

}  // namespace

void write_field_csv(const std::filesystem::path& path, const VectorField& f) {
    std::FILE* fp = std::fopen(path.string().c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const Grid& g = f.grid();
    std::fprintf(fp, "# %d,%d,%.17g,%.17g,%d\n", g.nx, g.ny, g.lx, g.ly, f.components());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            std::fprintf(fp, "%d,%d,%.17g,%.17g", i, j, g.x_center(i), g.y_center(j));
            for (int c = 0; c < f.components(); ++c)
                std::fprintf(fp, ",%.17g", f.at(c, g.index(i, j)));
            std::fputc('\n', fp);
        }
    std::fclose(fp);
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
    VectorField v(f.grid(), 1);
    std::memcpy(v.component(0), f.data(), sizeof(double) * f.size());
    write_field_csv(path, v);
}

VectorField read_field_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    if (line.rfind("# ", 0) != 0) fail(path, "missing '# nx,ny,lx,ly,ncomp' header");
    int nx, ny, ncomp;
    double lx, ly;
    if (std::sscanf(line.c_str(), "# %d,%d,%lf,%lf,%d", &nx, &ny, &lx, &ly, &ncomp) != 5)
        fail(path, "malformed header");
    const Grid g = build_grid(nx, ny, lx, ly);
    VectorField f(g, ncomp);
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        int col = 0, i = -1, j = -1;
        while (std::getline(ss, tok, ',')) {
            if (col == 0)
                i = std::stoi(tok);
            else if (col == 1)
                j = std::stoi(tok);
            else if (col >= 4)
                f.at(col - 4, g.index(i, j)) = std::strtod(tok.c_str(), nullptr);
            ++col;
        }
        if (col != 4 + ncomp) fail(path, "bad column count in row " + std::to_string(rows));
        ++rows;
    }
    if (rows != g.cell_count()) fail(path, "expected one row per cell");
    return f;
}

ScalarField read_scalar_field_csv(const std::filesystem::path& path) {
    VectorField v = read_field_csv(path);
    if (v.components() != 1) fail(path, "expected a single component");
    ScalarField f(v.grid());
    std::memcpy(f.data(), v.component(0), sizeof(double) * f.size());
    return f;
}

}  // namespace rdo
