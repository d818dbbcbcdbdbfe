#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>

#include "rdo/field.hpp"
#include "rdo/field_io.hpp"
#include "rdo/kernels.hpp"
#include "support/test_rng.hpp"

using namespace rdo;

namespace {

ScalarField random_field(const Grid& g, testsupport::Rng& rng, double lo = -3.0, double hi = 3.0) {
    ScalarField f(g);
    for (int c = 0; c < f.size(); ++c) f[c] = rng.uniform(lo, hi);
    return f;
}

}  // namespace

TEST_CASE("Lp norm bounded by measure-weighted sup norm") {
    testsupport::Rng rng(11);
    const Grid g = build_grid(17, 9, 1.3, 0.7);
    for (int trial = 0; trial < 20; ++trial) {
        const ScalarField f = random_field(g, rng);
        for (double p : {1.0, 2.0, 3.0, 7.0}) {
            const double lhs = lp_norm(f, p);
            const double rhs = std::pow(g.volume(), 1.0 / p) * sup_norm(f);
            CHECK(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("mean and inner product basics") {
    const Grid g = build_grid(8, 8, 1.0, 1.0);
    ScalarField f(g, 2.5);
    CHECK(mean(f) == doctest::Approx(2.5).epsilon(1e-15));
    ScalarField one(g, 1.0);
    CHECK(inner(f, one) == doctest::Approx(2.5 * g.volume()).epsilon(1e-13));
}

TEST_CASE("blocked sum matches serial reference") {
    testsupport::Rng rng(23);
    std::vector<double> a(20000);
    for (auto& x : a) x = rng.uniform(-1, 1);
    const double blocked = kernels::sum(a.data(), static_cast<int>(a.size()));
    const double serial = kernels::sum_serial(a.data(), static_cast<int>(a.size()));
    CHECK(blocked == doctest::Approx(serial).epsilon(1e-13));
}

TEST_CASE("max kernels agree with serial reference bitwise") {
    testsupport::Rng rng(37);
    std::vector<double> a(10001), b(10001);
    for (size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.uniform(-5, 5);
        b[i] = rng.uniform(-5, 5);
    }
    const int n = static_cast<int>(a.size());
    CHECK(kernels::max_abs(a.data(), n) == kernels::max_abs_serial(a.data(), n));
    CHECK(kernels::max_abs_diff(a.data(), b.data(), n) ==
          kernels::max_abs_diff_serial(a.data(), b.data(), n));
}

TEST_CASE("field csv round-trip is bit-exact") {
    testsupport::Rng rng(53);
    const Grid g = build_grid(7, 5, 1.0, 2.0);
    VectorField f(g, 2);
    for (int c = 0; c < 2; ++c)
        for (int cell = 0; cell < g.cell_count(); ++cell)
            f.at(c, cell) = rng.uniform(-1e3, 1e3) * std::pow(10.0, rng.below(7) - 3);
    f.at(0, 0) = 1.0 / 3.0;
    f.at(1, 3) = -0.0;
    const auto path = std::filesystem::temp_directory_path() / "rdo_field_roundtrip.csv";
    write_field_csv(path, f);
    const VectorField back = read_field_csv(path);
    REQUIRE(back.components() == 2);
    REQUIRE(back.grid() == g);
    for (int c = 0; c < 2; ++c)
        for (int cell = 0; cell < g.cell_count(); ++cell) {
            // bit-exact: compare representations, not values
            const double x = f.at(c, cell), y = back.at(c, cell);
            CHECK(std::memcmp(&x, &y, sizeof x) == 0);
        }
    std::filesystem::remove(path);
}

TEST_CASE("scalar csv round-trip") {
    const Grid g = build_grid(4, 1, 1.0, 1.0);  // 1-D grid serializes too
    ScalarField f(g);
    for (int c = 0; c < f.size(); ++c) f[c] = std::sqrt(2.0) * (c + 1);
    const auto path = std::filesystem::temp_directory_path() / "rdo_scalar_roundtrip.csv";
    write_field_csv(path, f);
    const ScalarField back = read_scalar_field_csv(path);
    for (int c = 0; c < f.size(); ++c) CHECK(back[c] == f[c]);
    std::filesystem::remove(path);
}
