#pragma once

#include <filesystem>

#include "rdo/field.hpp"

namespace rdo {

/// CSV layout: header line "# nx,ny,lx,ly,ncomp" with the actual values,
/// then one row per cell "i,j,x,y,value[,value...]" (j outer, i inner).
/// Doubles are printed with 17 significant digits, so write/read round-trips
/// are bit-exact.
void write_field_csv(const std::filesystem::path& path, const VectorField& f);
void write_field_csv(const std::filesystem::path& path, const ScalarField& f);

VectorField read_field_csv(const std::filesystem::path& path);
ScalarField read_scalar_field_csv(const std::filesystem::path& path);

}  // namespace rdo
