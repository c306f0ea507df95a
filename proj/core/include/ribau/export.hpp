#pragma once

/// \file
/// Stereographic OBJ meshes of surfaces in S^3 and flat CSV dumps of sweeps.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ribau/grid.hpp"
#include "ribau/sweep.hpp"

namespace ribau {

/// Points with x4 above 1 - kPoleClearance (or below -1 + kPoleClearance
/// with the flipped pole) are clipped from meshes.
inline constexpr double kPoleClearance = 1e-6;

/// (x1, x2, x3) / (1 - x4), or / (1 + x4) projecting from the opposite pole.
std::array<double, 3> stereographic(const std::array<double, 4>& x, bool pole_flip = false);

struct MeshExport {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 4>> faces;  // 0-based
  std::vector<std::size_t> source;        // grid index of each vertex
  std::vector<std::string> scalar_names;
  std::vector<std::vector<double>> scalars;  // per vertex
  int clipped = 0;
  std::string warning;                    // non-empty when points were clipped
};

/// Row-major vertices from grid points of S^3 (non-finite points are
/// dropped as well), quads over every cell whose four corners survive,
/// wrapped across the seam of periodic axes.
MeshExport build_mesh(const Grid& grid, std::span<const std::array<double, 4>> points,
                      bool pole_flip = false);

/// Attaches a per-grid-point scalar to the surviving vertices.
void add_scalar(MeshExport& mesh, std::string name, std::span<const double> per_point);

/// Spatial parts of f (or fhat) at every grid point of a sweep.
std::vector<std::array<double, 4>> surface_points(const SweepReport& report, bool hat);

/// OBJ text: an optional comment line, `v x y z` lines, then 1-based `f` quads.
std::string to_obj(const MeshExport& mesh, std::string_view comment = {});

/// Reads back v/f statements; faces must be quads. Throws Error on malformed input.
MeshExport parse_obj(std::string_view text);

/// One row per grid point: u, v, regular, tau, a, b, mu2, alpha_u, alpha_v,
/// dalpha and the identity residuals.
std::string to_csv(const SweepReport& report);

}  // namespace ribau
