#pragma once

#include "roguewave/core.hpp"
#include "roguewave/mae.hpp"

namespace roguewave::initialdata {

/// u(x, y, 0) = 1 + eps [c+(delta y) e^{i kx x} + c-(delta y) e^{-i kx x} + stable modes]
/// on a 1-, 2- or 3-axis grid (the datum is uniform along z for 3 axes).
/// The x length must equal Lx; for the cosine envelope the y length must be a
/// whole number of envelope periods L_Y / delta.
ComplexField build_planar(const mae::CauchyData& data, const PeriodicGrid& grid);

/// Same datum with f and g evaluated at R = delta sqrt(y^2 + z^2) on a 3-axis grid.
/// Rejects boxes at whose transverse edge the envelope exceeds 1e-8.
ComplexField build_radial(const mae::CauchyData& data, const PeriodicGrid& grid);

/// 1 + eps e^{i phi} cos(kx x) cos(ky y) with phi = arccos(sqrt(kx^2 + eta1 ky^2) / 2)
/// (eta1 = -1 for the hyperbolic model). Outside the MI band 0 < kx^2 + eta1 ky^2 < 4
/// the datum is still built (phi clamped to the nearer band edge) and a warning is issued.
ComplexField build_doubly_periodic(double epsilon, double kx, double ky, const PeriodicGrid& grid, int eta1 = -1);

/// Phase of the doubly periodic datum; NaN outside the MI band.
double doubly_periodic_phi(double kx, double ky, int eta1 = -1);

}  // namespace roguewave::initialdata
