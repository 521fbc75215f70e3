#pragma once

// Umbrella header for the slicereg library: numerical slice-regular
// function theory over the quaternions.
//
//   quaternion.hpp       arithmetic, slice units, 2-spheres, distances
//   slice_function.hpp   slice functions, star products, CR residuals
//   cauchy_kernel.hpp    the slice Cauchy kernels and the squared kernel
//   contour.hpp          slice-plane contours and adaptive quadrature
//   cauchy_transform.hpp Cauchy transforms, splitting, jumps, Hoelder data
//   series.hpp           Laurent and spherical Laurent series machinery
//   global_operator.hpp  the degenerate global operator, its adjoints,
//                        fundamental-solution pairing and area solver

#include "slicereg/cauchy_kernel.hpp"
#include "slicereg/cauchy_transform.hpp"
#include "slicereg/contour.hpp"
#include "slicereg/errors.hpp"
#include "slicereg/global_operator.hpp"
#include "slicereg/quaternion.hpp"
#include "slicereg/rng.hpp"
#include "slicereg/series.hpp"
#include "slicereg/slice_function.hpp"
