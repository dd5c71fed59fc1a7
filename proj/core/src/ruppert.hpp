// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// Internal interface between the triangulation front-end and the quality
// refinement pass. Not installed.

#ifndef PERCELL_SRC_RUPPERT_HPP
#define PERCELL_SRC_RUPPERT_HPP

#include <vector>

#include "percell/cdt.hpp"
#include "percell/mesh.hpp"

namespace percell::detail {

/// Delaunay quality refinement on a carved CDT: splits encroached constrained
/// segments at midpoints and inserts circumcenters of triangles that are
/// skinny (circumradius-to-shortest-edge above the bound implied by
/// `opt.min_angle_deg`) or larger than the size field. `vmarkers` holds one
/// marker per CDT vertex (super-vertices included) and is extended for every
/// vertex the pass inserts: segment midpoints inherit the segment marker,
/// circumcenters are interior.
void ruppert_refine(Cdt& cdt, const TriangulateOptions& opt,
                    std::vector<int>& vmarkers);

}  // namespace percell::detail

#endif  // PERCELL_SRC_RUPPERT_HPP
