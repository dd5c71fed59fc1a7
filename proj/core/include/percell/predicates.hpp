// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// Robust geometric predicates: orientation and in-circle tests evaluated with
// a floating-point error filter and an exact rational fallback, plus a
// symbolically perturbed in-circle variant (lexicographic tie-breaking) that
// never reports an exact tie. Regular polygon inputs produce many cocircular
// quadruples; the perturbed predicate keeps the triangulation deterministic.

#ifndef PERCELL_PREDICATES_HPP
#define PERCELL_PREDICATES_HPP

#include "percell/geometry.hpp"

namespace percell {

/// Sign of the signed area of triangle (a,b,c): +1 counterclockwise,
/// -1 clockwise, 0 exactly collinear. Exact.
int orient2d(Point2 a, Point2 b, Point2 c);

/// Sign of the in-circle determinant: +1 if d lies strictly inside the circle
/// through (a,b,c) taken counterclockwise, -1 strictly outside, 0 cocircular.
/// Exact.
int incircle(Point2 a, Point2 b, Point2 c, Point2 d);

/// In-circle with symbolic perturbation: cocircular ties are broken by a
/// deterministic rule driven by the vertex indices (lower index = stronger
/// perturbation of the lifted coordinate). Never returns 0 for four distinct
/// points unless all four are collinear.
int incircle_perturbed(Point2 a, int ia, Point2 b, int ib, Point2 c, int ic,
                       Point2 d, int id);

}  // namespace percell

#endif  // PERCELL_PREDICATES_HPP
