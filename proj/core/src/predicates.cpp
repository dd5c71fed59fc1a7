// Copyright (c) 2026 the percell authors
// SPDX-License-Identifier: Apache-2.0
//
// Filtered floating-point predicates with an exact rational fallback. The
// forward error bounds are the standard static-filter constants for the
// orientation and in-circle determinants; when the filter cannot certify the
// sign, the determinant is recomputed in exact rational arithmetic (doubles
// are dyadic rationals, so the conversion is lossless).

#include "percell/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cfloat>
#include <cmath>

namespace percell {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kEps = DBL_EPSILON / 2.0;  // 2^-53
const double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
const double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

int sign_of(const Rational& v) {
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

int orient2d_exact(Point2 a, Point2 b, Point2 c) {
  const Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  const Rational det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return sign_of(det);
}

int incircle_exact(Point2 a, Point2 b, Point2 c, Point2 d) {
  const Rational adx = Rational(a.x) - Rational(d.x);
  const Rational ady = Rational(a.y) - Rational(d.y);
  const Rational bdx = Rational(b.x) - Rational(d.x);
  const Rational bdy = Rational(b.y) - Rational(d.y);
  const Rational cdx = Rational(c.x) - Rational(d.x);
  const Rational cdy = Rational(c.y) - Rational(d.y);
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * (bdx * cdy - cdx * bdy) +
                       blift * (cdx * ady - adx * cdy) +
                       clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

}  // namespace

int orient2d(Point2 a, Point2 b, Point2 c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;

  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return (det > 0) - (det < 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return (det > 0) - (det < 0);
    detsum = -detleft - detright;
  } else {
    return orient2d_exact(a, b, c);
  }
  if (std::fabs(det) >= kOrientBound * detsum) return (det > 0) - (det < 0);
  return orient2d_exact(a, b, c);
}

int incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;

  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                     clift * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  if (std::fabs(det) > kIncircleBound * permanent) return (det > 0) - (det < 0);
  return incircle_exact(a, b, c, d);
}

int incircle_perturbed(Point2 a, int ia, Point2 b, int ib, Point2 c, int ic,
                       Point2 d, int id) {
  const int s = incircle(a, b, c, d);
  if (s != 0) return s;

  // Cocircular: perturb the lifted coordinate of each point by an amount that
  // decreases strictly with the vertex index. The perturbed determinant's
  // sign is the cofactor sign of the lowest-index point whose cofactor is
  // nonzero. Cofactors of the lifted column:
  //   C_a = +orient(b,c,d), C_b = -orient(a,c,d),
  //   C_c = +orient(a,b,d), C_d = -orient(a,b,c).
  struct Term {
    int index;
    int sign;
  };
  std::array<Term, 4> terms{{{ia, +orient2d(b, c, d)},
                             {ib, -orient2d(a, c, d)},
                             {ic, +orient2d(a, b, d)},
                             {id, -orient2d(a, b, c)}}};
  // Insertion sort by index ascending (4 elements).
  for (int i = 1; i < 4; ++i)
    for (int j = i; j > 0 && terms[j].index < terms[j - 1].index; --j)
      std::swap(terms[j], terms[j - 1]);
  for (const Term& t : terms)
    if (t.sign != 0) return t.sign;
  return 0;  // all four points collinear; unreachable for a real triangle
}

}  // namespace percell
