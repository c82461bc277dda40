#include "lgop/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lgop {

namespace {

double cross(Cx a, Cx b) { return a.real() * b.imag() - a.imag() * b.real(); }

int orient(Cx a, Cx b, Cx c)
{
  double const v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool on_segment(Cx a, Cx b, Cx p)
{
  return std::min(a.real(), b.real()) <= p.real() && p.real() <= std::max(a.real(), b.real()) &&
         std::min(a.imag(), b.imag()) <= p.imag() && p.imag() <= std::max(a.imag(), b.imag());
}

} // namespace

double shoelace_area(std::vector<Cx> const &poly)
{
  double s = 0;
  std::size_t const n = poly.size();
  for (std::size_t i = 0; i < n; ++i) { s += cross(poly[i], poly[(i + 1) % n]); }
  return 0.5 * s;
}

bool point_in_polygon(std::vector<Cx> const &poly, Cx p)
{
  bool inside = false;
  std::size_t const n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    Cx const a = poly[i], b = poly[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      double const x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (p.real() < x) { inside = !inside; }
    }
  }
  return inside;
}

bool segments_intersect(Cx p1, Cx p2, Cx q1, Cx q2)
{
  int const o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  int const o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) { return true; }
  if (o1 == 0 && on_segment(p1, p2, q1)) { return true; }
  if (o2 == 0 && on_segment(p1, p2, q2)) { return true; }
  if (o3 == 0 && on_segment(q1, q2, p1)) { return true; }
  if (o4 == 0 && on_segment(q1, q2, p2)) { return true; }
  return false;
}

bool polygon_self_intersects(std::vector<Cx> const &poly)
{
  std::size_t const n = poly.size();
  if (n < 4) { return false; }
  struct Seg
  {
    double xlo, xhi, ylo, yhi;
    std::size_t i;
  };
  std::vector<Seg> segs(n);
  for (std::size_t i = 0; i < n; ++i) {
    Cx const a = poly[i], b = poly[(i + 1) % n];
    segs[i] = {std::min(a.real(), b.real()), std::max(a.real(), b.real()), std::min(a.imag(), b.imag()),
               std::max(a.imag(), b.imag()), i};
  }
  std::sort(segs.begin(), segs.end(), [](Seg const &x, Seg const &y) { return x.xlo < y.xlo; });
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n && segs[t].xlo <= segs[s].xhi; ++t) {
      Seg const &A = segs[s], &B = segs[t];
      if (A.yhi < B.ylo || B.yhi < A.ylo) { continue; }
      std::size_t const i = A.i, j = B.i;
      // neighbours share a vertex
      if ((i + 1) % n == j || (j + 1) % n == i) { continue; }
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) { return true; }
    }
  }
  return false;
}

double point_segment_distance(Cx p, Cx a, Cx b)
{
  Cx const d = b - a;
  double const L2 = std::norm(d);
  if (L2 == 0) { return std::abs(p - a); }
  double const t = std::clamp(((p - a) * std::conj(d)).real() / L2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double point_polyline_distance(Cx p, std::vector<Cx> const &line)
{
  if (line.empty()) { return std::numeric_limits<double>::infinity(); }
  if (line.size() == 1) { return std::abs(p - line[0]); }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
  }
  return best;
}

} // namespace lgop
