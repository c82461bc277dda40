#pragma once

#include <algorithm>
#include <vector>

namespace lgop::poly {

// dense univariate polynomials, ascending coefficients

template <typename T> std::vector<T> add(std::vector<T> const &a, std::vector<T> const &b)
{
  std::vector<T> c(std::max(a.size(), b.size()), T(0));
  for (std::size_t i = 0; i < a.size(); ++i) { c[i] += a[i]; }
  for (std::size_t i = 0; i < b.size(); ++i) { c[i] += b[i]; }
  return c;
}

template <typename T> std::vector<T> scale(std::vector<T> a, T s)
{
  for (auto &x : a) { x *= s; }
  return a;
}

template <typename T> std::vector<T> sub(std::vector<T> const &a, std::vector<T> const &b)
{
  return add(a, scale(b, T(-1)));
}

template <typename T> std::vector<T> mul(std::vector<T> const &a, std::vector<T> const &b)
{
  if (a.empty() || b.empty()) { return {}; }
  std::vector<T> c(a.size() + b.size() - 1, T(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) { c[i + j] += a[i] * b[j]; }
  }
  return c;
}

template <typename T, typename Z> Z eval(std::vector<T> const &a, Z const &z)
{
  Z acc(0);
  for (std::size_t i = a.size(); i-- > 0;) { acc = acc * z + Z(a[i]); }
  return acc;
}

template <typename T, typename Mag> std::vector<T> trim(std::vector<T> a, Mag tol)
{
  using std::abs;
  while (!a.empty() && abs(a.back()) <= tol) { a.pop_back(); }
  return a;
}

// polynomials in (z, S): p[s] is the z-polynomial multiplying S^s
template <typename T> using Bivariate = std::vector<std::vector<T>>;

template <typename T> Bivariate<T> badd(Bivariate<T> const &a, Bivariate<T> const &b)
{
  Bivariate<T> c(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = add(i < a.size() ? a[i] : std::vector<T>{}, i < b.size() ? b[i] : std::vector<T>{});
  }
  return c;
}

template <typename T> Bivariate<T> bmul(Bivariate<T> const &a, Bivariate<T> const &b)
{
  if (a.empty() || b.empty()) { return {}; }
  Bivariate<T> c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) { c[i + j] = add(c[i + j], mul(a[i], b[j])); }
  }
  return c;
}

template <typename T> Bivariate<T> bscale(Bivariate<T> a, T s)
{
  for (auto &x : a) { x = scale(x, s); }
  return a;
}

template <typename T> Bivariate<T> bsub(Bivariate<T> const &a, Bivariate<T> const &b)
{
  return badd(a, bscale(b, T(-1)));
}

} // namespace lgop::poly
