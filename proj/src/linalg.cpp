// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pepv
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

// ---------------------------------------------------------------------------
// CMatrix

CMatrix::CMatrix(std::size_t rows, std::size_t cols, Complex fill)
  : nrows(rows), ncols(cols), data(rows * cols, fill)
{
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
{
  nrows = rows.size();
  ncols = nrows ? rows.begin()->size() : 0;
  data.reserve(nrows * ncols);
  for (const auto &r : rows)
  {
    if (r.size() != ncols)
    {
      ThrowValidation("RaggedMatrix", "initializer rows differ in length");
    }
    data.insert(data.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::Identity(std::size_t n)
{
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; i++)
  {
    m(i, i) = 1.0;
  }
  return m;
}

CMatrix CMatrix::Diagonal(const CVector &d)
{
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); i++)
  {
    m(i, i) = d[i];
  }
  return m;
}

CVector CMatrix::Col(std::size_t j) const
{
  CVector v(nrows);
  for (std::size_t i = 0; i < nrows; i++)
  {
    v[i] = (*this)(i, j);
  }
  return v;
}

void CMatrix::SetCol(std::size_t j, const CVector &v)
{
  for (std::size_t i = 0; i < nrows; i++)
  {
    (*this)(i, j) = v[i];
  }
}

CMatrix CMatrix::Block(std::size_t i0, std::size_t j0, std::size_t rows, std::size_t cols) const
{
  CMatrix b(rows, cols);
  for (std::size_t i = 0; i < rows; i++)
  {
    for (std::size_t j = 0; j < cols; j++)
    {
      b(i, j) = (*this)(i0 + i, j0 + j);
    }
  }
  return b;
}

void CMatrix::SetBlock(std::size_t i0, std::size_t j0, const CMatrix &b)
{
  for (std::size_t i = 0; i < b.Rows(); i++)
  {
    for (std::size_t j = 0; j < b.Cols(); j++)
    {
      (*this)(i0 + i, j0 + j) = b(i, j);
    }
  }
}

CMatrix CMatrix::Adjoint() const
{
  CMatrix t(ncols, nrows);
  for (std::size_t i = 0; i < nrows; i++)
  {
    for (std::size_t j = 0; j < ncols; j++)
    {
      t(j, i) = std::conj((*this)(i, j));
    }
  }
  return t;
}

double CMatrix::FrobeniusNorm() const
{
  return Norm2(data);
}

double CMatrix::MaxAbs() const
{
  return NormInf(data);
}

bool CMatrix::AllFinite() const
{
  return std::all_of(data.begin(), data.end(), [](const Complex &c)
                     { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

CMatrix &CMatrix::operator+=(const CMatrix &o)
{
  for (std::size_t k = 0; k < data.size(); k++)
  {
    data[k] += o.data[k];
  }
  return *this;
}

CMatrix &CMatrix::operator-=(const CMatrix &o)
{
  for (std::size_t k = 0; k < data.size(); k++)
  {
    data[k] -= o.data[k];
  }
  return *this;
}

CMatrix &CMatrix::operator*=(Complex s)
{
  for (auto &c : data)
  {
    c *= s;
  }
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix &b)
{
  return a += b;
}

CMatrix operator-(CMatrix a, const CMatrix &b)
{
  return a -= b;
}

CMatrix operator*(CMatrix a, Complex s)
{
  return a *= s;
}

CMatrix operator*(Complex s, CMatrix a)
{
  return a *= s;
}

CMatrix operator*(const CMatrix &a, const CMatrix &b)
{
  CMatrix c(a.Rows(), b.Cols());
  for (std::size_t i = 0; i < a.Rows(); i++)
  {
    for (std::size_t k = 0; k < a.Cols(); k++)
    {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0))
      {
        continue;
      }
      for (std::size_t j = 0; j < b.Cols(); j++)
      {
        c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

CVector operator*(const CMatrix &a, const CVector &x)
{
  CVector y(a.Rows());
  for (std::size_t i = 0; i < a.Rows(); i++)
  {
    Complex s = 0.0;
    for (std::size_t j = 0; j < a.Cols(); j++)
    {
      s += a(i, j) * x[j];
    }
    y[i] = s;
  }
  return y;
}

// ---------------------------------------------------------------------------
// LU

LuDecomposition::LuDecomposition(const CMatrix &a) : lu(a), perm(a.Rows())
{
  if (a.Rows() != a.Cols())
  {
    ThrowValidation("NotSquare", "LU requires a square matrix");
  }
  if (!a.AllFinite())
  {
    ThrowNumerical("NonFinite", "matrix has NaN/Inf entries");
  }
  const std::size_t n = a.Rows();
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> row_scale(n, 0.0);
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t j = 0; j < n; j++)
    {
      row_scale[i] = std::max(row_scale[i], std::abs(a(i, j)));
    }
  }
  for (std::size_t k = 0; k < n; k++)
  {
    std::size_t p = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; i++)
    {
      if (std::abs(lu(i, k)) > best)
      {
        best = std::abs(lu(i, k));
        p = i;
      }
    }
    if (p != k)
    {
      for (std::size_t j = 0; j < n; j++)
      {
        std::swap(lu(k, j), lu(p, j));
      }
      std::swap(perm[k], perm[p]);
      sign = -sign;
    }
    if (best == 0.0 || best < 1e-14 * row_scale[perm[k]])
    {
      ThrowNumerical("Singular", "pivot " + std::to_string(k) + " below 1e-14 of its row scale");
    }
    const Complex pivot = lu(k, k);
    for (std::size_t i = k + 1; i < n; i++)
    {
      const Complex l = lu(i, k) / pivot;
      lu(i, k) = l;
      if (l == Complex(0.0))
      {
        continue;
      }
      for (std::size_t j = k + 1; j < n; j++)
      {
        lu(i, j) -= l * lu(k, j);
      }
    }
  }
}

CVector LuDecomposition::Solve(const CVector &b) const
{
  const std::size_t n = lu.Rows();
  CVector x(n);
  for (std::size_t i = 0; i < n; i++)
  {
    x[i] = b[perm[i]];
  }
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t j = 0; j < i; j++)
    {
      x[i] -= lu(i, j) * x[j];
    }
  }
  for (std::size_t ii = n; ii-- > 0;)
  {
    for (std::size_t j = ii + 1; j < n; j++)
    {
      x[ii] -= lu(ii, j) * x[j];
    }
    x[ii] /= lu(ii, ii);
  }
  return x;
}

CMatrix LuDecomposition::Solve(const CMatrix &b) const
{
  if (b.Rows() != lu.Rows())
  {
    ThrowValidation("DimensionMismatch", "right-hand side row count differs from matrix size");
  }
  CMatrix x(b.Rows(), b.Cols());
  for (std::size_t j = 0; j < b.Cols(); j++)
  {
    x.SetCol(j, Solve(b.Col(j)));
  }
  return x;
}

Complex LuDecomposition::Determinant() const
{
  Complex d = static_cast<double>(sign);
  for (std::size_t i = 0; i < lu.Rows(); i++)
  {
    d *= lu(i, i);
  }
  return d;
}

CMatrix LuDecomposition::L() const
{
  const std::size_t n = lu.Rows();
  CMatrix l = CMatrix::Identity(n);
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t j = 0; j < i; j++)
    {
      l(i, j) = lu(i, j);
    }
  }
  return l;
}

CMatrix LuDecomposition::U() const
{
  const std::size_t n = lu.Rows();
  CMatrix u(n, n);
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t j = i; j < n; j++)
    {
      u(i, j) = lu(i, j);
    }
  }
  return u;
}

CMatrix LuSolve(const CMatrix &a, const CMatrix &b)
{
  return LuDecomposition(a).Solve(b);
}

// ---------------------------------------------------------------------------
// SVD

namespace
{

Svd JacobiSvdTall(const CMatrix &a, int max_sweeps)
{
  const std::size_t m = a.Rows(), n = a.Cols();
  CMatrix w = a;
  CMatrix v = CMatrix::Identity(n);
  bool rotated = true;
  int sweep = 0;
  while (rotated)
  {
    if (sweep++ >= max_sweeps)
    {
      ThrowNumerical("NoConvergence", "Jacobi SVD exceeded " + std::to_string(max_sweeps) +
                                          " sweeps");
    }
    rotated = false;
    for (std::size_t p = 0; p + 1 < n; p++)
    {
      for (std::size_t q = p + 1; q < n; q++)
      {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < m; k++)
        {
          alpha += std::norm(w(k, p));
          beta += std::norm(w(k, q));
          gamma += std::conj(w(k, p)) * w(k, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= 4.0 * kEps * std::sqrt(alpha * beta))
        {
          continue;
        }
        rotated = true;
        const Complex phase = std::conj(gamma / g);
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; k++)
        {
          const Complex xp = w(k, p), xq = w(k, q) * phase;
          w(k, p) = c * xp - s * xq;
          w(k, q) = s * xp + c * xq;
        }
        for (std::size_t k = 0; k < n; k++)
        {
          const Complex xp = v(k, p), xq = v(k, q) * phase;
          v(k, p) = c * xp - s * xq;
          v(k, q) = s * xp + c * xq;
        }
      }
    }
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; j++)
  {
    norms[j] = Norm2(w.Col(j));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

  Svd out{CMatrix(m, n), std::vector<double>(n), CMatrix(n, n)};
  std::vector<bool> filled(n, false);
  for (std::size_t jj = 0; jj < n; jj++)
  {
    const std::size_t j = order[jj];
    out.sigma[jj] = norms[j];
    for (std::size_t k = 0; k < n; k++)
    {
      out.v(k, jj) = v(k, j);
    }
    if (norms[j] > std::numeric_limits<double>::min())
    {
      for (std::size_t k = 0; k < m; k++)
      {
        out.u(k, jj) = w(k, j) / norms[j];
      }
      filled[jj] = true;
    }
  }
  // Zero singular values: complete U with an orthonormal basis.
  std::size_t probe = 0;
  for (std::size_t jj = 0; jj < n; jj++)
  {
    if (filled[jj])
    {
      continue;
    }
    while (probe < m)
    {
      CVector e(m, 0.0);
      e[probe++] = 1.0;
      for (int pass = 0; pass < 2; pass++)
      {
        for (std::size_t c = 0; c < n; c++)
        {
          if (!filled[c])
          {
            continue;
          }
          Complex dot = 0.0;
          for (std::size_t k = 0; k < m; k++)
          {
            dot += std::conj(out.u(k, c)) * e[k];
          }
          for (std::size_t k = 0; k < m; k++)
          {
            e[k] -= dot * out.u(k, c);
          }
        }
      }
      const double nrm = Norm2(e);
      if (nrm > 1e-8)
      {
        for (std::size_t k = 0; k < m; k++)
        {
          out.u(k, jj) = e[k] / nrm;
        }
        filled[jj] = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace

Svd ComputeSvd(const CMatrix &a, int max_sweeps)
{
  if (!a.AllFinite())
  {
    ThrowNumerical("NonFinite", "matrix has NaN/Inf entries");
  }
  if (a.Rows() >= a.Cols())
  {
    return JacobiSvdTall(a, max_sweeps);
  }
  Svd t = JacobiSvdTall(a.Adjoint(), max_sweeps);
  return Svd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

// ---------------------------------------------------------------------------
// Nonsymmetric eigenproblem

namespace
{

// Unitary 2x2 G = [[c, s], [-conj(s), c]] with G * (a, b)^T = (r, 0)^T.
struct Givens
{
  double c = 1.0;
  Complex s = 0.0;

  static Givens Make(Complex a, Complex b)
  {
    Givens g;
    const double aa = std::abs(a), bb = std::abs(b);
    if (bb == 0.0)
    {
      return g;
    }
    if (aa == 0.0)
    {
      g.c = 0.0;
      g.s = std::conj(b) / bb;
      return g;
    }
    const double r = std::hypot(aa, bb);
    g.c = aa / r;
    g.s = (a / aa) * std::conj(b) / r;
    return g;
  }

  // Rows i, i+1 of m, columns [j0, end).
  void ApplyLeft(CMatrix &m, std::size_t i, std::size_t j0) const
  {
    for (std::size_t j = j0; j < m.Cols(); j++)
    {
      const Complex x = m(i, j), y = m(i + 1, j);
      m(i, j) = c * x + s * y;
      m(i + 1, j) = -std::conj(s) * x + c * y;
    }
  }

  // Columns i, i+1 of m (multiply by G^H), rows [0, row_end).
  void ApplyRightAdjoint(CMatrix &m, std::size_t i, std::size_t row_end) const
  {
    for (std::size_t k = 0; k < row_end; k++)
    {
      const Complex x = m(k, i), y = m(k, i + 1);
      m(k, i) = c * x + std::conj(s) * y;
      m(k, i + 1) = -s * x + c * y;
    }
  }
};

// Diagonal similarity D^{-1} A D with power-of-two entries.
std::vector<double> Balance(CMatrix &a)
{
  const std::size_t n = a.Rows();
  std::vector<double> scale(n, 1.0);
  constexpr double radix = 2.0;
  bool converged = false;
  int guard = 0;
  while (!converged && guard++ < 100)
  {
    converged = true;
    for (std::size_t i = 0; i < n; i++)
    {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; j++)
      {
        if (j != i)
        {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      }
      if (c == 0.0 || r == 0.0)
      {
        continue;
      }
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g)
      {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c >= g)
      {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s)
      {
        converged = false;
        scale[i] *= f;
        for (std::size_t j = 0; j < n; j++)
        {
          a(i, j) /= f;
          a(j, i) *= f;
        }
      }
    }
  }
  return scale;
}

// Householder reduction to upper Hessenberg form, A = Q H Q^H.
void Hessenberg(CMatrix &h, CMatrix &q)
{
  const std::size_t n = h.Rows();
  q = CMatrix::Identity(n);
  for (std::size_t k = 0; k + 2 < n; k++)
  {
    CVector v(n - k - 1);
    for (std::size_t i = k + 1; i < n; i++)
    {
      v[i - k - 1] = h(i, k);
    }
    const double xnorm = Norm2(v);
    if (xnorm == 0.0)
    {
      continue;
    }
    const Complex phase = std::abs(v[0]) == 0.0 ? Complex(1.0) : v[0] / std::abs(v[0]);
    v[0] += phase * xnorm;
    const double vnorm = Norm2(v);
    for (auto &c : v)
    {
      c /= vnorm;
    }
    // H <- (I - 2vv^H) H
    for (std::size_t j = 0; j < n; j++)
    {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < v.size(); i++)
      {
        dot += std::conj(v[i]) * h(k + 1 + i, j);
      }
      dot *= 2.0;
      for (std::size_t i = 0; i < v.size(); i++)
      {
        h(k + 1 + i, j) -= v[i] * dot;
      }
    }
    // H <- H (I - 2vv^H), Q <- Q (I - 2vv^H)
    for (CMatrix *m : {&h, &q})
    {
      for (std::size_t r = 0; r < n; r++)
      {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < v.size(); i++)
        {
          dot += (*m)(r, k + 1 + i) * v[i];
        }
        dot *= 2.0;
        for (std::size_t i = 0; i < v.size(); i++)
        {
          (*m)(r, k + 1 + i) -= dot * std::conj(v[i]);
        }
      }
    }
    for (std::size_t i = k + 2; i < n; i++)
    {
      h(i, k) = 0.0;
    }
  }
}

Complex WilkinsonShift(const CMatrix &t, std::size_t iu)
{
  const Complex a = t(iu - 1, iu - 1), b = t(iu - 1, iu), c = t(iu, iu - 1), d = t(iu, iu);
  const Complex p = 0.5 * (a - d);
  const Complex bc = b * c;
  Complex disc = std::sqrt(p * p + bc);
  if (std::abs(p - disc) > std::abs(p + disc))
  {
    disc = -disc;
  }
  const Complex denom = p + disc;
  if (std::abs(denom) == 0.0)
  {
    return d;
  }
  return d - bc / denom;
}

// Inverse iteration for (H - lambda I) y = b on an upper Hessenberg matrix.
CVector HessenbergInverseIteration(const CMatrix &h, Complex lambda, double hnorm)
{
  const std::size_t n = h.Rows();
  const double tiny = std::max(hnorm, 1.0) * kEps;
  CMatrix m = h;
  const Complex shifted = lambda + Complex(tiny, 0.0);
  for (std::size_t i = 0; i < n; i++)
  {
    m(i, i) -= shifted;
  }
  std::vector<bool> swapped(n, false);
  for (std::size_t k = 0; k + 1 < n; k++)
  {
    if (std::abs(m(k + 1, k)) > std::abs(m(k, k)))
    {
      for (std::size_t j = k; j < n; j++)
      {
        std::swap(m(k, j), m(k + 1, j));
      }
      swapped[k] = true;
    }
    if (std::abs(m(k, k)) < tiny)
    {
      m(k, k) = tiny;
    }
    const Complex l = m(k + 1, k) / m(k, k);
    m(k + 1, k) = l;
    for (std::size_t j = k + 1; j < n; j++)
    {
      m(k + 1, j) -= l * m(k, j);
    }
  }
  if (std::abs(m(n - 1, n - 1)) < tiny)
  {
    m(n - 1, n - 1) = tiny;
  }

  CVector y(n, 1.0);
  for (int it = 0; it < 3; it++)
  {
    for (std::size_t k = 0; k + 1 < n; k++)
    {
      if (swapped[k])
      {
        std::swap(y[k], y[k + 1]);
      }
      y[k + 1] -= m(k + 1, k) * y[k];
    }
    for (std::size_t ii = n; ii-- > 0;)
    {
      for (std::size_t j = ii + 1; j < n; j++)
      {
        y[ii] -= m(ii, j) * y[j];
      }
      y[ii] /= m(ii, ii);
    }
    const double nrm = Norm2(y);
    for (auto &c : y)
    {
      c /= nrm;
    }
  }
  return y;
}

}  // namespace

EigenDecomposition EigDense(const CMatrix &a, bool want_vectors)
{
  if (a.Rows() != a.Cols())
  {
    ThrowValidation("NotSquare", "eigendecomposition requires a square matrix");
  }
  if (!a.AllFinite())
  {
    ThrowNumerical("NonFinite", "matrix has NaN/Inf entries");
  }
  const std::size_t n = a.Rows();
  EigenDecomposition out;
  if (n == 0)
  {
    return out;
  }

  CMatrix h = a;
  const std::vector<double> scale = Balance(h);
  CMatrix q;
  Hessenberg(h, q);
  const CMatrix hess = h;
  const double hnorm = h.FrobeniusNorm();

  // Shifted QR on the active block [il, iu]; only eigenvalues are needed from
  // the triangularized matrix, so the Schur vectors are not accumulated.
  CMatrix t = h;
  std::size_t iu = n - 1;
  int iter = 0, total = 0;
  const int max_total = 30 * static_cast<int>(n) + 60;
  CounterRng rng(0x5eedULL, n);
  while (iu > 0)
  {
    const double sub = std::abs(t(iu, iu - 1));
    if (sub <= kEps * (std::abs(t(iu - 1, iu - 1)) + std::abs(t(iu, iu))) ||
        sub <= std::numeric_limits<double>::min())
    {
      t(iu, iu - 1) = 0.0;
      iu--;
      iter = 0;
      continue;
    }
    if (++total > max_total)
    {
      out.converged = false;
      break;
    }
    iter++;
    std::size_t il = iu - 1;
    while (il > 0)
    {
      const double s = std::abs(t(il, il - 1));
      if (s <= kEps * (std::abs(t(il - 1, il - 1)) + std::abs(t(il, il))))
      {
        t(il, il - 1) = 0.0;
        break;
      }
      il--;
    }
    Complex shift = WilkinsonShift(t, iu);
    if (iter % 30 == 0)
    {
      // Stagnation: random exceptional shift.
      shift = t(iu, iu) + std::abs(t(iu, iu - 1)) * rng.UnitComplex();
    }
    Givens g = Givens::Make(t(il, il) - shift, t(il + 1, il));
    g.ApplyLeft(t, il, il);
    g.ApplyRightAdjoint(t, il, std::min(il + 2, iu) + 1);
    for (std::size_t i = il + 1; i < iu; i++)
    {
      g = Givens::Make(t(i, i - 1), t(i + 1, i - 1));
      g.ApplyLeft(t, i, i - 1);
      t(i + 1, i - 1) = 0.0;
      g.ApplyRightAdjoint(t, i, std::min(i + 2, iu) + 1);
    }
  }

  out.values.resize(n);
  for (std::size_t i = 0; i < n; i++)
  {
    out.values[i] = t(i, i);
  }
  if (!out.converged)
  {
    ThrowNumerical("NoConvergence", "QR iteration exceeded " + std::to_string(max_total) +
                                        " iterations; eigenvalues below row " +
                                        std::to_string(iu) + " are converged");
  }
  if (!want_vectors)
  {
    return out;
  }

  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; k++)
  {
    CVector y = HessenbergInverseIteration(hess, out.values[k], hnorm);
    CVector x = q * y;
    for (std::size_t i = 0; i < n; i++)
    {
      x[i] *= scale[i];
    }
    const double nrm = Norm2(x);
    for (auto &c : x)
    {
      c /= nrm;
    }
    out.vectors.SetCol(k, x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial roots

CVector PolyRoots(const CVector &coeffs)
{
  if (coeffs.size() < 2)
  {
    ThrowValidation("DegreeTooLow", "polynomial must have degree >= 1");
  }
  const std::size_t deg = coeffs.size() - 1;
  const Complex lead = coeffs.back();
  if (lead == Complex(0.0))
  {
    ThrowValidation("ZeroLeadingCoefficient", "leading coefficient is zero");
  }
  CMatrix companion(deg, deg);
  for (std::size_t j = 0; j < deg; j++)
  {
    companion(0, j) = -coeffs[deg - 1 - j] / lead;
  }
  for (std::size_t i = 1; i < deg; i++)
  {
    companion(i, i - 1) = 1.0;
  }
  CVector roots = EigDense(companion, false).values;

  auto eval = [&](Complex z, Complex &dp)
  {
    Complex p = coeffs[deg];
    dp = 0.0;
    for (std::size_t k = deg; k-- > 0;)
    {
      dp = dp * z + p;
      p = p * z + coeffs[k];
    }
    return p;
  };
  for (auto &r : roots)
  {
    Complex dp;
    Complex p = eval(r, dp);
    for (int it = 0; it < 3 && dp != Complex(0.0); it++)
    {
      const Complex step = p / dp;
      if (std::abs(step) > 1e-6 * std::max(1.0, std::abs(r)))
      {
        break;
      }
      const Complex cand = r - step;
      Complex dcand;
      const Complex pc = eval(cand, dcand);
      if (!(std::abs(pc) < std::abs(p)))
      {
        break;
      }
      r = cand;
      p = pc;
      dp = dcand;
    }
  }
  return roots;
}

}  // namespace pepv
