// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/poly_core.hpp"

#include <algorithm>
#include <numeric>

namespace pepv
{

ZPoly::ZPoly(CVector ascending) : coeffs(std::move(ascending))
{
  Trim();
}

void ZPoly::Trim()
{
  while (!coeffs.empty() && coeffs.back() == Complex(0.0))
  {
    coeffs.pop_back();
  }
}

Complex ZPoly::operator()(Complex z) const
{
  Complex p = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;)
  {
    p = p * z + coeffs[k];
  }
  return p;
}

Complex ZPoly::Derivative(Complex z) const
{
  Complex p = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;)
  {
    p = p * z + static_cast<double>(k) * coeffs[k];
  }
  return p;
}

ZPoly &ZPoly::operator+=(const ZPoly &o)
{
  if (o.coeffs.size() > coeffs.size())
  {
    coeffs.resize(o.coeffs.size(), 0.0);
  }
  for (std::size_t k = 0; k < o.coeffs.size(); k++)
  {
    coeffs[k] += o.coeffs[k];
  }
  Trim();
  return *this;
}

ZPoly ZPoly::operator*(const ZPoly &o) const
{
  if (IsZero() || o.IsZero())
  {
    return {};
  }
  CVector r(coeffs.size() + o.coeffs.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs.size(); i++)
  {
    for (std::size_t j = 0; j < o.coeffs.size(); j++)
    {
      r[i + j] += coeffs[i] * o.coeffs[j];
    }
  }
  return ZPoly(std::move(r));
}

ZPoly ZPoly::operator*(Complex s) const
{
  CVector r = coeffs;
  for (auto &c : r)
  {
    c *= s;
  }
  return ZPoly(std::move(r));
}

ZPoly ZPoly::operator-() const
{
  return (*this) * Complex(-1.0);
}

int TotalDegree(const Exponent &e)
{
  return std::accumulate(e.begin(), e.end(), 0);
}

XPoly Normalize(XPoly terms)
{
  std::stable_sort(terms.begin(), terms.end(),
                   [](const XTerm &a, const XTerm &b) { return a.exponent < b.exponent; });
  XPoly out;
  for (auto &t : terms)
  {
    if (!out.empty() && out.back().exponent == t.exponent)
    {
      out.back().coeff += t.coeff;
    }
    else
    {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const XTerm &t) { return t.coeff.IsZero(); });
  return out;
}

// ---------------------------------------------------------------------------

void PolyMatrixT::Validate() const
{
  if (n < 1 || static_cast<int>(row_degrees.size()) != n ||
      static_cast<int>(entries.size()) != n)
  {
    ThrowValidation("DimensionMismatch", "T must have n rows and n row degrees");
  }
  for (int i = 0; i < n; i++)
  {
    if (static_cast<int>(entries[i].size()) != n)
    {
      ThrowValidation("DimensionMismatch",
                      "row " + std::to_string(i + 1) + " does not have n entries");
    }
    if (row_degrees[i] < 0)
    {
      ThrowValidation("DegreeMismatch(" + std::to_string(i + 1) + ")",
                      "negative row degree");
    }
    for (int j = 0; j < n; j++)
    {
      for (const auto &term : entries[i][j])
      {
        if (static_cast<int>(term.exponent.size()) != n ||
            std::any_of(term.exponent.begin(), term.exponent.end(), [](int e) { return e < 0; }))
        {
          ThrowValidation("DimensionMismatch", "exponent vector in row " +
                                                   std::to_string(i + 1) +
                                                   " must have n nonnegative entries");
        }
        if (TotalDegree(term.exponent) != row_degrees[i])
        {
          ThrowValidation("InhomogeneousRow(" + std::to_string(i + 1) + ")",
                          "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              ") has a term of x-degree " +
                              std::to_string(TotalDegree(term.exponent)) + ", row degree is " +
                              std::to_string(row_degrees[i]));
        }
        if (term.coeff.Degree() > z_degree)
        {
          ThrowValidation("ZDegreeExceeded(" + std::to_string(i + 1) + ")",
                          "coefficient of z-degree " + std::to_string(term.coeff.Degree()) +
                              " exceeds declared z_degree " + std::to_string(z_degree));
        }
      }
    }
  }
}

CMatrix PolyMatrixT::Evaluate(const CVector &x, Complex z) const
{
  CMatrix m(n, n);
  for (int i = 0; i < n; i++)
  {
    for (int j = 0; j < n; j++)
    {
      Complex s = 0.0;
      for (const auto &term : entries[i][j])
      {
        Complex mono = 1.0;
        for (int k = 0; k < n; k++)
        {
          for (int p = 0; p < term.exponent[k]; p++)
          {
            mono *= x[k];
          }
        }
        s += term.coeff(z) * mono;
      }
      m(i, j) = s;
    }
  }
  return m;
}

const char *ToString(ShiftStyle s)
{
  return s == ShiftStyle::Dense ? "dense" : "monomial";
}

ShiftStyle ShiftStyleFromString(const std::string &s)
{
  if (s == "dense")
  {
    return ShiftStyle::Dense;
  }
  if (s == "monomial")
  {
    return ShiftStyle::Monomial;
  }
  ThrowValidation("InvalidShiftStyle", "expected dense or monomial, got '" + s + "'");
}

ShiftVector ShiftVector::Zero(int n)
{
  ShiftVector a;
  a.polys.assign(n, XPoly{});
  return a;
}

// ---------------------------------------------------------------------------

SquareSystem::SquareSystem(int nvars_, std::vector<XPoly> rows_) : nvars(nvars_)
{
  rows.reserve(rows_.size());
  max_power.assign(nvars, 0);
  for (auto &r : rows_)
  {
    for (const auto &t : r)
    {
      if (static_cast<int>(t.exponent.size()) != nvars)
      {
        ThrowValidation("DimensionMismatch", "term exponent length differs from variable count");
      }
    }
    rows.push_back(Normalize(std::move(r)));
    int deg = 0;
    for (const auto &t : rows.back())
    {
      deg = std::max(deg, TotalDegree(t.exponent));
      for (int k = 0; k < nvars; k++)
      {
        max_power[k] = std::max(max_power[k], t.exponent[k]);
      }
    }
    row_degree.push_back(deg);
  }
}

void SquareSystem::EvaluateAll(const CVector &x, Complex z, CVector &f, CMatrix &jac,
                               CVector *dz) const
{
  const int nrows = NumRows();
  f.assign(nrows, 0.0);
  if (jac.Rows() != static_cast<std::size_t>(nrows) ||
      jac.Cols() != static_cast<std::size_t>(nvars))
  {
    jac = CMatrix(nrows, nvars);
  }
  else
  {
    jac *= 0.0;
  }
  if (dz)
  {
    dz->assign(nrows, 0.0);
  }

  // powers[k][e] = x_k^e
  std::vector<CVector> powers(nvars);
  for (int k = 0; k < nvars; k++)
  {
    powers[k].resize(max_power[k] + 1);
    powers[k][0] = 1.0;
    for (int e = 1; e <= max_power[k]; e++)
    {
      powers[k][e] = powers[k][e - 1] * x[k];
    }
  }

  CVector prefix(nvars + 1), suffix(nvars + 1);
  for (int i = 0; i < nrows; i++)
  {
    Complex fi = 0.0, dzi = 0.0;
    for (const auto &term : rows[i])
    {
      const Complex c = term.coeff(z);
      prefix[0] = 1.0;
      for (int k = 0; k < nvars; k++)
      {
        prefix[k + 1] = prefix[k] * powers[k][term.exponent[k]];
      }
      suffix[nvars] = 1.0;
      for (int k = nvars; k-- > 0;)
      {
        suffix[k] = suffix[k + 1] * powers[k][term.exponent[k]];
      }
      const Complex mono = prefix[nvars];
      fi += c * mono;
      if (dz)
      {
        dzi += term.coeff.Derivative(z) * mono;
      }
      for (int k = 0; k < nvars; k++)
      {
        const int e = term.exponent[k];
        if (e == 0)
        {
          continue;
        }
        jac(i, k) += c * static_cast<double>(e) * prefix[k] * powers[k][e - 1] * suffix[k + 1];
      }
    }
    f[i] = fi;
    if (dz)
    {
      (*dz)[i] = dzi;
    }
  }
}

CVector SquareSystem::Evaluate(const CVector &x, Complex z) const
{
  CVector f(NumRows(), 0.0);
  for (int i = 0; i < NumRows(); i++)
  {
    Complex fi = 0.0;
    for (const auto &term : rows[i])
    {
      Complex mono = 1.0;
      for (int k = 0; k < nvars; k++)
      {
        for (int p = 0; p < term.exponent[k]; p++)
        {
          mono *= x[k];
        }
      }
      fi += term.coeff(z) * mono;
    }
    f[i] = fi;
  }
  return f;
}

CMatrix SquareSystem::JacobianX(const CVector &x, Complex z) const
{
  CVector f;
  CMatrix jac;
  EvaluateAll(x, z, f, jac, nullptr);
  return jac;
}

CVector SquareSystem::DerivativeZ(const CVector &x, Complex z) const
{
  CVector f, dz;
  CMatrix jac;
  EvaluateAll(x, z, f, jac, &dz);
  return dz;
}

// ---------------------------------------------------------------------------

SquareSystem AssemblePepv(const PolyMatrixT &t, const ShiftVector &a)
{
  t.Validate();
  const int n = t.n;
  if (static_cast<int>(a.polys.size()) != n)
  {
    ThrowValidation("DimensionMismatch", "shift vector must have n polynomials");
  }
  std::vector<XPoly> rows(n);
  for (int i = 0; i < n; i++)
  {
    XPoly row;
    for (int j = 0; j < n; j++)
    {
      for (const auto &term : t.Entry(i, j))
      {
        XTerm shifted = term;
        shifted.exponent[j] += 1;
        row.push_back(std::move(shifted));
      }
    }
    for (const auto &term : a.polys[i])
    {
      if (static_cast<int>(term.exponent.size()) != n)
      {
        ThrowValidation("DimensionMismatch", "shift exponent length differs from n");
      }
      if (TotalDegree(term.exponent) != t.row_degrees[i])
      {
        ThrowValidation("DegreeMismatch(" + std::to_string(i + 1) + ")",
                        "shift term of degree " + std::to_string(TotalDegree(term.exponent)) +
                            ", row degree is " + std::to_string(t.row_degrees[i]));
      }
      row.push_back(XTerm{term.exponent, -term.coeff});
    }
    rows[i] = std::move(row);
  }
  return SquareSystem(n, std::move(rows));
}

}  // namespace pepv
