// Copyright the pepv authors.
// SPDX-License-Identifier: Apache-2.0

#include "pepv/problem_io.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace pepv
{

using nlohmann::json;

namespace
{

// Offsets of the elements of the top-level "rows" array, found by a
// string-aware bracket scan of the raw text. Empty when the shape differs.
std::vector<std::size_t> RowOffsets(const std::string &text)
{
  std::vector<std::size_t> out;
  int depth = 0;
  bool in_string = false;
  std::string last_key;
  std::size_t string_start = 0;
  bool rows_pending = false;
  int rows_depth = -1;
  bool expect_element = false;
  for (std::size_t i = 0; i < text.size(); i++)
  {
    const char ch = text[i];
    if (in_string)
    {
      if (ch == '\\')
      {
        i++;
      }
      else if (ch == '"')
      {
        in_string = false;
        if (depth == 1)
        {
          last_key = text.substr(string_start + 1, i - string_start - 1);
        }
      }
      continue;
    }
    if (rows_depth >= 0 && expect_element && depth == rows_depth && !std::isspace(static_cast<unsigned char>(ch)) &&
        ch != ']')
    {
      out.push_back(i);
      expect_element = false;
    }
    switch (ch)
    {
      case '"':
        in_string = true;
        string_start = i;
        break;
      case ':':
        rows_pending = depth == 1 && last_key == "rows";
        break;
      case '{':
      case '[':
        depth++;
        if (rows_pending && ch == '[' && depth == 2)
        {
          rows_depth = 2;
          expect_element = true;
        }
        rows_pending = false;
        break;
      case '}':
      case ']':
        if (rows_depth >= 0 && depth == rows_depth)
        {
          return out;
        }
        depth--;
        break;
      case ',':
        if (depth == rows_depth)
        {
          expect_element = true;
        }
        break;
      default:
        break;
    }
  }
  return out;
}

int LineOf(const std::string &text, std::size_t offset)
{
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); i++)
  {
    line += text[i] == '\n';
  }
  return line;
}

// Extracts the 1-based row index from codes such as "InhomogeneousRow(2)".
std::optional<int> RowFromCode(const std::string &code)
{
  const auto open = code.find('('), close = code.find(')');
  if (open == std::string::npos || close == std::string::npos || close <= open + 1)
  {
    return std::nullopt;
  }
  try
  {
    return std::stoi(code.substr(open + 1, close - open - 1));
  }
  catch (const std::exception &)
  {
    return std::nullopt;
  }
}

const json &Field(const json &j, const char *key)
{
  if (!j.is_object() || !j.contains(key))
  {
    ThrowValidation("MissingField", std::string("required field '") + key + "' is missing");
  }
  return j.at(key);
}

int IntField(const json &j, const char *key)
{
  const json &v = Field(j, key);
  if (!v.is_number_integer())
  {
    ThrowValidation("InvalidField", std::string("field '") + key + "' must be an integer");
  }
  return v.get<int>();
}

CVector ParseVector(const json &j, const char *what)
{
  if (!j.is_array())
  {
    ThrowValidation("InvalidField", std::string(what) + " must be an array");
  }
  CVector v;
  for (const auto &e : j)
  {
    v.push_back(ParseComplex(e));
  }
  return v;
}

// Nested rows or a flat row-major list of n*n entries.
CMatrix ParseMatrix(const json &j, int n, const char *what)
{
  CMatrix m(n, n);
  if (!j.is_array())
  {
    ThrowValidation("InvalidField", std::string(what) + " must be an array");
  }
  const bool nested = j.size() == static_cast<std::size_t>(n) && n > 0 && j[0].is_array() &&
                      j[0].size() == static_cast<std::size_t>(n);
  if (nested)
  {
    for (int i = 0; i < n; i++)
    {
      if (!j[i].is_array() || j[i].size() != static_cast<std::size_t>(n))
      {
        ThrowValidation("DimensionMismatch", std::string(what) + " must be n x n");
      }
      for (int k = 0; k < n; k++)
      {
        m(i, k) = ParseComplex(j[i][k]);
      }
    }
    return m;
  }
  if (j.size() != static_cast<std::size_t>(n) * n)
  {
    ThrowValidation("DimensionMismatch", std::string(what) + " must hold n x n entries");
  }
  for (int i = 0; i < n; i++)
  {
    for (int k = 0; k < n; k++)
    {
      m(i, k) = ParseComplex(j[i * n + k]);
    }
  }
  return m;
}

PolyMatrixT ParsePepv(const json &doc)
{
  PolyMatrixT t;
  t.n = IntField(doc, "n");
  t.z_degree = IntField(doc, "z_degree");
  if (t.n < 1)
  {
    ThrowValidation("DimensionMismatch", "n must be positive");
  }
  const json &rows = Field(doc, "rows");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(t.n))
  {
    ThrowValidation("DimensionMismatch", "rows must list n rows");
  }
  for (int i = 0; i < t.n; i++)
  {
    const json &row = rows[i];
    const std::string where = "row " + std::to_string(i + 1);
    t.row_degrees.push_back(IntField(row, "degree_x"));
    const json &entries = Field(row, "entries");
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(t.n))
    {
      ThrowValidation("DimensionMismatch(" + std::to_string(i + 1) + ")",
                      where + " must have n entries");
    }
    std::vector<XPoly> prow;
    for (const auto &entry : entries)
    {
      if (!entry.is_array())
      {
        ThrowValidation("InvalidField(" + std::to_string(i + 1) + ")",
                        where + ": each entry is a list of terms");
      }
      XPoly poly;
      for (const auto &term : entry)
      {
        const json &xexp = Field(term, "xexp");
        if (!xexp.is_array() || xexp.size() != static_cast<std::size_t>(t.n))
        {
          ThrowValidation("DimensionMismatch(" + std::to_string(i + 1) + ")",
                          where + ": xexp must have n entries");
        }
        XTerm xt;
        for (const auto &e : xexp)
        {
          if (!e.is_number_integer())
          {
            ThrowValidation("InvalidField(" + std::to_string(i + 1) + ")",
                            where + ": xexp entries must be integers");
          }
          xt.exponent.push_back(e.get<int>());
        }
        xt.coeff = ZPoly(ParseVector(Field(term, "zcoeffs"), "zcoeffs"));
        poly.push_back(std::move(xt));
      }
      prow.push_back(std::move(poly));
    }
    t.entries.push_back(std::move(prow));
  }
  t.Validate();
  // Terms are merged only after validation so mixed degrees are reported.
  for (auto &row : t.entries)
  {
    for (auto &e : row)
    {
      e = Normalize(std::move(e));
    }
  }
  return t;
}

RepvProblem ParseRepv(const json &doc)
{
  RepvProblem p;
  p.n = IntField(doc, "n");
  p.m = IntField(doc, "m");
  if (p.n < 1 || p.m < 0)
  {
    ThrowValidation("DimensionMismatch", "need n >= 1 and m >= 0");
  }
  p.a = ParseMatrix(Field(doc, "A"), p.n, "A");
  p.b = ParseMatrix(Field(doc, "B"), p.n, "B");
  const json &tj = Field(doc, "T");
  const json &rj = Field(doc, "r");
  const json &sj = Field(doc, "s");
  if (!tj.is_array() || !rj.is_array() || !sj.is_array() ||
      tj.size() != static_cast<std::size_t>(p.m) || rj.size() != static_cast<std::size_t>(p.m) ||
      sj.size() != static_cast<std::size_t>(p.m))
  {
    ThrowValidation("DimensionMismatch", "T, r and s must each list m items");
  }
  for (int k = 0; k < p.m; k++)
  {
    p.t.push_back(ParseMatrix(tj[k], p.n, "T_k"));
    p.r.push_back(ParseVector(rj[k], "r_k"));
    p.s.push_back(ParseVector(sj[k], "s_k"));
  }
  p.Validate();
  return p;
}

}  // namespace

Complex ParseComplex(const json &j)
{
  if (j.is_number())
  {
    return j.get<double>();
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
  {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  ThrowValidation("InvalidComplex", "expected a number or [re, im], got " + j.dump());
}

json ComplexToJson(Complex c)
{
  return json::array({c.real(), c.imag()});
}

Problem ParseProblem(const std::string &text, const std::string &source)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    ThrowValidation("ParseError", source + ": " + e.what());
  }
  Problem p;
  try
  {
    const std::string kind = doc.is_object() && doc.contains("kind") && doc["kind"].is_string()
                                 ? doc["kind"].get<std::string>()
                                 : "pepv";
    if (kind == "repv")
    {
      p.kind = ProblemKind::Repv;
      p.repv = ParseRepv(doc);
    }
    else if (kind == "pepv")
    {
      p.pepv = ParsePepv(doc);
    }
    else
    {
      ThrowValidation("InvalidKind", "kind must be pepv or repv, got '" + kind + "'");
    }
  }
  catch (const Error &e)
  {
    std::string detail = e.what();
    detail = detail.substr(std::min(detail.size(), e.Code().size() + 2));
    const auto row = RowFromCode(e.Code());
    const auto offsets = RowOffsets(text);
    if (row && *row >= 1 && static_cast<std::size_t>(*row) <= offsets.size())
    {
      detail = source + ":" + std::to_string(LineOf(text, offsets[*row - 1])) + ": " + detail;
    }
    else
    {
      detail = source + ": " + detail;
    }
    throw Error(e.Kind(), e.Code(), detail);
  }
  catch (const json::exception &e)
  {
    ThrowValidation("InvalidField", source + ": " + e.what());
  }
  return p;
}

std::string ReadFile(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    ThrowValidation("FileNotFound", "cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem LoadProblem(const std::string &path)
{
  return ParseProblem(ReadFile(path), path);
}

json PepvToJson(const PolyMatrixT &t)
{
  json doc;
  doc["n"] = t.n;
  doc["z_degree"] = t.z_degree;
  doc["rows"] = json::array();
  for (int i = 0; i < t.n; i++)
  {
    json row;
    row["degree_x"] = t.row_degrees[i];
    row["entries"] = json::array();
    for (int j = 0; j < t.n; j++)
    {
      json entry = json::array();
      for (const auto &term : t.Entry(i, j))
      {
        json zc = json::array();
        for (const auto &c : term.coeff.Coefficients())
        {
          zc.push_back(ComplexToJson(c));
        }
        entry.push_back({{"xexp", term.exponent}, {"zcoeffs", zc}});
      }
      row["entries"].push_back(entry);
    }
    doc["rows"].push_back(row);
  }
  return doc;
}

Contour ParseContour(const json &j)
{
  try
  {
    const std::string kind = Field(j, "kind").get<std::string>();
    const Complex center = ParseComplex(Field(j, "center"));
    if (kind == "circle")
    {
      return Contour::Circle(center, Field(j, "radius").get<double>());
    }
    if (kind == "ellipse")
    {
      const json &radii = Field(j, "radii");
      if (!radii.is_array() || radii.size() != 2)
      {
        ThrowValidation("InvalidContour", "radii must be [rx, ry]");
      }
      const double rotation = j.contains("rotation") ? j["rotation"].get<double>() : 0.0;
      return Contour::Ellipse(center, radii[0].get<double>(), radii[1].get<double>(), rotation);
    }
    ThrowValidation("InvalidContour", "kind must be circle or ellipse, got '" + kind + "'");
  }
  catch (const json::exception &e)
  {
    ThrowValidation("InvalidContour", e.what());
  }
}

json ContourToJson(const Contour &c)
{
  json j;
  j["center"] = ComplexToJson(c.Center());
  if (c.Kind() == ContourKind::Circle)
  {
    j["kind"] = "circle";
    j["radius"] = c.RadiusX();
  }
  else
  {
    j["kind"] = "ellipse";
    j["radii"] = json::array({c.RadiusX(), c.RadiusY()});
    j["rotation"] = c.Rotation();
  }
  return j;
}

CVector ParseCoefficients(const std::string &text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    ThrowValidation("ParseError", e.what());
  }
  const json &arr = doc.is_object() ? Field(doc, "coeffs") : doc;
  return ParseVector(arr, "coefficients");
}

}  // namespace pepv
