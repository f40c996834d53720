/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "qitelab/hamiltonians.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "qitelab/error.hpp"
#include "qitelab/tolerances.hpp"

namespace qitelab {

void DeuteronParams::validate() const {
  if (n_basis < 1)
    throw InvalidArgument("deuteron basis size must be at least 1");
  if (!(hbar_omega > 0.0))
    throw InvalidArgument("oscillator spacing must be positive");
}

OneBodyMatrix ho_one_body_matrix(const DeuteronParams &params) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(params.n_basis);
  const double half = params.hbar_omega / 2.0;
  RMatrix m = RMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double nk = static_cast<double>(k);
    m(k, k) = half * (2.0 * nk + 1.5);
    if (k + 1 < n) {
      const double hop = -half * std::sqrt((nk + 1.0) * (nk + 1.5));
      m(k, k + 1) = hop;
      m(k + 1, k) = hop;
    }
  }
  m(0, 0) += params.v0;
  return OneBodyMatrix{std::move(m)};
}

PauliSum jordan_wigner_one_body(const OneBodyMatrix &matrix) {
  const RMatrix &t = matrix.entries;
  const auto n = static_cast<std::size_t>(t.rows());
  if (t.rows() != t.cols())
    throw DimensionError("one-body matrix must be square");
  if (n == 0 || n > kMaxQubits)
    throw DimensionError("one-body matrix size out of range");
  const double asym = (t - t.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    throw InvalidArgument("one-body matrix is not symmetric");

  PauliSum sum(n);
  const auto id = PauliString::identity(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double tpp = t(p, p);
    sum.add(0.5 * tpp, id);
    sum.add(-0.5 * tpp, PauliString::single(n, p, Pauli::Z));
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const double tpq = t(p, q);
      if (tpq == 0.0)
        continue;
      for (Pauli end : {Pauli::X, Pauli::Y}) {
        std::vector<Pauli> letters(n, Pauli::I);
        letters[p] = end;
        letters[q] = end;
        for (std::size_t k = p + 1; k < q; ++k)
          letters[k] = Pauli::Z;
        sum.add(0.5 * tpq, PauliString(std::move(letters)));
      }
    }
  }
  return sum;
}

DeuteronHamiltonian deuteron_hamiltonian(std::size_t n_basis) {
  DeuteronParams params;
  params.n_basis = n_basis;
  return deuteron_hamiltonian(params);
}

DeuteronHamiltonian deuteron_hamiltonian(const DeuteronParams &params) {
  if (params.n_basis != 2 && params.n_basis != 3)
    throw InvalidArgument("deuteron Hamiltonian is built for N = 2 or 3, got " +
                          std::to_string(params.n_basis));
  DeuteronHamiltonian out;
  out.full = jordan_wigner_one_body(ho_one_body_matrix(params));
  out.local_terms = group_local_terms(out.full);
  return out;
}

namespace {

bool commute(const PauliString &a, const PauliString &b) {
  std::size_t anti = 0;
  for (std::size_t q = 0; q < a.qubit_count(); ++q)
    if (a[q] != Pauli::I && b[q] != Pauli::I && a[q] != b[q])
      ++anti;
  return anti % 2 == 0;
}

} // namespace

std::vector<PauliSum> group_local_terms(const PauliSum &hamiltonian) {
  const std::size_t n = hamiltonian.qubit_count();
  PauliSum diagonal(n);
  std::map<std::uint32_t, std::vector<PauliTerm>> by_flip;
  for (const auto &t : hamiltonian.terms()) {
    const auto flips = t.string.flip_mask();
    if (flips == 0)
      diagonal.add(t.coefficient, t.string);
    else
      by_flip[flips].push_back(t);
  }

  std::vector<PauliSum> groups;
  if (!diagonal.empty())
    groups.push_back(std::move(diagonal));

  // Order off-diagonal groups by the lowest qubit they touch, so that the
  // (0,1) hopping precedes (1,2).
  std::vector<std::pair<std::uint32_t, std::vector<PauliTerm>>> ordered(
      by_flip.begin(), by_flip.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto &a, const auto &b) { return a.first > b.first; });

  for (auto &[flips, terms] : ordered) {
    std::vector<PauliSum> parts;
    for (const auto &t : terms) {
      bool placed = false;
      for (auto &part : parts) {
        const bool ok = std::all_of(
            part.terms().begin(), part.terms().end(),
            [&](const PauliTerm &u) { return commute(u.string, t.string); });
        if (ok) {
          part.add(t.coefficient, t.string);
          placed = true;
          break;
        }
      }
      if (!placed) {
        PauliSum part(n);
        part.add(t.coefficient, t.string);
        parts.push_back(std::move(part));
      }
    }
    for (auto &part : parts)
      groups.push_back(std::move(part));
  }
  return groups;
}

const H2Row &H2CoefficientTable::row(double bond_length) const {
  for (const auto &r : rows)
    if (std::abs(r.bond_length - bond_length) <= tol::bond_length_match)
      return r;
  throw CoefficientFileError(CoefficientFileError::Kind::MissingBondLength,
                             "bond length " + std::to_string(bond_length) +
                                 " is not in the coefficient table");
}

std::vector<double> H2CoefficientTable::bond_lengths() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto &r : rows)
    out.push_back(r.bond_length);
  return out;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string &line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ','))
    fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',')
    fields.emplace_back();
  return fields;
}

double parse_double(const std::string &field, int line_no) {
  double value = 0.0;
  const char *begin = field.data();
  const char *end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw CoefficientFileError(CoefficientFileError::Kind::MalformedNumber,
                               "line " + std::to_string(line_no) +
                                   ": malformed number '" + field + "'");
  return value;
}

} // namespace

H2CoefficientTable parse_h2_coefficients(const std::string &text) {
  using Kind = CoefficientFileError::Kind;
  static const std::vector<std::string> kHeader = {"R",  "h0", "h1", "h2",
                                                   "h3", "h4", "h5"};
  H2CoefficientTable table;
  bool have_header = false;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    // Strip a UTF-8 byte-order mark on the first line.
    if (line_no == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0)
      raw.erase(0, 3);
    const std::string line = trim(raw);
    if (line.empty())
      continue;
    if (line.front() == '#') {
      const std::string body = trim(std::string_view(line).substr(1));
      if (body.rfind("units:", 0) == 0)
        table.units = trim(std::string_view(body).substr(6));
      continue;
    }
    const auto fields = split_commas(line);
    if (!have_header) {
      if (fields != kHeader)
        throw CoefficientFileError(Kind::MissingHeader,
                                   "line " + std::to_string(line_no) +
                                       ": expected header 'R,h0,h1,h2,h3,h4,h5'");
      have_header = true;
      continue;
    }
    if (fields.size() != kHeader.size())
      throw CoefficientFileError(Kind::ColumnCount,
                                 "line " + std::to_string(line_no) + ": expected 7 columns, found " +
                                     std::to_string(fields.size()));
    H2Row row;
    row.bond_length = parse_double(fields[0], line_no);
    for (std::size_t i = 0; i < 6; ++i)
      row.h[i] = parse_double(fields[i + 1], line_no);
    if (!table.rows.empty() && !(row.bond_length > table.rows.back().bond_length))
      throw CoefficientFileError(Kind::NonMonotone,
                                 "line " + std::to_string(line_no) +
                                     ": bond lengths must be strictly increasing");
    table.rows.push_back(row);
  }
  if (table.rows.empty())
    throw CoefficientFileError(Kind::EmptyTable,
                               "coefficient table contains no rows");
  return table;
}

H2CoefficientTable load_h2_coefficients(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CoefficientFileError(CoefficientFileError::Kind::Io,
                               "cannot open coefficient file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_h2_coefficients(buf.str());
}

PauliSum h2_hamiltonian(const H2Row &row) {
  PauliSum h(2);
  static constexpr const char *kStrings[6] = {"II", "ZI", "IZ", "ZZ", "XX", "YY"};
  for (std::size_t i = 0; i < 6; ++i)
    h.add(row.h[i], PauliString::parse(kStrings[i]));
  return h;
}

PauliSum h2_hamiltonian(const H2CoefficientTable &table, double bond_length) {
  return h2_hamiltonian(table.row(bond_length));
}

} // namespace qitelab
