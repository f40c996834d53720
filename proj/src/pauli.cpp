/*******************************************************************************
 * Copyright (c) 2026 The qitelab Authors.                                     *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "qitelab/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "qitelab/error.hpp"

namespace qitelab {

char to_char(Pauli p) {
  switch (p) {
  case Pauli::I:
    return 'I';
  case Pauli::X:
    return 'X';
  case Pauli::Y:
    return 'Y';
  case Pauli::Z:
    return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
  case 'I':
  case 'i':
    return Pauli::I;
  case 'X':
  case 'x':
    return Pauli::X;
  case 'Y':
  case 'y':
    return Pauli::Y;
  case 'Z':
  case 'z':
    return Pauli::Z;
  default:
    throw InvalidArgument(std::string("not a Pauli letter: '") + c + "'");
  }
}

PauliString::PauliString(std::vector<Pauli> letters)
    : letters_(std::move(letters)) {
  if (letters_.empty())
    throw InvalidArgument("Pauli string needs at least one qubit");
  if (letters_.size() > kMaxQubits)
    throw DimensionError("Pauli string exceeds " + std::to_string(kMaxQubits) +
                         " qubits");
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> letters;
  letters.reserve(text.size());
  for (char c : text)
    letters.push_back(pauli_from_char(c));
  return PauliString(std::move(letters));
}

PauliString PauliString::identity(std::size_t qubit_count) {
  return PauliString(std::vector<Pauli>(qubit_count, Pauli::I));
}

PauliString PauliString::single(std::size_t qubit_count, std::size_t qubit,
                                Pauli p) {
  if (qubit >= qubit_count)
    throw DimensionError("qubit index out of range");
  std::vector<Pauli> letters(qubit_count, Pauli::I);
  letters[qubit] = p;
  return PauliString(std::move(letters));
}

bool PauliString::is_identity() const {
  return std::all_of(letters_.begin(), letters_.end(),
                     [](Pauli p) { return p == Pauli::I; });
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> out;
  for (std::size_t q = 0; q < letters_.size(); ++q)
    if (letters_[q] != Pauli::I)
      out.push_back(q);
  return out;
}

std::string PauliString::to_string() const {
  std::string out;
  out.reserve(letters_.size());
  for (Pauli p : letters_)
    out.push_back(to_char(p));
  return out;
}

std::uint32_t PauliString::flip_mask() const {
  std::uint32_t mask = 0;
  const auto n = qubit_count();
  for (std::size_t q = 0; q < n; ++q)
    if (letters_[q] == Pauli::X || letters_[q] == Pauli::Y)
      mask |= 1u << bit_of_qubit(q, n);
  return mask;
}

std::uint32_t PauliString::sign_mask() const {
  std::uint32_t mask = 0;
  const auto n = qubit_count();
  for (std::size_t q = 0; q < n; ++q)
    if (letters_[q] == Pauli::Y || letters_[q] == Pauli::Z)
      mask |= 1u << bit_of_qubit(q, n);
  return mask;
}

std::size_t PauliString::y_count() const {
  return static_cast<std::size_t>(
      std::count(letters_.begin(), letters_.end(), Pauli::Y));
}

complex PauliString::phase(std::uint32_t index) const {
  // Y|0> = i|1>, Y|1> = -i|0>, Z|b> = (-1)^b |b>.
  static constexpr complex kPowersOfI[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  complex value = kPowersOfI[y_count() % 4];
  if (std::popcount(index & sign_mask()) % 2 == 1)
    value = -value;
  return value;
}

CMatrix PauliString::matrix() const {
  const std::size_t dim = std::size_t{1} << qubit_count();
  const std::uint32_t flips = flip_mask();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::uint32_t k = 0; k < dim; ++k)
    m(k ^ flips, k) = phase(k);
  return m;
}

CVector PauliString::apply(const CVector &amplitudes) const {
  const std::size_t dim = std::size_t{1} << qubit_count();
  if (static_cast<std::size_t>(amplitudes.size()) != dim)
    throw DimensionError("Pauli string and state dimension differ");
  const std::uint32_t flips = flip_mask();
  CVector out(dim);
  for (std::uint32_t k = 0; k < dim; ++k)
    out(k ^ flips) = phase(k) * amplitudes(k);
  return out;
}

std::pair<complex, PauliString>
PauliString::multiply(const PauliString &other) const {
  if (other.qubit_count() != qubit_count())
    throw DimensionError("Pauli strings act on different qubit counts");
  // Single-qubit table: a*b = phase * c.
  complex total{1.0, 0.0};
  std::vector<Pauli> letters(qubit_count());
  const complex i{0.0, 1.0};
  for (std::size_t q = 0; q < qubit_count(); ++q) {
    const Pauli a = letters_[q];
    const Pauli b = other.letters_[q];
    if (a == Pauli::I) {
      letters[q] = b;
    } else if (b == Pauli::I) {
      letters[q] = a;
    } else if (a == b) {
      letters[q] = Pauli::I;
    } else {
      const int ia = static_cast<int>(a);
      const int ib = static_cast<int>(b);
      const int ic = 6 - ia - ib;
      letters[q] = static_cast<Pauli>(ic);
      // XY = iZ, YZ = iX, ZX = iY; reversed order flips the sign.
      const bool cyclic = (ib - ia + 3) % 3 == 1;
      total *= cyclic ? i : -i;
    }
  }
  return {total, PauliString(std::move(letters))};
}

PauliSum::PauliSum(std::size_t qubit_count, std::vector<PauliTerm> terms)
    : qubit_count_(qubit_count) {
  for (auto &t : terms)
    add(t.coefficient, t.string);
}

PauliSum PauliSum::from_labels(
    std::size_t qubit_count,
    std::initializer_list<std::pair<double, std::string_view>> terms) {
  PauliSum sum(qubit_count);
  for (const auto &[c, label] : terms)
    sum.add(c, PauliString::parse(label));
  return sum;
}

double PauliSum::coefficient(const PauliString &string) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), string,
      [](const PauliTerm &t, const PauliString &s) { return t.string < s; });
  if (it != terms_.end() && it->string == string)
    return it->coefficient;
  return 0.0;
}

double PauliSum::identity_coefficient() const {
  if (qubit_count_ == 0)
    return 0.0;
  return coefficient(PauliString::identity(qubit_count_));
}

void PauliSum::add(double coefficient, const PauliString &string) {
  if (qubit_count_ == 0)
    qubit_count_ = string.qubit_count();
  if (string.qubit_count() != qubit_count_)
    throw DimensionError("term '" + string.to_string() + "' does not act on " +
                         std::to_string(qubit_count_) + " qubits");
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), string,
      [](const PauliTerm &t, const PauliString &s) { return t.string < s; });
  if (it != terms_.end() && it->string == string) {
    it->coefficient += coefficient;
    if (it->coefficient == 0.0)
      terms_.erase(it);
    return;
  }
  if (coefficient == 0.0)
    return;
  terms_.insert(it, PauliTerm{coefficient, string});
}

PauliSum &PauliSum::operator+=(const PauliSum &other) {
  for (const auto &t : other.terms_)
    add(t.coefficient, t.string);
  if (qubit_count_ == 0)
    qubit_count_ = other.qubit_count_;
  return *this;
}

PauliSum &PauliSum::operator-=(const PauliSum &other) {
  for (const auto &t : other.terms_)
    add(-t.coefficient, t.string);
  if (qubit_count_ == 0)
    qubit_count_ = other.qubit_count_;
  return *this;
}

PauliSum &PauliSum::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto &t : terms_)
    t.coefficient *= scale;
  return *this;
}

PauliSum PauliSum::pruned(double threshold) const {
  PauliSum out(qubit_count_);
  for (const auto &t : terms_)
    if (std::abs(t.coefficient) > threshold)
      out.terms_.push_back(t);
  return out;
}

double PauliSum::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto &t : terms_)
    m = std::max(m, std::abs(t.coefficient));
  return m;
}

CMatrix PauliSum::matrix() const {
  if (qubit_count_ == 0)
    throw DimensionError("Pauli sum has no qubit count");
  const std::size_t dim = std::size_t{1} << qubit_count_;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto &t : terms_) {
    const std::uint32_t flips = t.string.flip_mask();
    for (std::uint32_t k = 0; k < dim; ++k)
      m(k ^ flips, k) += t.coefficient * t.string.phase(k);
  }
  return m;
}

CVector PauliSum::apply(const CVector &amplitudes) const {
  const std::size_t dim = std::size_t{1} << qubit_count_;
  if (static_cast<std::size_t>(amplitudes.size()) != dim)
    throw DimensionError("Pauli sum and state dimension differ");
  CVector out = CVector::Zero(dim);
  for (const auto &t : terms_) {
    const std::uint32_t flips = t.string.flip_mask();
    for (std::uint32_t k = 0; k < dim; ++k)
      out(k ^ flips) += t.coefficient * t.string.phase(k) * amplitudes(k);
  }
  return out;
}

std::string PauliSum::to_string() const {
  if (terms_.empty())
    return "0";
  std::ostringstream os;
  os.precision(10);
  bool first = true;
  for (const auto &t : terms_) {
    if (!first)
      os << (t.coefficient < 0 ? " - " : " + ");
    else if (t.coefficient < 0)
      os << "-";
    os << std::abs(t.coefficient) << " " << t.string.to_string();
    first = false;
  }
  return os.str();
}

} // namespace qitelab
