#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "jwselect/errors.hpp"

namespace jwselect {

using Complex = std::complex<double>;
using Amplitudes = std::vector<Complex>;

/// Single-qubit Pauli letter. The encoding is chosen so that the letter part
/// of a product is the XOR of the operands (X^Y = Z, Y^Z = X, ...).
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

/// A length-n Pauli string with a phase i^phase. Qubit 0 is the leftmost
/// letter and the most significant bit of a computational basis index.
class PauliString {
 public:
  PauliString() = default;

  explicit PauliString(std::size_t n_qubits) : letters_(n_qubits, Pauli::I) {}

  PauliString(std::vector<Pauli> letters, int phase)
      : letters_(std::move(letters)), phase_(normalize(phase)) {}

  /// Parses an optional sign prefix ("+", "-", "+i", "-i", "i") followed by
  /// one letter per qubit, e.g. "-XZY" or "iIZ".
  static PauliString parse(std::string_view text) {
    int phase = 0;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
      if (text.front() == '-') phase = 2;
      text.remove_prefix(1);
    }
    if (!text.empty() && text.front() == 'i') {
      phase += 1;
      text.remove_prefix(1);
    }
    std::vector<Pauli> letters;
    letters.reserve(text.size());
    for (char c : text) {
      switch (c) {
        case 'I': letters.push_back(Pauli::I); break;
        case 'X': letters.push_back(Pauli::X); break;
        case 'Y': letters.push_back(Pauli::Y); break;
        case 'Z': letters.push_back(Pauli::Z); break;
        default:
          throw DimensionError(std::string("invalid Pauli letter '") + c + "'");
      }
    }
    return PauliString(std::move(letters), phase);
  }

  /// Identity string with a single letter placed at `qubit`.
  static PauliString single(std::size_t n_qubits, std::size_t qubit, Pauli p) {
    PauliString s(n_qubits);
    s.letters_.at(qubit) = p;
    return s;
  }

  std::size_t n_qubits() const noexcept { return letters_.size(); }
  const std::vector<Pauli>& letters() const noexcept { return letters_; }
  Pauli operator[](std::size_t q) const { return letters_[q]; }

  /// Exponent of i, always in 0..3.
  int phase() const noexcept { return phase_; }

  Complex phase_value() const {
    static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_];
  }

  void set_letter(std::size_t q, Pauli p) { letters_.at(q) = p; }
  void set_phase(int phase) { phase_ = normalize(phase); }

  PauliString with_phase(int phase) const { return PauliString(letters_, phase); }

  bool is_identity_letters() const {
    return std::all_of(letters_.begin(), letters_.end(),
                       [](Pauli p) { return p == Pauli::I; });
  }

  /// Letters only, no phase prefix.
  std::string letters_string() const {
    std::string s;
    s.reserve(letters_.size());
    for (Pauli p : letters_) s.push_back(to_char(p));
    return s;
  }

  /// Sign prefix ("+", "-", "+i", "-i") followed by the letters.
  std::string to_string() const {
    static const char* prefix[4] = {"+", "+i", "-", "-i"};
    return prefix[phase_] + letters_string();
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  static int normalize(int phase) { return ((phase % 4) + 4) % 4; }

  std::vector<Pauli> letters_;
  int phase_ = 0;
};

/// Product a·b with exact phase tracking.
inline PauliString pauli_mul(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw DimensionError("pauli_mul: length mismatch " +
                         std::to_string(a.n_qubits()) + " vs " +
                         std::to_string(b.n_qubits()));
  }
  std::vector<Pauli> letters(a.n_qubits());
  int phase = a.phase() + b.phase();
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const int x = static_cast<int>(a[q]);
    const int y = static_cast<int>(b[q]);
    letters[q] = static_cast<Pauli>(x ^ y);
    if (x != 0 && y != 0 && x != y) {
      // XY = iZ, YZ = iX, ZX = iY; the reversed order picks up -i.
      phase += ((y - x + 3) % 3 == 1) ? 1 : 3;
    }
  }
  return PauliString(std::move(letters), phase);
}

inline PauliString operator*(const PauliString& a, const PauliString& b) {
  return pauli_mul(a, b);
}

/// Applies p to a dense state of 2^n amplitudes (qubit 0 is the most
/// significant index bit).
inline Amplitudes pauli_apply(const PauliString& p, std::span<const Complex> state) {
  const std::size_t n = p.n_qubits();
  if (n >= 63 || state.size() != (std::size_t{1} << n)) {
    throw DimensionError("pauli_apply: state has " + std::to_string(state.size()) +
                         " amplitudes, expected 2^" + std::to_string(n));
  }
  std::uint64_t flip = 0;
  std::uint64_t sign = 0;
  int n_y = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (p[q]) {
      case Pauli::X: flip |= bit; break;
      case Pauli::Y: flip |= bit; sign |= bit; ++n_y; break;
      case Pauli::Z: sign |= bit; break;
      case Pauli::I: break;
    }
  }
  // Y|b> = i(-1)^b |1-b>, so every Y contributes a factor i plus a Z-like sign.
  const Complex global = p.with_phase(p.phase() + n_y).phase_value();
  Amplitudes out(state.size());
  for (std::uint64_t idx = 0; idx < state.size(); ++idx) {
    const bool negative = std::popcount(idx & sign) & 1;
    out[idx ^ flip] = (negative ? -global : global) * state[idx];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Second-quantised input.

enum class LadderKind : std::uint8_t { Raise, Lower, Number };

struct FermionFactor {
  LadderKind kind;
  std::size_t index;

  friend bool operator==(const FermionFactor&, const FermionFactor&) = default;
};

inline FermionFactor create(std::size_t p) { return {LadderKind::Raise, p}; }
inline FermionFactor annihilate(std::size_t p) { return {LadderKind::Lower, p}; }
inline FermionFactor number(std::size_t p) { return {LadderKind::Number, p}; }

/// coefficient * (product of factors, left to right) [+ h.c. when include_hc].
struct FermionTerm {
  Complex coefficient{1.0, 0.0};
  std::vector<FermionFactor> factors;
  bool include_hc = false;
};

struct FermionHamiltonian {
  std::size_t n_orbitals = 0;
  std::size_t k = 2;
  std::vector<FermionTerm> terms;
};

struct LcuEntry {
  double alpha;
  PauliString string;  // phase restricted to +1 / -1
};

struct PauliLCU {
  std::vector<LcuEntry> entries;
};

namespace detail {

inline constexpr double kMergeThreshold = 1e-12;

/// Phase-free Pauli strings with complex weights, kept in first-appearance order.
class PauliSum {
 public:
  explicit PauliSum(std::size_t n) : n_(n) {}

  void add(Complex c, const PauliString& s) {
    c *= s.phase_value();
    const std::string key = s.letters_string();
    auto it = index_.find(key);
    if (it == index_.end()) {
      index_.emplace(key, terms_.size());
      terms_.push_back({c, s.with_phase(0)});
    } else {
      terms_[it->second].first += c;
    }
  }

  void add_all(const PauliSum& other) {
    for (const auto& [c, s] : other.terms_) add(c, s);
  }

  PauliSum times(const PauliSum& rhs) const {
    PauliSum out(n_);
    for (const auto& [ca, sa] : terms_) {
      for (const auto& [cb, sb] : rhs.terms_) out.add(ca * cb, sa * sb);
    }
    return out;
  }

  PauliSum scaled(Complex c) const {
    PauliSum out(n_);
    for (const auto& [w, s] : terms_) out.add(w * c, s);
    return out;
  }

  /// Hermitian conjugate; phase-free Pauli strings are Hermitian.
  PauliSum adjoint() const {
    PauliSum out(n_);
    for (const auto& [w, s] : terms_) out.add(std::conj(w), s);
    return out;
  }

  const std::vector<std::pair<Complex, PauliString>>& terms() const { return terms_; }

 private:
  std::size_t n_;
  std::vector<std::pair<Complex, PauliString>> terms_;
  std::map<std::string, std::size_t> index_;
};

/// Jordan-Wigner image of one factor: a_p -> Z_0..Z_{p-1} (X_p + iY_p)/2.
inline PauliSum jw_factor(const FermionFactor& f, std::size_t n) {
  PauliSum out(n);
  if (f.kind == LadderKind::Number) {
    out.add(0.5, PauliString(n));
    out.add(-0.5, PauliString::single(n, f.index, Pauli::Z));
    return out;
  }
  PauliString x(n);
  for (std::size_t j = 0; j < f.index; ++j) x.set_letter(j, Pauli::Z);
  PauliString y = x;
  x.set_letter(f.index, Pauli::X);
  y.set_letter(f.index, Pauli::Y);
  const double s = f.kind == LadderKind::Lower ? 0.5 : -0.5;
  out.add(0.5, x);
  out.add(Complex(0.0, s), y);
  return out;
}

inline PauliLCU to_lcu(const PauliSum& sum) {
  PauliLCU lcu;
  for (const auto& [c, s] : sum.terms()) {
    if (std::abs(c) < kMergeThreshold) continue;
    if (std::abs(c.imag()) > kMergeThreshold) {
      throw HermiticityError("Pauli coefficient of " + s.letters_string() +
                             " is not real; add +hc or fix the coefficient");
    }
    lcu.entries.push_back({std::abs(c.real()), s.with_phase(c.real() < 0 ? 2 : 0)});
  }
  return lcu;
}

struct Interval {
  std::size_t lo, hi;
};

/// Pairs consecutive ladder factors (number factors are skipped) and checks the
/// canonical smaller-index-first ordering.
inline std::vector<Interval> interaction_intervals(const FermionTerm& t) {
  std::vector<const FermionFactor*> ladder;
  for (const auto& f : t.factors) {
    if (f.kind != LadderKind::Number) ladder.push_back(&f);
  }
  if (ladder.size() % 2 != 0) {
    throw CanonicalizationError("odd number of creation/annihilation factors");
  }
  std::vector<Interval> out;
  for (std::size_t i = 0; i < ladder.size(); i += 2) {
    const std::size_t a = ladder[i]->index;
    const std::size_t b = ladder[i + 1]->index;
    if (a >= b) {
      throw CanonicalizationError(
          "interaction pair (" + std::to_string(a) + ", " + std::to_string(b) +
          ") must be written with the smaller index first; use 'n p' for a_p^dag a_p");
    }
    out.push_back({a, b});
  }
  return out;
}

}  // namespace detail

/// Jordan-Wigner transform of a single term into nonnegative-weight signed
/// Pauli strings. Identity components are kept as explicit identity strings.
inline PauliLCU jw_transform_term(const FermionTerm& t, std::size_t n) {
  for (const auto& f : t.factors) {
    if (f.index >= n) {
      throw RangeError("orbital index " + std::to_string(f.index) +
                       " out of range for n=" + std::to_string(n));
    }
  }
  (void)detail::interaction_intervals(t);

  detail::PauliSum product(n);
  product.add(1.0, PauliString(n));
  for (const auto& f : t.factors) product = product.times(detail::jw_factor(f, n));
  product = product.scaled(t.coefficient);
  if (t.include_hc) product.add_all(product.adjoint());
  return detail::to_lcu(product);
}

/// Checks the arity and interval-ordering constraints a term must satisfy to
/// be encodable with k address slots.
inline void validate_term(const FermionTerm& t, std::size_t n, std::size_t k) {
  std::set<std::size_t> distinct;
  for (const auto& f : t.factors) {
    if (f.index >= n) {
      throw RangeError("orbital index " + std::to_string(f.index) +
                       " out of range for n=" + std::to_string(n));
    }
    distinct.insert(f.index);
  }
  if (distinct.size() > k) {
    throw ArityError("term touches " + std::to_string(distinct.size()) +
                     " distinct orbitals, more than k=" + std::to_string(k));
  }
  auto intervals = detail::interaction_intervals(t);
  std::sort(intervals.begin(), intervals.end(),
            [](const auto& a, const auto& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].lo <= intervals[i - 1].hi) {
      throw EncodingError("interaction intervals [" +
                          std::to_string(intervals[i - 1].lo) + "," +
                          std::to_string(intervals[i - 1].hi) + "] and [" +
                          std::to_string(intervals[i].lo) + "," +
                          std::to_string(intervals[i].hi) +
                          "] overlap; pairs must satisfy p<q<r<s");
    }
  }
}

/// Transform of a whole Hamiltonian with like strings merged.
inline PauliLCU jw_transform(const FermionHamiltonian& h) {
  detail::PauliSum total(h.n_orbitals);
  for (const auto& t : h.terms) {
    validate_term(t, h.n_orbitals, h.k);
    for (const auto& e : jw_transform_term(t, h.n_orbitals).entries) {
      total.add(e.alpha, e.string);
    }
  }
  return detail::to_lcu(total);
}

/// Parses the one-term-per-line Hamiltonian text format:
///   <re> <im> : <factor> ... [+hc]     factor = adag p | a p | n p
/// '#' starts a comment; blank lines are skipped. Terms are validated for
/// range, arity and interval ordering; every error names the line.
inline FermionHamiltonian parse_hamiltonian(std::string_view text, std::size_t n, std::size_t k) {
  FermionHamiltonian h;
  h.n_orbitals = n;
  h.k = k;
  std::istringstream lines{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream in(raw);
    std::vector<std::string> tok;
    for (std::string w; in >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (tok.size() < 3 || tok[2] != ":") {
      throw ParseError(line_no, "expected '<re> <im> : factors'");
    }
    FermionTerm t;
    try {
      std::size_t used = 0;
      const double re = std::stod(tok[0], &used);
      if (used != tok[0].size()) throw std::invalid_argument("re");
      const double im = std::stod(tok[1], &used);
      if (used != tok[1].size()) throw std::invalid_argument("im");
      t.coefficient = {re, im};
    } catch (const std::logic_error&) {
      throw ParseError(line_no, "bad coefficient '" + tok[0] + " " + tok[1] + "'");
    }
    std::size_t i = 3;
    while (i < tok.size()) {
      const std::string& w = tok[i];
      if (w == "+hc") {
        if (i + 1 != tok.size()) throw ParseError(line_no, "'+hc' must end the line");
        t.include_hc = true;
        ++i;
        continue;
      }
      LadderKind kind;
      if (w == "adag") kind = LadderKind::Raise;
      else if (w == "a") kind = LadderKind::Lower;
      else if (w == "n") kind = LadderKind::Number;
      else throw ParseError(line_no, "unknown factor '" + w + "'");
      if (i + 1 >= tok.size()) throw ParseError(line_no, "factor '" + w + "' missing index");
      const std::string& idx = tok[i + 1];
      if (idx.empty() || !std::all_of(idx.begin(), idx.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw ParseError(line_no, "bad orbital index '" + idx + "'");
      }
      t.factors.push_back({kind, static_cast<std::size_t>(std::stoull(idx))});
      i += 2;
    }
    if (t.factors.empty()) throw ParseError(line_no, "term has no factors");
    const std::string where = "line " + std::to_string(line_no) + ": term '" + raw + "': ";
    try {
      validate_term(t, n, k);
    } catch (const ArityError& e) {
      throw ArityError(where + e.what());
    } catch (const EncodingError& e) {
      throw EncodingError(where + e.what());
    } catch (const RangeError& e) {
      throw RangeError(where + e.what());
    } catch (const CanonicalizationError& e) {
      throw CanonicalizationError(where + e.what());
    }
    h.terms.push_back(std::move(t));
  }
  return h;
}

/// Dense 2^n x 2^n matrix of a Pauli string, row-major. Test and oracle use.
inline std::vector<Complex> pauli_matrix(const PauliString& p) {
  const std::size_t dim = std::size_t{1} << p.n_qubits();
  std::vector<Complex> m(dim * dim);
  Amplitudes basis(dim);
  for (std::size_t col = 0; col < dim; ++col) {
    std::fill(basis.begin(), basis.end(), Complex{});
    basis[col] = 1.0;
    const Amplitudes image = pauli_apply(p, basis);
    for (std::size_t row = 0; row < dim; ++row) m[row * dim + col] = image[row];
  }
  return m;
}

}  // namespace jwselect
