#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jwselect/circuit.hpp"
#include "jwselect/errors.hpp"
#include "jwselect/pauli.hpp"
#include "jwselect/select.hpp"

namespace jwselect {

inline constexpr std::size_t kMaxStatevectorQubits = 24;
inline constexpr std::size_t kMaxUnitaryQubits = 12;

struct StateVector {
  std::size_t n_qubits = 0;
  Amplitudes amplitudes;

  static StateVector basis(std::size_t n, std::uint64_t index) {
    StateVector s{n, Amplitudes(std::size_t{1} << n)};
    s.amplitudes.at(index) = 1.0;
    return s;
  }
};

/// Dense unitary, row-major, `dim` x `dim`.
struct Matrix {
  std::size_t dim = 0;
  std::vector<Complex> data;

  Complex operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
};

inline Complex global_phase_value(int eighths) {
  const double angle = M_PI * eighths / 8.0;
  return {std::cos(angle), std::sin(angle)};
}

/// Matrix of a gate on its own qubits; the gate's first qubit is the most
/// significant bit of the local index.
inline Matrix gate_matrix(GateKind kind) {
  const std::size_t k = gate_arity(kind);
  Matrix m{std::size_t{1} << k, {}};
  m.data.assign(m.dim * m.dim, Complex{});
  const Complex i{0, 1};
  const Complex w{M_SQRT1_2, M_SQRT1_2};
  const double c8 = std::cos(M_PI / 8), s8 = std::sin(M_PI / 8);

  auto set1 = [&](Complex a, Complex b, Complex c, Complex d) {
    m(0, 0) = a; m(0, 1) = b; m(1, 0) = c; m(1, 1) = d;
  };
  // Controlled single-qubit block in the lower-right corner.
  auto controlled = [&](std::size_t n_controls, Complex a, Complex b, Complex c, Complex d) {
    const std::size_t base = m.dim - 2;
    for (std::size_t r = 0; r < base; ++r) m(r, r) = 1.0;
    m(base, base) = a; m(base, base + 1) = b;
    m(base + 1, base) = c; m(base + 1, base + 1) = d;
    (void)n_controls;
  };

  switch (kind) {
    case GateKind::X: set1(0, 1, 1, 0); break;
    case GateKind::Y: set1(0, -i, i, 0); break;
    case GateKind::Z: set1(1, 0, 0, -1); break;
    case GateKind::H: set1(M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2); break;
    case GateKind::S: set1(1, 0, 0, i); break;
    case GateKind::Sdg: set1(1, 0, 0, -i); break;
    case GateKind::T: set1(1, 0, 0, w); break;
    case GateKind::Tdg: set1(1, 0, 0, std::conj(w)); break;
    case GateKind::A: set1(c8, s8, -s8, c8); break;
    case GateKind::Adg: set1(c8, -s8, s8, c8); break;
    case GateKind::CX: controlled(1, 0, 1, 1, 0); break;
    case GateKind::CY: controlled(1, 0, -i, i, 0); break;
    case GateKind::CZ: controlled(1, 1, 0, 0, -1); break;
    case GateKind::CS: controlled(1, 1, 0, 0, i); break;
    case GateKind::CSdg: controlled(1, 1, 0, 0, -i); break;
    case GateKind::TOFFOLI: controlled(2, 0, 1, 1, 0); break;
    case GateKind::CCZ: controlled(2, 1, 0, 0, -1); break;
    case GateKind::SWAP:
      m(0, 0) = 1; m(1, 2) = 1; m(2, 1) = 1; m(3, 3) = 1;
      break;
    case GateKind::CSWAP:
    case GateKind::CSWAP_STAR:
      for (std::size_t r = 0; r < 8; ++r) m(r, r) = 1.0;
      m(5, 5) = 0; m(6, 6) = 0; m(5, 6) = 1; m(6, 5) = 1;
      if (kind == GateKind::CSWAP_STAR) m(4, 4) = -1.0;
      break;
  }
  return m;
}

namespace detail {

/// Applies a k-qubit matrix to `qubits` of an n-qubit amplitude array.
inline void apply_matrix(Amplitudes& amps, std::size_t n, const Matrix& m,
                         const std::vector<std::size_t>& qubits) {
  const std::size_t k = qubits.size();
  std::vector<std::uint64_t> bit(k);
  std::uint64_t mask = 0;
  for (std::size_t j = 0; j < k; ++j) {
    bit[j] = std::uint64_t{1} << (n - 1 - qubits[j]);
    mask |= bit[j];
  }
  std::vector<std::uint64_t> offset(m.dim);
  for (std::size_t local = 0; local < m.dim; ++local) {
    std::uint64_t off = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (local & (std::size_t{1} << (k - 1 - j))) off |= bit[j];
    }
    offset[local] = off;
  }
  std::vector<Complex> in(m.dim), out(m.dim);
  const std::uint64_t total = amps.size();
  for (std::uint64_t base = 0; base < total; ++base) {
    if (base & mask) continue;
    for (std::size_t l = 0; l < m.dim; ++l) in[l] = amps[base | offset[l]];
    for (std::size_t r = 0; r < m.dim; ++r) {
      Complex acc{};
      for (std::size_t c = 0; c < m.dim; ++c) {
        const Complex e = m.data[r * m.dim + c];
        if (e != Complex{}) acc += e * in[c];
      }
      out[r] = acc;
    }
    for (std::size_t l = 0; l < m.dim; ++l) amps[base | offset[l]] = out[l];
  }
}

inline const Matrix& cached_gate_matrix(GateKind kind) {
  static const std::vector<Matrix> table = [] {
    std::vector<Matrix> t;
    for (GateKind k : kAllGateKinds) t.push_back(gate_matrix(k));
    return t;
  }();
  return table[static_cast<std::size_t>(kind)];
}

inline bool is_identity(const Matrix& m) {
  for (std::size_t r = 0; r < m.dim; ++r) {
    for (std::size_t c = 0; c < m.dim; ++c) {
      if (m(r, c) != (r == c ? Complex{1.0} : Complex{})) return false;
    }
  }
  return true;
}

}  // namespace detail

struct SimOptions {
  /// Simulate macro gates by their defining matrices instead of rejecting them.
  bool allow_macros = false;
};

inline StateVector apply_circuit(const Circuit& c, StateVector s, const SimOptions& opt = {}) {
  if (s.n_qubits != c.n_qubits() || s.amplitudes.size() != (std::size_t{1} << s.n_qubits)) {
    throw DimensionError("apply_circuit: state has " + std::to_string(s.n_qubits) +
                         " qubits, circuit has " + std::to_string(c.n_qubits()));
  }
  if (s.n_qubits > kMaxStatevectorQubits) {
    throw CapacityError("apply_circuit: " + std::to_string(s.n_qubits) +
                        " qubits exceeds the statevector cap of " +
                        std::to_string(kMaxStatevectorQubits));
  }
  for (const Gate& g : c.gates()) {
    if (is_macro(g.kind) && !opt.allow_macros) {
      throw LoweringRequiredError(std::string("apply_circuit: macro gate '") +
                                  std::string(gate_name(g.kind)) + "' present");
    }
    detail::apply_matrix(s.amplitudes, s.n_qubits, detail::cached_gate_matrix(g.kind), g.qubits);
  }
  if (c.global_phase() != 0) {
    const Complex ph = global_phase_value(c.global_phase());
    for (auto& a : s.amplitudes) a *= ph;
  }
  return s;
}

/// Dense unitary with macros simulated natively.
inline Matrix unitary_of(const Circuit& c) {
  const std::size_t n = c.n_qubits();
  if (n > kMaxUnitaryQubits) {
    throw CapacityError("unitary_of: " + std::to_string(n) + " qubits exceeds the cap of " +
                        std::to_string(kMaxUnitaryQubits));
  }
  Matrix u{std::size_t{1} << n, {}};
  u.data.assign(u.dim * u.dim, Complex{});
  for (std::size_t col = 0; col < u.dim; ++col) {
    const StateVector out = apply_circuit(c, StateVector::basis(n, col), {.allow_macros = true});
    for (std::size_t row = 0; row < u.dim; ++row) u(row, col) = out.amplitudes[row];
  }
  return u;
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw DimensionError("max_abs_diff: size mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double norm(std::span<const Complex> a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

/// Seeded complex-Gaussian state, normalised.
template <class Rng>
Amplitudes random_state(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Amplitudes a(std::size_t{1} << n);
  for (auto& v : a) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v = {re, im};
  }
  const double nrm = norm(a);
  for (auto& v : a) v /= nrm;
  return a;
}

struct ClassicalResult {
  Complex phase{1.0, 0.0};
  Amplitudes system;
  std::uint64_t selection_out = 0;  // selection bits after the circuit
};

/// Runs `c` with qubits [0, W) held as classical bits (`selection_bits`,
/// qubit 0 most significant) and only the trailing system qubits simulated.
/// Every gate must map each selection basis value to a single selection
/// basis value, independent of the system state.
inline ClassicalResult apply_classical_control(const Circuit& c, std::uint64_t selection_bits,
                                               std::span<const Complex> system) {
  std::size_t m = 0;
  while ((std::size_t{1} << m) < system.size()) ++m;
  if ((std::size_t{1} << m) != system.size() || m > c.n_qubits()) {
    throw DimensionError("apply_classical_control: system vector size " +
                         std::to_string(system.size()) + " does not fit the circuit");
  }
  const std::size_t w = c.n_qubits() - m;
  if (w < 64 && (selection_bits >> w) != 0) {
    throw DimensionError("apply_classical_control: selection bits exceed width " +
                         std::to_string(w));
  }
  if (m > kMaxStatevectorQubits) throw CapacityError("apply_classical_control: system too large");

  ClassicalResult res;
  res.system.assign(system.begin(), system.end());
  std::vector<std::uint8_t> sel(w);
  for (std::size_t q = 0; q < w; ++q) sel[q] = (selection_bits >> (w - 1 - q)) & 1;

  for (const Gate& g : c.gates()) {
    const std::size_t k = g.qubits.size();
    std::vector<std::size_t> sel_pos, sys_pos, sys_qubits;
    for (std::size_t j = 0; j < k; ++j) {
      if (g.qubits[j] < w) {
        sel_pos.push_back(j);
      } else {
        sys_pos.push_back(j);
        sys_qubits.push_back(g.qubits[j] - w);
      }
    }
    const Matrix& full = detail::cached_gate_matrix(g.kind);
    auto local_index = [&](std::uint64_t sel_val, std::uint64_t sys_val) {
      std::size_t idx = 0;
      for (std::size_t t = 0; t < sel_pos.size(); ++t) {
        if ((sel_val >> (sel_pos.size() - 1 - t)) & 1) idx |= std::size_t{1} << (k - 1 - sel_pos[t]);
      }
      for (std::size_t t = 0; t < sys_pos.size(); ++t) {
        if ((sys_val >> (sys_pos.size() - 1 - t)) & 1) idx |= std::size_t{1} << (k - 1 - sys_pos[t]);
      }
      return idx;
    };
    std::uint64_t sel_in = 0;
    for (auto j : sel_pos) sel_in = (sel_in << 1) | sel[g.qubits[j]];

    const std::size_t sys_dim = std::size_t{1} << sys_pos.size();
    const std::size_t sel_dim = std::size_t{1} << sel_pos.size();
    // Find the unique selection output reachable from sel_in.
    std::int64_t sel_out = -1;
    for (std::size_t y = 0; y < sys_dim; ++y) {
      const std::size_t col = local_index(sel_in, y);
      for (std::size_t so = 0; so < sel_dim; ++so) {
        for (std::size_t yo = 0; yo < sys_dim; ++yo) {
          if (std::abs(full(local_index(so, yo), col)) < 1e-15) continue;
          if (sel_out >= 0 && static_cast<std::size_t>(sel_out) != so) {
            throw FastPathInvalidError(std::string("apply_classical_control: gate '") +
                                       std::string(gate_name(g.kind)) +
                                       "' puts a selection qubit into superposition");
          }
          sel_out = static_cast<std::int64_t>(so);
        }
      }
    }
    Matrix reduced{sys_dim, std::vector<Complex>(sys_dim * sys_dim)};
    for (std::size_t yo = 0; yo < sys_dim; ++yo) {
      for (std::size_t y = 0; y < sys_dim; ++y) {
        reduced(yo, y) = full(local_index(static_cast<std::uint64_t>(sel_out), yo),
                              local_index(sel_in, y));
      }
    }
    for (std::size_t t = 0; t < sel_pos.size(); ++t) {
      sel[g.qubits[sel_pos[t]]] = (sel_out >> (sel_pos.size() - 1 - t)) & 1;
    }
    if (sys_pos.empty()) {
      res.phase *= reduced(0, 0);
    } else if (!detail::is_identity(reduced)) {
      detail::apply_matrix(res.system, m, reduced, sys_qubits);
    }
  }
  res.phase *= global_phase_value(c.global_phase());
  for (std::size_t q = 0; q < w; ++q) res.selection_out = (res.selection_out << 1) | sel[q];
  return res;
}

// ---------------------------------------------------------------------------
// SELECT verification.

/// Every selection word of the k2 layout with p < q < n.
inline std::vector<std::uint64_t> valid_k2_states(const SelectionLayout& layout) {
  std::vector<std::uint64_t> out;
  for (std::size_t p = 0; p < layout.n; ++p) {
    for (std::size_t q = p + 1; q < layout.n; ++q) {
      for (unsigned pauli = 0; pauli < 8; ++pauli) {
        SelectionWord w(layout);
        w.set_address(layout.p_register(), p);
        w.set_address(layout.q_register(), q);
        w.set(layout.family_qubit(), pauli & 4);
        w.set(layout.sign_qubit(), pauli & 2);
        w.set(layout.flag_qubit(), pauli & 1);
        out.push_back(w.bits());
      }
    }
  }
  return out;
}

/// Selection words checked for a general layout: the encodings of the
/// species suite, the all-off word, and (for n <= 5) every encodable
/// signed Pauli string.
inline std::vector<std::uint64_t> general_verification_states(const SelectionLayout& layout) {
  std::set<std::uint64_t> words{0};
  if (layout.n >= 4) {
    for (const auto& e : encode_lcu(jw_transform(species_suite(layout.n, layout.k)), layout)) {
      words.insert(e.bits);
    }
  }
  if (layout.n <= 5) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < layout.n; ++i) total *= 4;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Pauli> letters(layout.n);
      std::size_t rest = code;
      for (auto& l : letters) {
        l = static_cast<Pauli>(rest % 4);
        rest /= 4;
      }
      for (int phase : {0, 2}) {
        try {
          words.insert(encode_string(PauliString(letters, phase), layout));
        } catch (const EncodingError&) {
        }
      }
    }
  }
  return {words.begin(), words.end()};
}

struct VerifyReport {
  std::size_t n = 0;
  std::size_t k = 0;
  Variant variant = Variant::star;
  std::size_t states_checked = 0;
  std::size_t trials = 0;
  double max_error = 0.0;
  bool pass = false;

  std::string to_json() const {
    char err[32];
    std::snprintf(err, sizeof err, "%.3e", max_error);
    std::ostringstream os;
    os << "{\"n\":" << n << ",\"k\":" << k << ",\"variant\":\"" << variant_name(variant)
       << "\",\"states_checked\":" << states_checked << ",\"trials\":" << trials
       << ",\"max_error\":" << err << ",\"pass\":" << (pass ? "true" : "false") << "}";
    return os.str();
  }
};

inline constexpr double kOracleTolerance = 1e-9;

/// Compares SELECT against the Pauli oracle on every checked selection word
/// and `trials` seeded random system states per word.
inline VerifyReport verify_select(std::size_t n, std::size_t k, Variant v, std::size_t trials,
                                  std::uint64_t seed,
                                  std::optional<LayoutMode> mode = std::nullopt) {
  const LayoutMode m = mode.value_or(k == 2 ? LayoutMode::k2 : LayoutMode::general);
  if (n > kMaxStatevectorQubits) {
    throw CapacityError("verify_select: n=" + std::to_string(n) + " exceeds the simulation cap");
  }
  const SelectCircuit sc = synth_select(n, k, m, v);
  const auto words = m == LayoutMode::k2 ? valid_k2_states(sc.layout)
                                         : general_verification_states(sc.layout);
  VerifyReport rep{n, k, v, words.size(), trials, 0.0, true};
  std::mt19937_64 rng(seed);
  for (auto bits : words) {
    const PauliString expected = decode_index(bits, sc.layout);
    for (std::size_t t = 0; t < trials; ++t) {
      const Amplitudes psi = random_state(n, rng);
      const ClassicalResult got = apply_classical_control(sc.circuit, bits, psi);
      const Amplitudes want = pauli_apply(expected, psi);
      double err = 0.0;
      for (std::size_t i = 0; i < want.size(); ++i) {
        err = std::max(err, std::abs(got.phase * got.system[i] - want[i]));
      }
      if (got.selection_out != bits) err = std::max(err, 1.0);
      rep.max_error = std::max(rep.max_error, err);
    }
  }
  rep.pass = rep.max_error <= kOracleTolerance;
  return rep;
}

}  // namespace jwselect
