#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "jwselect/circuit.hpp"
#include "jwselect/errors.hpp"
#include "jwselect/gadgets.hpp"
#include "jwselect/pauli.hpp"

namespace jwselect {

enum class LayoutMode { k2, general };

/// Bit-field map of the selection register. Selection qubit 0 is the most
/// significant bit of a selection word; address fields are MSB first.
///
/// k2:      p[J] q[J] family sign flag
/// general: sgn, then k address slots, k Pauli flags, k interaction flags,
///          k number flags (one entry per slot in each group)
struct SelectionLayout {
  std::size_t n = 0;
  std::size_t k = 2;
  LayoutMode mode = LayoutMode::k2;
  std::size_t address_bits = 0;

  static SelectionLayout make_k2(std::size_t n) {
    return {n, 2, LayoutMode::k2, ceil_log2(n)};
  }

  static SelectionLayout make_general(std::size_t n, std::size_t k) {
    return {n, k, LayoutMode::general, ceil_log2(n)};
  }

  std::size_t width() const {
    if (mode == LayoutMode::k2) return 2 * address_bits + 3;
    return 1 + k * address_bits + 3 * k;
  }

  std::size_t total_qubits() const { return width() + n; }
  std::size_t system(std::size_t i) const { return width() + i; }
  Qubits system_qubits() const { return iota_qubits(width(), n); }

  // k2 fields.
  AddressRegister p_register() const { return {iota_qubits(0, address_bits)}; }
  AddressRegister q_register() const { return {iota_qubits(address_bits, address_bits)}; }
  std::size_t family_qubit() const { return 2 * address_bits; }
  std::size_t sign_qubit() const { return 2 * address_bits + 1; }
  std::size_t flag_qubit() const { return 2 * address_bits + 2; }

  // general fields.
  std::size_t sgn_qubit() const { return 0; }
  AddressRegister slot_address(std::size_t s) const {
    return {iota_qubits(1 + s * address_bits, address_bits)};
  }
  std::size_t pauli_flag(std::size_t s) const { return 1 + k * address_bits + s; }
  std::size_t interaction_flag(std::size_t s) const { return 1 + k * address_bits + k + s; }
  std::size_t number_flag(std::size_t s) const { return 1 + k * address_bits + 2 * k + s; }

  std::vector<RegisterLabel> labels() const {
    std::vector<RegisterLabel> out;
    if (mode == LayoutMode::k2) {
      out.push_back({"p", 0, address_bits});
      out.push_back({"q", address_bits, address_bits});
      out.push_back({"pauli1", family_qubit(), 2});
      out.push_back({"pauli2", flag_qubit(), 1});
    } else {
      out.push_back({"sgn", 0, 1});
      for (std::size_t s = 0; s < k; ++s) {
        out.push_back({"addr" + std::to_string(s), 1 + s * address_bits, address_bits});
      }
      out.push_back({"pauli_flags", pauli_flag(0), k});
      out.push_back({"interaction_flags", interaction_flag(0), k});
      out.push_back({"number_flags", number_flag(0), k});
    }
    out.push_back({"system", width(), n});
    std::erase_if(out, [](const RegisterLabel& l) { return l.size == 0; });
    return out;
  }
};

/// Helper for reading and writing fields of a selection word.
class SelectionWord {
 public:
  SelectionWord(const SelectionLayout& layout, std::uint64_t bits = 0)
      : width_(layout.width()), bits_(bits) {
    if (width_ > 63) throw CapacityError("selection register wider than 63 bits");
  }

  std::uint64_t bits() const { return bits_; }

  bool get(std::size_t qubit) const { return (bits_ >> (width_ - 1 - qubit)) & 1; }

  void set(std::size_t qubit, bool v) {
    const std::uint64_t mask = std::uint64_t{1} << (width_ - 1 - qubit);
    bits_ = v ? (bits_ | mask) : (bits_ & ~mask);
  }

  std::size_t get_address(const AddressRegister& r) const {
    std::size_t x = 0;
    for (auto q : r.qubits) x = (x << 1) | static_cast<std::size_t>(get(q));
    return x;
  }

  void set_address(const AddressRegister& r, std::size_t x) {
    for (std::size_t j = 0; j < r.width(); ++j) set(r.bit(j), (x >> j) & 1);
  }

  std::string to_string() const {
    std::string s(width_, '0');
    for (std::size_t q = 0; q < width_; ++q) s[q] = get(q) ? '1' : '0';
    return s;
  }

 private:
  std::size_t width_;
  std::uint64_t bits_;
};

// ---------------------------------------------------------------------------
// Decoded selection states.

struct ActivePair {
  std::size_t u, v;
  Pauli pu, pv;  // X or Y
};

struct SelectionState {
  int sign = 1;
  std::vector<ActivePair> pairs;
  std::vector<std::size_t> numbers;
};

/// Product (-1)^sign * prod (pu)_u Zvec(u,v) (pv)_v * prod Z_w.
inline PauliString state_to_string(const SelectionState& s, std::size_t n) {
  PauliString out(n);
  for (const auto& pr : s.pairs) {
    out.set_letter(pr.u, pr.pu);
    out.set_letter(pr.v, pr.pv);
    for (std::size_t j = pr.u + 1; j < pr.v; ++j) out.set_letter(j, Pauli::Z);
  }
  for (auto w : s.numbers) {
    out.set_letter(w, out[w] == Pauli::Z ? Pauli::I : Pauli::Z);
  }
  out.set_phase(s.sign < 0 ? 2 : 0);
  return out;
}

inline SelectionState decode_state(std::uint64_t bits, const SelectionLayout& layout) {
  const SelectionWord w(layout, bits);
  if (layout.width() < 64 && (bits >> layout.width()) != 0) {
    throw DecodeError("selection word has bits beyond the register width");
  }
  SelectionState st;
  if (layout.mode == LayoutMode::k2) {
    const std::size_t p = w.get_address(layout.p_register());
    const std::size_t q = w.get_address(layout.q_register());
    if (!(p < q && q < layout.n)) {
      throw DecodeError("k2 selection needs p < q < n, got p=" + std::to_string(p) +
                        " q=" + std::to_string(q));
    }
    st.sign = w.get(layout.sign_qubit()) ? -1 : 1;
    st.pairs.push_back({p, q, w.get(layout.family_qubit()) ? Pauli::Y : Pauli::X,
                        w.get(layout.flag_qubit()) ? Pauli::Y : Pauli::X});
    return st;
  }

  st.sign = w.get(layout.sgn_qubit()) ? -1 : 1;
  std::vector<std::size_t> used;
  auto address = [&](std::size_t s) {
    const std::size_t x = w.get_address(layout.slot_address(s));
    if (x >= layout.n) {
      throw DecodeError("slot " + std::to_string(s) + " addresses orbital " +
                        std::to_string(x) + " >= n");
    }
    return x;
  };
  for (std::size_t s = 0; s < layout.k; ++s) {
    if (w.get(layout.interaction_flag(s)) && w.get(layout.number_flag(s))) {
      throw DecodeError("slot " + std::to_string(s) + " has both interaction and number flags");
    }
  }
  std::size_t last_v = 0;
  bool have_pair = false;
  for (std::size_t s = 0; s + 1 < layout.k; s += 2) {
    const bool a = w.get(layout.interaction_flag(s));
    const bool b = w.get(layout.interaction_flag(s + 1));
    if (a != b) {
      throw DecodeError("interaction flags of slots " + std::to_string(s) + " and " +
                        std::to_string(s + 1) + " are not set together");
    }
    if (!a) continue;
    const std::size_t u = address(s);
    const std::size_t v = address(s + 1);
    if (u >= v) throw DecodeError("interaction pair needs u < v");
    if (have_pair && u <= last_v) {
      throw DecodeError("interaction pairs must be ordered and disjoint");
    }
    have_pair = true;
    last_v = v;
    used.push_back(u);
    used.push_back(v);
    st.pairs.push_back({u, v, w.get(layout.pauli_flag(s)) ? Pauli::Y : Pauli::X,
                        w.get(layout.pauli_flag(s + 1)) ? Pauli::Y : Pauli::X});
  }
  for (std::size_t s = 0; s < layout.k; ++s) {
    if (!w.get(layout.number_flag(s))) continue;
    const std::size_t x = address(s);
    if (std::find(used.begin(), used.end(), x) != used.end()) {
      throw DecodeError("orbital " + std::to_string(x) + " is selected twice");
    }
    used.push_back(x);
    st.numbers.push_back(x);
  }
  return st;
}

/// The signed Pauli string selected by a selection word. Oracle for SELECT.
inline PauliString decode_index(std::uint64_t bits, const SelectionLayout& layout) {
  return state_to_string(decode_state(bits, layout), layout.n);
}

/// Selection word whose decode equals `s` (phase must be +1 or -1).
inline std::uint64_t encode_string(const PauliString& s, const SelectionLayout& layout) {
  if (s.n_qubits() != layout.n) {
    throw DimensionError("encode: string has " + std::to_string(s.n_qubits()) +
                         " qubits, layout has n=" + std::to_string(layout.n));
  }
  if (s.phase() % 2 != 0) throw EncodingError("encode: only real signs can be selected");
  const bool negative = s.phase() == 2;

  std::vector<std::size_t> xy;
  for (std::size_t j = 0; j < s.n_qubits(); ++j) {
    if (s[j] == Pauli::X || s[j] == Pauli::Y) xy.push_back(j);
  }
  if (xy.size() % 2 != 0) {
    throw EncodingError("encode: " + s.to_string() + " has an odd number of X/Y letters");
  }
  // Residual Z set: the string's Zs XOR the interiors of consecutive pairs.
  std::vector<bool> z(s.n_qubits(), false);
  for (std::size_t j = 0; j < s.n_qubits(); ++j) z[j] = s[j] == Pauli::Z;
  for (std::size_t i = 0; i < xy.size(); i += 2) {
    for (std::size_t j = xy[i] + 1; j < xy[i + 1]; ++j) z[j] = !z[j];
  }
  std::vector<std::size_t> residual;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j]) residual.push_back(j);
  }

  SelectionWord w(layout);
  if (layout.mode == LayoutMode::k2) {
    if (xy.size() != 2 || !residual.empty()) {
      throw EncodingError("encode: " + s.to_string() +
                          " is not a single (P1) Zvec (P2) pattern of the k2 layout");
    }
    w.set_address(layout.p_register(), xy[0]);
    w.set_address(layout.q_register(), xy[1]);
    w.set(layout.family_qubit(), s[xy[0]] == Pauli::Y);
    w.set(layout.sign_qubit(), negative);
    w.set(layout.flag_qubit(), s[xy[1]] == Pauli::Y);
    return w.bits();
  }

  if (xy.size() + residual.size() > layout.k) {
    throw EncodingError("encode: " + s.to_string() + " needs " +
                        std::to_string(xy.size() + residual.size()) +
                        " slots, layout has k=" + std::to_string(layout.k));
  }
  w.set(layout.sgn_qubit(), negative);
  std::size_t slot = 0;
  for (std::size_t i = 0; i < xy.size(); ++i, ++slot) {
    w.set_address(layout.slot_address(slot), xy[i]);
    w.set(layout.pauli_flag(slot), s[xy[i]] == Pauli::Y);
    w.set(layout.interaction_flag(slot), true);
  }
  for (auto r : residual) {
    w.set_address(layout.slot_address(slot), r);
    w.set(layout.number_flag(slot), true);
    ++slot;
  }
  return w.bits();
}

struct EncodedEntry {
  std::uint64_t bits;
  double alpha;
  PauliString string;
};

/// One selection word per LCU entry.
inline std::vector<EncodedEntry> encode_lcu(const PauliLCU& lcu, const SelectionLayout& layout) {
  std::vector<EncodedEntry> out;
  for (const auto& e : lcu.entries) {
    out.push_back({encode_string(e.string, layout), e.alpha, e.string});
  }
  return out;
}

/// True when every string is a single X/Y pair with only its Z-string between.
inline bool fits_k2(const PauliLCU& lcu) {
  if (lcu.entries.empty()) return false;
  for (const auto& e : lcu.entries) {
    try {
      (void)encode_string(e.string, SelectionLayout::make_k2(e.string.n_qubits()));
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

/// `index_bits alpha string` per entry.
inline std::string lcu_table(const std::vector<EncodedEntry>& entries,
                             const SelectionLayout& layout) {
  std::string out;
  char buf[64];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%.12g", e.alpha);
    out += SelectionWord(layout, e.bits).to_string();
    out += ' ';
    out += buf;
    out += ' ';
    out += e.string.to_string();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// SELECT assembly.

struct ComponentTally {
  std::size_t inject_z = 0;
  std::size_t inject_select_q = 0;
  std::size_t inject_select_p = 0;
  std::size_t ladders = 0;
};

struct SelectCircuit {
  Circuit circuit;
  SelectionLayout layout;
  ComponentTally tally;
};

inline SelectCircuit synth_select_k2(std::size_t n, Variant v) {
  if (n < 2) throw DimensionError("synth_select_k2: n must be at least 2");
  const auto layout = SelectionLayout::make_k2(n);
  SelectCircuit out{Circuit(layout.total_qubits()), layout, {}};
  Circuit& c = out.circuit;
  c.set_labels(layout.labels());
  const Qubits sys = layout.system_qubits();
  auto z_payload = [](Circuit& cc, std::size_t d0) { cc.add(GateKind::Z, {d0}, true); };

  Circuit ladder(c.n_qubits());
  emit_ladder_tree(ladder, sys);
  c.append(ladder);
  emit_inject(c, v, layout.p_register(), sys, z_payload);
  emit_inject(c, v, layout.q_register(), sys, z_payload);
  c.append(inverse(ladder));
  c.add_phase(12);  // -i
  emit_inject_select_q(c, v, layout.p_register(), sys, layout.family_qubit(),
                       layout.sign_qubit());
  emit_inject_select_p(c, v, layout.q_register(), sys, layout.flag_qubit());
  out.tally = {2, 1, 1, 2};
  return out;
}

namespace detail {

/// CCY on (a, b, target) as S . CCX . S^dag.
inline void emit_ccy(Circuit& c, std::size_t a, std::size_t b, std::size_t t, bool mark) {
  c.add(GateKind::Sdg, {t});
  c.add(GateKind::TOFFOLI, {a, b, t}, mark);
  c.add(GateKind::S, {t});
}

/// Q_P on the addressed qubit when `active` is set, with P chosen by `flag`
/// (0: X so Q = Y, 1: Y so Q = -X).
inline void emit_controlled_inject_select_q(Circuit& c, Variant v, const AddressRegister& addr,
                                            const Qubits& data, std::size_t active,
                                            std::size_t flag) {
  c.add(GateKind::CZ, {active, flag}, true);
  if (v == Variant::plain) {
    emit_inject(c, v, addr, data, [&](Circuit& cc, std::size_t d0) {
      cc.add(GateKind::X, {flag});
      emit_ccy(cc, active, flag, d0, true);
      cc.add(GateKind::X, {flag});
      cc.add(GateKind::TOFFOLI, {active, flag, d0}, true);
    });
    return;
  }
  emit_inject_star_pauli(c, PayloadKind::Y, addr, data, [&](Circuit& cc, std::size_t d0) {
    cc.add(GateKind::X, {flag});
    cc.add(GateKind::CCZ, {active, flag, d0}, true);
    cc.add(GateKind::X, {flag});
  });
  emit_inject_star_pauli(c, PayloadKind::X, addr, data, [&](Circuit& cc, std::size_t d0) {
    cc.add(GateKind::CCZ, {active, flag, d0}, true);
  });
}

/// P on the addressed qubit when `active` is set (flag 0: X, 1: Y).
inline void emit_controlled_inject_select_p(Circuit& c, Variant v, const AddressRegister& addr,
                                            const Qubits& data, std::size_t active,
                                            std::size_t flag) {
  if (v == Variant::plain) {
    emit_inject(c, v, addr, data, [&](Circuit& cc, std::size_t d0) {
      cc.add(GateKind::X, {flag});
      cc.add(GateKind::TOFFOLI, {active, flag, d0}, true);
      cc.add(GateKind::X, {flag});
      emit_ccy(cc, active, flag, d0, true);
    });
    return;
  }
  emit_inject_star_pauli(c, PayloadKind::X, addr, data, [&](Circuit& cc, std::size_t d0) {
    cc.add(GateKind::X, {flag});
    cc.add(GateKind::CCZ, {active, flag, d0}, true);
    cc.add(GateKind::X, {flag});
  });
  emit_inject_star_pauli(c, PayloadKind::Y, addr, data, [&](Circuit& cc, std::size_t d0) {
    cc.add(GateKind::CCZ, {active, flag, d0}, true);
  });
}

}  // namespace detail

inline SelectCircuit synth_select_general(std::size_t n, std::size_t k, Variant v) {
  if (k == 0 || k % 2 != 0) {
    throw UnsupportedError("synth_select_general: k must be a positive even number");
  }
  if (n < 2) throw DimensionError("synth_select_general: n must be at least 2");
  const auto layout = SelectionLayout::make_general(n, k);
  if (layout.width() > 63) throw CapacityError("selection register wider than 63 bits");
  SelectCircuit out{Circuit(layout.total_qubits()), layout, {}};
  Circuit& c = out.circuit;
  c.set_labels(layout.labels());
  const Qubits sys = layout.system_qubits();
  ComponentTally& tally = out.tally;

  auto controlled_z = [&](std::size_t flag) {
    return [flag](Circuit& cc, std::size_t d0) { cc.add(GateKind::CZ, {flag, d0}, true); };
  };

  c.add(GateKind::Z, {layout.sgn_qubit()}, true);
  for (std::size_t s = 0; s < k; s += 2) c.add(GateKind::Sdg, {layout.interaction_flag(s)}, true);

  Circuit ladder(c.n_qubits());
  emit_ladder_tree(ladder, sys);
  c.append(ladder);
  ++tally.ladders;
  for (std::size_t s = 0; s < k; ++s) {
    emit_inject(c, v, layout.slot_address(s), sys, controlled_z(layout.interaction_flag(s)));
    ++tally.inject_z;
  }
  c.append(inverse(ladder));
  ++tally.ladders;
  for (std::size_t s = 0; s < k; s += 2) {
    detail::emit_controlled_inject_select_q(c, v, layout.slot_address(s), sys,
                                            layout.interaction_flag(s), layout.pauli_flag(s));
    ++tally.inject_select_q;
    detail::emit_controlled_inject_select_p(c, v, layout.slot_address(s + 1), sys,
                                            layout.interaction_flag(s + 1),
                                            layout.pauli_flag(s + 1));
    ++tally.inject_select_p;
  }
  for (std::size_t s = 0; s < k; ++s) {
    emit_inject(c, v, layout.slot_address(s), sys, controlled_z(layout.number_flag(s)));
    ++tally.inject_z;
  }
  return out;
}

/// SELECT for the given layout mode.
inline SelectCircuit synth_select(std::size_t n, std::size_t k, LayoutMode mode, Variant v) {
  if (mode == LayoutMode::k2) {
    if (k != 2) throw UnsupportedError("the k2 layout requires k = 2");
    return synth_select_k2(n, v);
  }
  return synth_select_general(n, k, v);
}

/// SELECT with one extra control qubit in front of the selection register.
inline SelectCircuit controlled_select(std::size_t n, std::size_t k, LayoutMode mode, Variant v,
                                       std::size_t num_controls) {
  SelectCircuit base = synth_select(n, k, mode, v);
  base.circuit = add_global_controls(base.circuit, num_controls);
  return base;
}

// ---------------------------------------------------------------------------
// Test-suite Hamiltonians.

/// One term of every species the general layout supports, on orbitals
/// 0..3 (terms needing more than k orbitals are left out).
inline FermionHamiltonian species_suite(std::size_t n, std::size_t k) {
  if (n < 4) throw DimensionError("species_suite needs n >= 4");
  FermionHamiltonian h{n, k, {}};
  const Complex one{1, 0}, im{0, 1};
  auto add = [&](Complex c, std::vector<FermionFactor> f, bool hc) {
    std::set<std::size_t> distinct;
    for (const auto& x : f) distinct.insert(x.index);
    if (distinct.size() <= k) h.terms.push_back({c, std::move(f), hc});
  };
  add(one, {create(0), annihilate(1)}, true);
  add(im, {create(1), annihilate(3)}, true);
  add(one, {create(0), create(2)}, true);
  add(im, {create(1), create(2)}, true);
  add(one, {annihilate(0), annihilate(3)}, true);
  add(-0.5, {number(2)}, false);
  add(0.25, {number(0), number(3)}, false);
  add(one, {create(0), annihilate(2), number(1)}, true);
  add(0.5, {create(0), annihilate(1), number(3)}, true);
  add(one, {create(0), annihilate(1), create(2), annihilate(3)}, true);
  add(im, {create(0), create(1), annihilate(2), annihilate(3)}, true);
  return h;
}

}  // namespace jwselect
