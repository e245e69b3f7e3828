#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "jwselect/circuit.hpp"
#include "jwselect/errors.hpp"

namespace jwselect {

enum class Variant { plain, star };

inline std::string_view variant_name(Variant v) { return v == Variant::plain ? "plain" : "star"; }

/// ceil(log2 n), with 0 for n <= 1.
inline std::size_t ceil_log2(std::size_t n) {
  std::size_t j = 0;
  while ((std::size_t{1} << j) < n) ++j;
  return j;
}

using Qubits = std::vector<std::size_t>;

inline Qubits iota_qubits(std::size_t start, std::size_t count) {
  Qubits q(count);
  std::iota(q.begin(), q.end(), start);
  return q;
}

/// Address register of an injection gadget. Qubit i holds bit (size-1-i) of
/// the address, so the most significant bit comes first.
struct AddressRegister {
  Qubits qubits;

  std::size_t width() const { return qubits.size(); }
  /// Qubit holding bit j (bit 0 is least significant).
  std::size_t bit(std::size_t j) const { return qubits[qubits.size() - 1 - j]; }
};

// ---------------------------------------------------------------------------
// Ladder: qubit j ends up holding the parity of qubits j..n-1.

inline void emit_ladder_cascade(Circuit& c, const Qubits& q) {
  for (std::size_t j = q.size(); j-- > 1;) c.add(GateKind::CX, {q[j], q[j - 1]});
}

inline void emit_ladder_tree(Circuit& c, const Qubits& q) {
  const std::size_t n = q.size();
  const std::size_t full = std::size_t{1} << ceil_log2(n);
  auto cx = [&](std::size_t ctl, std::size_t tgt) {
    if (ctl < n && tgt < n) c.add(GateKind::CX, {q[ctl], q[tgt]});
  };
  for (std::size_t s = 1; s < full; s *= 2) {
    for (std::size_t i = 0; i + s < full; i += 2 * s) cx(i + s, i);
  }
  for (std::size_t s = full / 4; s >= 1; s /= 2) {
    for (std::size_t i = 2 * s; i < full; i += 2 * s) cx(i, i - s);
  }
}

inline Circuit ladder_cascade(std::size_t n) {
  Circuit c(n);
  emit_ladder_cascade(c, iota_qubits(0, n));
  return c;
}

inline Circuit ladder_tree(std::size_t n) {
  Circuit c(n);
  emit_ladder_tree(c, iota_qubits(0, n));
  return c;
}

// ---------------------------------------------------------------------------
// Fanout: XOR the control onto every target, whatever the targets hold.
//
// The CX tree is scheduled in d layers. The root writes one direct child per
// layer. A node v with parent u is first "prepared" (v ^= u while u still
// holds its own old value) and later "written" (v ^= u after u has received
// the control), leaving v ^ control. A directly written child only has a
// write step, at layer W, and it can serve grandchildren prepared at W-i
// and written at W+i.

namespace detail {

struct FanoutNode {
  std::size_t parent;  // index into the node list, 0 is the root
  std::size_t prep;    // 0 when written directly from the root
  std::size_t write;
};

inline void grow_fanout(std::vector<FanoutNode>& nodes, std::size_t self, std::size_t depth,
                        std::size_t limit) {
  const FanoutNode v = nodes[self];
  const std::size_t early = v.prep == 0 ? v.write : v.prep;
  for (std::size_t i = 1; i < early && v.write + i <= depth; ++i) {
    if (nodes.size() >= limit) return;
    nodes.push_back({self, early - i, v.write + i});
    grow_fanout(nodes, nodes.size() - 1, depth, limit);
  }
}

inline std::vector<FanoutNode> fanout_tree(std::size_t depth, std::size_t limit) {
  std::vector<FanoutNode> nodes{{0, 0, 0}};
  for (std::size_t layer = 1; layer <= depth && nodes.size() < limit; ++layer) {
    nodes.push_back({0, 0, layer});
    grow_fanout(nodes, nodes.size() - 1, depth, limit);
  }
  return nodes;
}

}  // namespace detail

/// Number of targets a fanout of the given CX depth can reach.
inline std::size_t fanout_capacity(std::size_t depth) {
  return detail::fanout_tree(depth, SIZE_MAX).size() - 1;
}

inline std::size_t fanout_depth(std::size_t m) {
  std::size_t d = 0;
  while (fanout_capacity(d) < m) ++d;
  return d;
}

inline void emit_fanout(Circuit& c, std::size_t control, const Qubits& targets) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] == control) throw DimensionError("fanout: control is also a target");
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw DimensionError("fanout: repeated target");
    }
  }
  if (targets.empty()) return;
  const std::size_t depth = fanout_depth(targets.size());
  const auto nodes = detail::fanout_tree(depth, targets.size() + 1);
  auto wire = [&](std::size_t node) { return node == 0 ? control : targets[node - 1]; };
  std::vector<std::pair<std::size_t, Gate>> ops;
  for (std::size_t v = 1; v < nodes.size(); ++v) {
    const auto& nd = nodes[v];
    if (nd.prep != 0) ops.push_back({nd.prep, Gate{GateKind::CX, {wire(nd.parent), wire(v)}}});
    ops.push_back({nd.write, Gate{GateKind::CX, {wire(nd.parent), wire(v)}}});
  }
  std::stable_sort(ops.begin(), ops.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [layer, g] : ops) c.add(std::move(g));
}

inline Circuit fanout_cnot(std::size_t control, const Qubits& targets) {
  std::size_t width = control + 1;
  for (auto t : targets) width = std::max(width, t + 1);
  Circuit c(width);
  emit_fanout(c, control, targets);
  return c;
}

// ---------------------------------------------------------------------------
// Multi-target controlled swap (toggle construction).

using SwapPair = std::pair<std::size_t, std::size_t>;

/// Controlled SWAP on every pair, using CSWAPs in four layers. Pairs are
/// grouped two at a time: one register of each group is swapped under the
/// first qubit of its partner, toggled by fanouts from the real control.
/// An odd leftover pair is toggled the same way through `borrow` (any qubit
/// outside the pairs whose value is restored), or swapped directly when no
/// borrowed qubit is available.
inline void emit_multi_target_cswap(Circuit& c, std::size_t control,
                                    const std::vector<SwapPair>& pairs,
                                    std::optional<std::size_t> borrow = std::nullopt) {
  std::vector<std::size_t> seen{control};
  if (borrow) seen.push_back(*borrow);
  for (const auto& [a, b] : pairs) {
    seen.push_back(a);
    seen.push_back(b);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw DimensionError("multi-target controlled swap: pairs, control and borrow overlap");
  }
  if (pairs.empty()) return;

  const bool odd = pairs.size() % 2 == 1;
  const SwapPair* lead = odd ? &pairs[0] : nullptr;
  std::vector<SwapPair> left, right;
  for (std::size_t i = odd ? 1 : 0; i + 1 < pairs.size(); i += 2) {
    left.push_back(pairs[i]);
    right.push_back(pairs[i + 1]);
  }
  const bool toggle_lead = lead && borrow;

  Qubits first_targets, second_targets;
  for (const auto& p : left) first_targets.push_back(p.first);
  if (toggle_lead) first_targets.push_back(*borrow);
  for (const auto& p : right) second_targets.push_back(p.first);

  auto swap_column = [&](const std::vector<SwapPair>& ctl_regs,
                         const std::vector<SwapPair>& tgt_regs, bool with_lead) {
    if (with_lead) c.add(GateKind::CSWAP, {*borrow, lead->first, lead->second});
    for (std::size_t k = 0; k < ctl_regs.size(); ++k) {
      c.add(GateKind::CSWAP, {ctl_regs[k].first, tgt_regs[k].first, tgt_regs[k].second});
    }
  };

  if (lead && !borrow) c.add(GateKind::CSWAP, {control, lead->first, lead->second});
  swap_column(left, right, toggle_lead);
  emit_fanout(c, control, first_targets);
  swap_column(left, right, toggle_lead);
  emit_fanout(c, control, first_targets);
  swap_column(right, left, false);
  emit_fanout(c, control, second_targets);
  swap_column(right, left, false);
  emit_fanout(c, control, second_targets);
}

/// Standalone toggle on 1 + 2m qubits: qubit 0 is the control and pair k
/// occupies qubits 1+2k and 2+2k.
inline Circuit multi_target_controlled_swap(std::size_t m) {
  if (m == 0) throw DimensionError("multi-target controlled swap needs at least one pair");
  Circuit c(1 + 2 * m);
  std::vector<SwapPair> pairs;
  for (std::size_t k = 0; k < m; ++k) pairs.push_back({1 + 2 * k, 2 + 2 * k});
  emit_multi_target_cswap(c, 0, pairs);
  return c;
}

// ---------------------------------------------------------------------------
// SwapUp: route data qubit x to data position 0.

/// Pairs swapped under address bit j: (i, i + 2^j) while both are in range.
inline std::vector<SwapPair> swap_level_pairs(const Qubits& data, std::size_t j) {
  std::vector<SwapPair> out;
  const std::size_t step = std::size_t{1} << j;
  for (std::size_t i = 0; i < step && i + step < data.size(); ++i) {
    out.push_back({data[i], data[i + step]});
  }
  return out;
}

inline void emit_swap_up(Circuit& c, const AddressRegister& addr, const Qubits& data) {
  const std::size_t levels = addr.width();
  for (std::size_t j = levels; j-- > 0;) {
    std::optional<std::size_t> borrow;
    if (levels > 1) borrow = addr.bit((j + 1) % levels);
    emit_multi_target_cswap(c, addr.bit(j), swap_level_pairs(data, j), borrow);
  }
}

/// Phase-incorrect SwapUp. Every level applies the phase-incorrect CSWAP to
/// all of its pairs at once, sharing one fanout from the address bit.
inline void emit_swap_up_star(Circuit& c, const AddressRegister& addr, const Qubits& data) {
  for (std::size_t j = addr.width(); j-- > 0;) {
    const auto pairs = swap_level_pairs(data, j);
    Qubits seconds;
    for (const auto& [t1, t2] : pairs) {
      c.add(GateKind::CX, {t2, t1});
      c.add(GateKind::A, {t2});
      c.add(GateKind::CX, {t1, t2});
      c.add(GateKind::A, {t2});
      seconds.push_back(t2);
    }
    emit_fanout(c, addr.bit(j), seconds);
    for (const auto& [t1, t2] : pairs) {
      c.add(GateKind::Adg, {t2});
      c.add(GateKind::CX, {t1, t2});
      c.add(GateKind::Adg, {t2});
      c.add(GateKind::CX, {t2, t1});
    }
  }
}

inline void emit_swap_up_variant(Circuit& c, Variant v, const AddressRegister& addr,
                                 const Qubits& data) {
  if (v == Variant::plain) {
    emit_swap_up(c, addr, data);
  } else {
    emit_swap_up_star(c, addr, data);
  }
}

/// Layout shared by the standalone gadgets: ceil(log2 n) address qubits,
/// then n data qubits.
struct GadgetLayout {
  std::size_t n;
  AddressRegister address;
  Qubits data;
  std::size_t width;
};

inline GadgetLayout gadget_layout(std::size_t n, std::size_t extra_front = 0) {
  const std::size_t j = ceil_log2(n);
  return {n, {iota_qubits(extra_front, j)}, iota_qubits(extra_front + j, n),
          extra_front + j + n};
}

inline void label_gadget(Circuit& c, const GadgetLayout& g) {
  if (g.address.width() > 0) c.add_label("address", g.address.qubits.front(), g.address.width());
  c.add_label("data", g.data.front(), g.data.size());
}

inline Circuit swap_up(std::size_t n) {
  if (n == 0) throw DimensionError("swap_up: n must be positive");
  const auto g = gadget_layout(n);
  Circuit c(g.width);
  label_gadget(c, g);
  emit_swap_up(c, g.address, g.data);
  return c;
}

inline Circuit swap_up_star(std::size_t n) {
  if (n == 0) throw DimensionError("swap_up_star: n must be positive");
  const auto g = gadget_layout(n);
  Circuit c(g.width);
  label_gadget(c, g);
  emit_swap_up_star(c, g.address, g.data);
  return c;
}

/// The phase-incorrect controlled swap on (control, target1, target2).
inline Circuit cswap_phase_incorrect() {
  Circuit c(3);
  c.add(GateKind::CSWAP_STAR, {0, 1, 2});
  return lower_macros(c);
}

// ---------------------------------------------------------------------------
// Injection gadgets. A payload writes gates acting on data position 0.

using Payload = std::function<void(Circuit&, std::size_t /*front data qubit*/)>;

inline void emit_inject(Circuit& c, Variant v, const AddressRegister& addr, const Qubits& data,
                        const Payload& payload) {
  Circuit up(c.n_qubits());
  emit_swap_up_variant(up, v, addr, data);
  c.append(up);
  payload(c, data.front());
  c.append(inverse(up));
}

enum class PayloadKind { X, Y, Z };

inline GateKind payload_gate(PayloadKind p) {
  switch (p) {
    case PayloadKind::X: return GateKind::X;
    case PayloadKind::Y: return GateKind::Y;
    case PayloadKind::Z: return GateKind::Z;
  }
  return GateKind::Z;
}

inline Circuit inject(PayloadKind u, std::size_t n) {
  if (n == 0) throw DimensionError("inject: n must be positive");
  const auto g = gadget_layout(n);
  Circuit c(g.width);
  label_gadget(c, g);
  emit_inject(c, Variant::plain, g.address, g.data,
              [&](Circuit& cc, std::size_t d0) { cc.add(payload_gate(u), {d0}, true); });
  return c;
}

inline Circuit inject_star_z(std::size_t n) {
  if (n == 0) throw DimensionError("inject_star_z: n must be positive");
  const auto g = gadget_layout(n);
  Circuit c(g.width);
  label_gadget(c, g);
  emit_inject(c, Variant::star, g.address, g.data,
              [](Circuit& cc, std::size_t d0) { cc.add(GateKind::Z, {d0}, true); });
  return c;
}

inline Circuit inject_z(std::size_t n, Variant v) {
  return v == Variant::plain ? inject(PayloadKind::Z, n) : inject_star_z(n);
}

// ---------------------------------------------------------------------------
// Pauli selection on a single target.

/// `family` = 0 selects X, 1 selects Y; `sign` flips the sign. The gate applied
/// is the partner Q with Q * Z = i * P: Y for X, -X for Y.
inline void emit_select_q(Circuit& c, std::size_t family, std::size_t sign, std::size_t target) {
  c.add(GateKind::Z, {family}, true);
  c.add(GateKind::Z, {sign}, true);
  c.add(GateKind::X, {family});
  c.add(GateKind::CY, {family, target}, true);
  c.add(GateKind::X, {family});
  c.add(GateKind::CX, {family, target}, true);
}

/// `flag` = 0 applies X, 1 applies Y.
inline void emit_select_p(Circuit& c, std::size_t flag, std::size_t target) {
  c.add(GateKind::X, {flag});
  c.add(GateKind::CX, {flag, target}, true);
  c.add(GateKind::X, {flag});
  c.add(GateKind::CY, {flag, target}, true);
}

/// Qubits: family, sign, target.
inline Circuit select_q() {
  Circuit c(3);
  emit_select_q(c, 0, 1, 2);
  return c;
}

/// Qubits: flag, target.
inline Circuit select_p() {
  Circuit c(2);
  emit_select_p(c, 0, 1);
  return c;
}

/// Applies B^{tensor n} (forward) or its inverse, where B Z B^dag equals X
/// (B = H) or Y (B = S H).
inline void emit_basis_change(Circuit& c, const Qubits& data, PayloadKind to, bool adjoint) {
  for (auto q : data) {
    if (to == PayloadKind::X) {
      c.add(GateKind::H, {q});
    } else if (!adjoint) {
      c.add(GateKind::H, {q}).add(GateKind::S, {q});
    } else {
      c.add(GateKind::Sdg, {q}).add(GateKind::H, {q});
    }
  }
}

/// Star-variant injection of a Pauli X or Y: Inject*(Z) conjugated by the
/// basis change, with the Z payload supplied by the caller.
inline void emit_inject_star_pauli(Circuit& c, PayloadKind to, const AddressRegister& addr,
                                   const Qubits& data, const Payload& z_payload) {
  emit_basis_change(c, data, to, true);
  emit_inject(c, Variant::star, addr, data, z_payload);
  emit_basis_change(c, data, to, false);
}

/// Applies Q_{P1} (with sign) to the addressed data qubit. P1 is given by
/// (family, sign).
inline void emit_inject_select_q(Circuit& c, Variant v, const AddressRegister& addr,
                                 const Qubits& data, std::size_t family, std::size_t sign) {
  if (v == Variant::plain) {
    emit_inject(c, v, addr, data,
                [&](Circuit& cc, std::size_t d0) { emit_select_q(cc, family, sign, d0); });
    return;
  }
  c.add(GateKind::Z, {family}, true);
  c.add(GateKind::Z, {sign}, true);
  // family 0: Y on the target.
  emit_inject_star_pauli(c, PayloadKind::Y, addr, data, [&](Circuit& cc, std::size_t d0) {
    cc.add(GateKind::X, {family});
    cc.add(GateKind::CZ, {family, d0}, true);
    cc.add(GateKind::X, {family});
  });
  // family 1: X on the target.
  emit_inject_star_pauli(c, PayloadKind::X, addr, data, [&](Circuit& cc, std::size_t d0) {
    cc.add(GateKind::CZ, {family, d0}, true);
  });
}

/// Applies X (flag 0) or Y (flag 1) to the addressed data qubit.
inline void emit_inject_select_p(Circuit& c, Variant v, const AddressRegister& addr,
                                 const Qubits& data, std::size_t flag) {
  if (v == Variant::plain) {
    emit_inject(c, v, addr, data,
                [&](Circuit& cc, std::size_t d0) { emit_select_p(cc, flag, d0); });
    return;
  }
  emit_inject_star_pauli(c, PayloadKind::X, addr, data, [&](Circuit& cc, std::size_t d0) {
    cc.add(GateKind::X, {flag});
    cc.add(GateKind::CZ, {flag, d0}, true);
    cc.add(GateKind::X, {flag});
  });
  emit_inject_star_pauli(c, PayloadKind::Y, addr, data, [&](Circuit& cc, std::size_t d0) {
    cc.add(GateKind::CZ, {flag, d0}, true);
  });
}

/// Layout: two P1 qubits (family, sign), address, data.
inline Circuit inject_select_q(std::size_t n, Variant v) {
  if (n == 0) throw DimensionError("inject_select_q: n must be positive");
  const auto g = gadget_layout(n, 2);
  Circuit c(g.width);
  c.add_label("pauli", 0, 2);
  label_gadget(c, g);
  emit_inject_select_q(c, v, g.address, g.data, 0, 1);
  return c;
}

/// Layout: one P2 qubit, address, data.
inline Circuit inject_select_p(std::size_t n, Variant v) {
  if (n == 0) throw DimensionError("inject_select_p: n must be positive");
  const auto g = gadget_layout(n, 1);
  Circuit c(g.width);
  c.add_label("pauli", 0, 1);
  label_gadget(c, g);
  emit_inject_select_p(c, v, g.address, g.data, 0);
  return c;
}

}  // namespace jwselect
