#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "jwselect/errors.hpp"

namespace jwselect {

enum class GateKind : std::uint8_t {
  X, Y, Z, H, S, Sdg, T, Tdg,
  CX, CY, CZ,
  A, Adg,
  SWAP, CSWAP, CSWAP_STAR, TOFFOLI, CCZ, CS, CSdg,
};

inline constexpr std::array<GateKind, 20> kAllGateKinds = {
    GateKind::X,     GateKind::Y,          GateKind::Z,       GateKind::H,
    GateKind::S,     GateKind::Sdg,        GateKind::T,       GateKind::Tdg,
    GateKind::CX,    GateKind::CY,         GateKind::CZ,      GateKind::A,
    GateKind::Adg,   GateKind::SWAP,       GateKind::CSWAP,   GateKind::CSWAP_STAR,
    GateKind::TOFFOLI, GateKind::CCZ,      GateKind::CS,      GateKind::CSdg,
};

inline std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::CX: return "cx";
    case GateKind::CY: return "cy";
    case GateKind::CZ: return "cz";
    case GateKind::A: return "a";
    case GateKind::Adg: return "adg";
    case GateKind::SWAP: return "swap";
    case GateKind::CSWAP: return "cswap";
    case GateKind::CSWAP_STAR: return "cswap_star";
    case GateKind::TOFFOLI: return "ccx";
    case GateKind::CCZ: return "ccz";
    case GateKind::CS: return "cs";
    case GateKind::CSdg: return "csdg";
  }
  return "?";
}

inline std::size_t gate_arity(GateKind k) {
  switch (k) {
    case GateKind::CX:
    case GateKind::CY:
    case GateKind::CZ:
    case GateKind::SWAP:
    case GateKind::CS:
    case GateKind::CSdg:
      return 2;
    case GateKind::CSWAP:
    case GateKind::CSWAP_STAR:
    case GateKind::TOFFOLI:
    case GateKind::CCZ:
      return 3;
    default:
      return 1;
  }
}

inline bool is_macro(GateKind k) {
  switch (k) {
    case GateKind::SWAP:
    case GateKind::CSWAP:
    case GateKind::CSWAP_STAR:
    case GateKind::TOFFOLI:
    case GateKind::CCZ:
    case GateKind::CS:
    case GateKind::CSdg:
      return true;
    default:
      return false;
  }
}

/// T, T† and the A rotations (each A hides exactly one T).
inline bool is_t_like(GateKind k) {
  return k == GateKind::T || k == GateKind::Tdg || k == GateKind::A || k == GateKind::Adg;
}

inline bool is_clifford(GateKind k) { return !is_macro(k) && !is_t_like(k); }

inline GateKind inverse_kind(GateKind k) {
  switch (k) {
    case GateKind::S: return GateKind::Sdg;
    case GateKind::Sdg: return GateKind::S;
    case GateKind::T: return GateKind::Tdg;
    case GateKind::Tdg: return GateKind::T;
    case GateKind::A: return GateKind::Adg;
    case GateKind::Adg: return GateKind::A;
    case GateKind::CS: return GateKind::CSdg;
    case GateKind::CSdg: return GateKind::CS;
    // CSWAP_STAR is diagonal-times-permutation with a real -1 entry, so it is
    // its own inverse just like CSWAP.
    default: return k;
  }
}

struct Gate {
  GateKind kind;
  std::vector<std::size_t> qubits;  // controls first
  bool control_extension_point = false;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct RegisterLabel {
  std::string name;
  std::size_t start;
  std::size_t size;

  friend bool operator==(const RegisterLabel&, const RegisterLabel&) = default;
};

/// Ordered gate list over a fixed qubit count. `global_phase` is an exact
/// multiple of pi/8, kept modulo 16.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const std::vector<RegisterLabel>& labels() const noexcept { return labels_; }
  int global_phase() const noexcept { return global_phase_; }
  bool empty() const noexcept { return gates_.empty(); }
  std::size_t size() const noexcept { return gates_.size(); }

  Circuit& add(GateKind kind, std::initializer_list<std::size_t> qubits, bool mark = false) {
    return add(Gate{kind, std::vector<std::size_t>(qubits), mark});
  }

  Circuit& add(Gate g) {
    validate(g);
    gates_.push_back(std::move(g));
    return *this;
  }

  /// Appends `other`, mapping its qubit i to `qubit_map[i]`.
  Circuit& append(const Circuit& other, const std::vector<std::size_t>& qubit_map) {
    if (qubit_map.size() != other.n_qubits()) {
      throw DimensionError("append: qubit map has " + std::to_string(qubit_map.size()) +
                           " entries for a " + std::to_string(other.n_qubits()) +
                           "-qubit circuit");
    }
    for (const Gate& g : other.gates()) {
      Gate mapped = g;
      for (auto& q : mapped.qubits) q = qubit_map[q];
      add(std::move(mapped));
    }
    add_phase(other.global_phase());
    return *this;
  }

  Circuit& append(const Circuit& other) {
    if (other.n_qubits() != n_qubits_) {
      throw DimensionError("append: " + std::to_string(other.n_qubits()) +
                           "-qubit circuit into " + std::to_string(n_qubits_) + " qubits");
    }
    for (const Gate& g : other.gates()) add(g);
    add_phase(other.global_phase());
    return *this;
  }

  void add_phase(int eighths) { global_phase_ = ((global_phase_ + eighths) % 16 + 16) % 16; }

  void add_label(std::string name, std::size_t start, std::size_t size) {
    if (start + size > n_qubits_) {
      throw DimensionError("register '" + name + "' exceeds circuit width");
    }
    labels_.push_back({std::move(name), start, size});
  }

  void set_labels(std::vector<RegisterLabel> labels) { labels_ = std::move(labels); }

  std::size_t count_marked() const {
    return static_cast<std::size_t>(std::count_if(
        gates_.begin(), gates_.end(), [](const Gate& g) { return g.control_extension_point; }));
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  void validate(const Gate& g) const {
    if (g.qubits.size() != gate_arity(g.kind)) {
      throw DimensionError(std::string(gate_name(g.kind)) + " expects " +
                           std::to_string(gate_arity(g.kind)) + " qubits, got " +
                           std::to_string(g.qubits.size()));
    }
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (g.qubits[i] >= n_qubits_) {
        throw DimensionError("qubit " + std::to_string(g.qubits[i]) + " out of range for " +
                             std::to_string(n_qubits_) + " qubits");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (g.qubits[i] == g.qubits[j]) {
          throw DimensionError(std::string(gate_name(g.kind)) + " repeats qubit " +
                               std::to_string(g.qubits[i]));
        }
      }
    }
  }

  std::size_t n_qubits_ = 0;
  std::vector<Gate> gates_;
  std::vector<RegisterLabel> labels_;
  int global_phase_ = 0;
};

inline Circuit compose(const Circuit& a, const Circuit& b) {
  Circuit out = a;
  out.append(b);
  return out;
}

inline Circuit inverse(const Circuit& c) {
  Circuit out(c.n_qubits());
  out.set_labels(c.labels());
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
    Gate g = *it;
    g.kind = inverse_kind(g.kind);
    out.add(std::move(g));
  }
  out.add_phase(-c.global_phase());
  return out;
}

// ---------------------------------------------------------------------------
// Lowering.

struct LowerOptions {
  /// Replace A/A† by their S/H/T expansion (pure Clifford+T output).
  bool expand_a = false;
};

namespace detail {

inline void emit_ccz(Circuit& out, std::size_t a, std::size_t b, std::size_t c) {
  // Phase (-1)^{abc} = w^{a+b+c-(a^b)-(a^c)-(b^c)+(a^b^c)} with w = e^{i pi/4}.
  out.add(GateKind::T, {a}).add(GateKind::T, {b}).add(GateKind::T, {c});
  out.add(GateKind::CX, {a, b}).add(GateKind::CX, {a, c});
  out.add(GateKind::CX, {b, a}).add(GateKind::CX, {c, a});
  out.add(GateKind::T, {a}).add(GateKind::Tdg, {b}).add(GateKind::Tdg, {c});
  out.add(GateKind::CX, {b, c});
  out.add(GateKind::Tdg, {c});
  out.add(GateKind::CX, {b, c});
  out.add(GateKind::CX, {c, a}).add(GateKind::CX, {b, a});
  out.add(GateKind::CX, {a, c}).add(GateKind::CX, {a, b});
}

inline void emit_cs(Circuit& out, std::size_t a, std::size_t b, bool dagger) {
  const GateKind t = dagger ? GateKind::Tdg : GateKind::T;
  const GateKind tdg = dagger ? GateKind::T : GateKind::Tdg;
  out.add(t, {a}).add(t, {b});
  out.add(GateKind::CX, {a, b});
  out.add(tdg, {b});
  out.add(GateKind::CX, {a, b});
}

inline void lower_gate(Circuit& out, const Gate& g, const LowerOptions& opt) {
  const auto& q = g.qubits;
  switch (g.kind) {
    case GateKind::SWAP:
      out.add(GateKind::CX, {q[0], q[1]}).add(GateKind::CX, {q[1], q[0]});
      out.add(GateKind::CX, {q[0], q[1]});
      return;
    case GateKind::CCZ:
      emit_ccz(out, q[0], q[1], q[2]);
      return;
    case GateKind::TOFFOLI:
      out.add(GateKind::H, {q[2]});
      emit_ccz(out, q[0], q[1], q[2]);
      out.add(GateKind::H, {q[2]});
      return;
    case GateKind::CSWAP:
      out.add(GateKind::CX, {q[2], q[1]});
      out.add(GateKind::H, {q[2]});
      emit_ccz(out, q[0], q[1], q[2]);
      out.add(GateKind::H, {q[2]});
      out.add(GateKind::CX, {q[2], q[1]});
      return;
    case GateKind::CSWAP_STAR: {
      const std::size_t c = q[0], t1 = q[1], t2 = q[2];
      Circuit local(out.n_qubits());
      local.add(GateKind::CX, {t2, t1});
      local.add(GateKind::A, {t2});
      local.add(GateKind::CX, {t1, t2});
      local.add(GateKind::A, {t2});
      local.add(GateKind::CX, {c, t2});
      local.add(GateKind::Adg, {t2});
      local.add(GateKind::CX, {t1, t2});
      local.add(GateKind::Adg, {t2});
      local.add(GateKind::CX, {t2, t1});
      for (const Gate& lg : local.gates()) lower_gate(out, lg, opt);
      return;
    }
    case GateKind::CS:
    case GateKind::CSdg:
      emit_cs(out, q[0], q[1], g.kind == GateKind::CSdg);
      return;
    case GateKind::A:
    case GateKind::Adg:
      if (opt.expand_a) {
        // A = e^{-i pi/8} S^dag H T H S (rightmost first in time).
        const bool dag = g.kind == GateKind::Adg;
        out.add(GateKind::S, {q[0]}).add(GateKind::H, {q[0]});
        out.add(dag ? GateKind::Tdg : GateKind::T, {q[0]});
        out.add(GateKind::H, {q[0]}).add(GateKind::Sdg, {q[0]});
        out.add_phase(dag ? 1 : -1);
        return;
      }
      out.add(g);
      return;
    default:
      out.add(g);
      return;
  }
}

}  // namespace detail

/// Expands every macro into terminal gates. Extension-point marks do not
/// survive lowering of a macro (a marked macro becomes several unmarked gates).
inline Circuit lower_macros(const Circuit& c, const LowerOptions& opt = {}) {
  Circuit out(c.n_qubits());
  out.set_labels(c.labels());
  out.add_phase(c.global_phase());
  for (const Gate& g : c.gates()) detail::lower_gate(out, g, opt);
  return out;
}

// ---------------------------------------------------------------------------
// Scheduling.

struct ResourceReport {
  std::size_t t_count = 0;
  std::size_t t_depth = 0;
  std::size_t clifford_count = 0;
  std::size_t clifford_depth = 0;
  std::size_t total_qubits = 0;

  friend bool operator==(const ResourceReport&, const ResourceReport&) = default;

  std::string to_json() const {
    std::ostringstream os;
    os << "{\"t_count\":" << t_count << ",\"t_depth\":" << t_depth
       << ",\"clifford_count\":" << clifford_count << ",\"clifford_depth\":" << clifford_depth
       << ",\"total_qubits\":" << total_qubits << "}";
    return os.str();
  }
};

/// Clifford-depth comes from ASAP layering: each gate goes one layer after the
/// latest layer touching any of its qubits, and a layer counts if it holds a
/// Clifford gate. T-depth is the number of T stages: a gate's stage is the
/// largest stage among the gates it depends on, plus one if it is T-like.
/// T-like gates sharing a stage never share a qubit, so they can always be
/// placed in a single layer.
inline ResourceReport schedule(const Circuit& c) {
  ResourceReport r;
  r.total_qubits = c.n_qubits();
  std::vector<std::size_t> frontier(c.n_qubits(), 0);
  std::vector<std::size_t> stage(c.n_qubits(), 0);
  std::vector<std::uint8_t> clifford_layer;
  for (const Gate& g : c.gates()) {
    if (is_macro(g.kind)) {
      throw LoweringRequiredError(std::string("schedule: macro gate '") +
                                  std::string(gate_name(g.kind)) + "' must be lowered first");
    }
    std::size_t layer = 0;
    std::size_t st = 0;
    for (auto q : g.qubits) {
      layer = std::max(layer, frontier[q]);
      st = std::max(st, stage[q]);
    }
    if (is_t_like(g.kind)) {
      ++r.t_count;
      ++st;
      r.t_depth = std::max(r.t_depth, st);
    } else {
      ++r.clifford_count;
      if (clifford_layer.size() <= layer) clifford_layer.resize(layer + 1, 0);
      clifford_layer[layer] = 1;
    }
    for (auto q : g.qubits) {
      frontier[q] = layer + 1;
      stage[q] = st;
    }
  }
  for (auto f : clifford_layer) r.clifford_depth += f;
  return r;
}

/// Number of ASAP layers that contain at least one T-like gate. Never less
/// than the staged T-depth; kept for comparison.
inline std::size_t t_layers_asap(const Circuit& c) {
  std::vector<std::size_t> frontier(c.n_qubits(), 0);
  std::vector<std::uint8_t> t_layer;
  for (const Gate& g : c.gates()) {
    if (is_macro(g.kind)) throw LoweringRequiredError("t_layers_asap: lower macros first");
    std::size_t layer = 0;
    for (auto q : g.qubits) layer = std::max(layer, frontier[q]);
    for (auto q : g.qubits) frontier[q] = layer + 1;
    if (is_t_like(g.kind)) {
      if (t_layer.size() <= layer) t_layer.resize(layer + 1, 0);
      t_layer[layer] = 1;
    }
  }
  return static_cast<std::size_t>(std::count(t_layer.begin(), t_layer.end(), 1));
}

// ---------------------------------------------------------------------------
// Controlled versions.

/// Adds one control qubit (prepended as qubit 0) to every marked gate and
/// turns the global phase into a phase gate on the control.
inline Circuit add_global_controls(const Circuit& c, std::size_t num_controls) {
  if (num_controls == 0) return c;
  if (c.count_marked() == 0) {
    throw UnsupportedError("add_global_controls: circuit has no control-extension points");
  }
  if (num_controls != 1) {
    throw UnsupportedError("add_global_controls: only a single control is supported");
  }
  Circuit out(c.n_qubits() + 1);
  out.add_label("control", 0, 1);
  for (const auto& l : c.labels()) out.add_label(l.name, l.start + 1, l.size);

  const std::size_t ctl = 0;
  const int phase = c.global_phase();
  if (phase % 2 != 0) {
    throw UnsupportedError("add_global_controls: global phase is not a multiple of pi/4");
  }
  switch (phase / 2) {
    case 0: break;
    case 1: out.add(GateKind::T, {ctl}, true); break;
    case 2: out.add(GateKind::S, {ctl}, true); break;
    case 4: out.add(GateKind::Z, {ctl}, true); break;
    case 6: out.add(GateKind::Sdg, {ctl}, true); break;
    case 7: out.add(GateKind::Tdg, {ctl}, true); break;
    default: {
      // w^k for k in {3, 5}: split into S/Z and T pieces.
      const int k = phase / 2;
      out.add(k == 3 ? GateKind::S : GateKind::Z, {ctl}, true);
      out.add(GateKind::T, {ctl}, true);
    }
  }

  for (const Gate& g : c.gates()) {
    std::vector<std::size_t> q = g.qubits;
    for (auto& v : q) ++v;
    if (!g.control_extension_point) {
      out.add(Gate{g.kind, q, false});
      continue;
    }
    switch (g.kind) {
      case GateKind::X: out.add(GateKind::CX, {ctl, q[0]}, true); break;
      case GateKind::Y: out.add(GateKind::CY, {ctl, q[0]}, true); break;
      case GateKind::Z: out.add(GateKind::CZ, {ctl, q[0]}, true); break;
      case GateKind::S: out.add(GateKind::CS, {ctl, q[0]}, true); break;
      case GateKind::Sdg: out.add(GateKind::CSdg, {ctl, q[0]}, true); break;
      case GateKind::CZ: out.add(GateKind::CCZ, {ctl, q[0], q[1]}, true); break;
      case GateKind::CX: out.add(GateKind::TOFFOLI, {ctl, q[0], q[1]}, true); break;
      case GateKind::CY:
        // S X S^dag = Y on the target.
        out.add(GateKind::Sdg, {q[1]});
        out.add(GateKind::TOFFOLI, {ctl, q[0], q[1]}, true);
        out.add(GateKind::S, {q[1]});
        break;
      default:
        throw UnsupportedError(std::string("add_global_controls: cannot control '") +
                               std::string(gate_name(g.kind)) + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text emission.

inline std::string emit_text(const Circuit& c) {
  std::ostringstream os;
  os << "qubits " << c.n_qubits() << ";\n";
  for (const auto& l : c.labels()) {
    os << "// " << l.name << " q[" << l.start << ".." << (l.start + l.size - 1) << "]\n";
  }
  if (c.global_phase() != 0) os << "gphase(" << c.global_phase() << "*pi/8);\n";
  for (const Gate& g : c.gates()) {
    os << gate_name(g.kind) << ' ';
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (i) os << ',';
      os << "q[" << g.qubits[i] << ']';
    }
    os << ";\n";
  }
  return os.str();
}

}  // namespace jwselect
