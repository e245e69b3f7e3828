#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "jwselect/circuit.hpp"
#include "jwselect/errors.hpp"
#include "jwselect/gadgets.hpp"
#include "jwselect/select.hpp"

namespace jwselect {

enum class Component {
  SwapUp,
  SwapUpStar,
  InjectZ,
  InjectZStar,
  InjSelQ,
  InjSelQStar,
  InjSelP,
  InjSelPStar,
  SelectK2Plain,
  SelectK2Star,
};

inline constexpr std::array<Component, 10> kAllComponents = {
    Component::SwapUp,  Component::SwapUpStar,  Component::InjectZ,       Component::InjectZStar,
    Component::InjSelQ, Component::InjSelQStar, Component::InjSelP,       Component::InjSelPStar,
    Component::SelectK2Plain, Component::SelectK2Star,
};

inline std::string_view component_name(Component c) {
  switch (c) {
    case Component::SwapUp: return "SwapUp";
    case Component::SwapUpStar: return "SwapUpStar";
    case Component::InjectZ: return "InjectZ";
    case Component::InjectZStar: return "InjectZStar";
    case Component::InjSelQ: return "InjSelQ";
    case Component::InjSelQStar: return "InjSelQStar";
    case Component::InjSelP: return "InjSelP";
    case Component::InjSelPStar: return "InjSelPStar";
    case Component::SelectK2Plain: return "SelectK2Plain";
    case Component::SelectK2Star: return "SelectK2Star";
  }
  throw UnsupportedError("unknown component");
}

struct CostFormula {
  std::size_t t_count;
  std::size_t t_depth_bound;
  std::size_t controls_needed;
};

/// Closed-form costs: T-count a(n-1), T-depth bound b*ceil(log2 n).
inline CostFormula expected_cost(Component c, std::size_t n) {
  if (n < 2) throw DimensionError("expected_cost: n must be at least 2");
  const std::size_t m = n - 1;
  const std::size_t l = ceil_log2(n);
  switch (c) {
    case Component::SwapUp: return {14 * m, 16 * l, 0};
    case Component::SwapUpStar: return {4 * m, 4 * l, 0};
    case Component::InjectZ: return {28 * m, 32 * l, 1};
    case Component::InjectZStar: return {8 * m, 8 * l, 1};
    case Component::InjSelQ: return {28 * m, 32 * l, 4};
    case Component::InjSelQStar: return {16 * m, 16 * l, 4};
    case Component::InjSelP: return {28 * m, 32 * l, 2};
    case Component::InjSelPStar: return {16 * m, 16 * l, 2};
    case Component::SelectK2Plain: return {112 * m, 128 * l, 9};
    case Component::SelectK2Star: return {48 * m, 48 * l, 9};
  }
  throw UnsupportedError("unknown component");
}

/// Unlowered circuit of a component.
inline Circuit build_component(Component c, std::size_t n) {
  switch (c) {
    case Component::SwapUp: return swap_up(n);
    case Component::SwapUpStar: return swap_up_star(n);
    case Component::InjectZ: return inject_z(n, Variant::plain);
    case Component::InjectZStar: return inject_z(n, Variant::star);
    case Component::InjSelQ: return inject_select_q(n, Variant::plain);
    case Component::InjSelQStar: return inject_select_q(n, Variant::star);
    case Component::InjSelP: return inject_select_p(n, Variant::plain);
    case Component::InjSelPStar: return inject_select_p(n, Variant::star);
    case Component::SelectK2Plain: return synth_select_k2(n, Variant::plain).circuit;
    case Component::SelectK2Star: return synth_select_k2(n, Variant::star).circuit;
  }
  throw UnsupportedError("unknown component");
}

/// Gates that gain a control in the controlled version: marked gates plus
/// one phase gate when the circuit carries a global phase.
inline std::size_t controls_needed(const Circuit& c) {
  return c.count_marked() + (c.global_phase() != 0 ? 1 : 0);
}

struct FormulaRow {
  std::string component;
  std::size_t n;
  std::string metric;  // t_count, t_depth, controls
  std::size_t measured;
  std::size_t expected;
  std::string status;  // ok, mismatch, within bound, exceeds bound

  bool passed() const { return status == "ok" || status == "within bound"; }
};

inline std::vector<FormulaRow> check_component(Component comp, std::size_t n) {
  const Circuit c = build_component(comp, n);
  const ResourceReport r = schedule(lower_macros(c));
  const CostFormula f = expected_cost(comp, n);
  const std::string name(component_name(comp));
  const std::size_t ctl = controls_needed(c);
  return {
      {name, n, "t_count", r.t_count, f.t_count, r.t_count == f.t_count ? "ok" : "mismatch"},
      {name, n, "t_depth", r.t_depth, f.t_depth_bound,
       r.t_depth <= f.t_depth_bound ? "within bound" : "exceeds bound"},
      {name, n, "controls", ctl, f.controls_needed, ctl == f.controls_needed ? "ok" : "mismatch"},
  };
}

inline std::vector<FormulaRow> check_against_formulas(const std::vector<std::size_t>& n_list) {
  std::vector<FormulaRow> rows;
  for (auto n : n_list) {
    for (auto comp : kAllComponents) {
      auto r = check_component(comp, n);
      rows.insert(rows.end(), r.begin(), r.end());
    }
  }
  return rows;
}

inline std::string formula_csv(const std::vector<FormulaRow>& rows) {
  std::ostringstream os;
  os << "component,n,metric,measured,expected,status\n";
  for (const auto& r : rows) {
    os << r.component << ',' << r.n << ',' << r.metric << ',' << r.measured << ','
       << r.expected << ',' << r.status << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Clifford-depth growth.

struct CliffordScalingRow {
  std::size_t n;
  std::size_t clifford_depth;
  double ratio;  // clifford_depth / ceil(log2 n)^2
};

struct CliffordScaling {
  std::vector<CliffordScalingRow> rows;
  bool bounded = false;
};

/// Clifford-depth / ceil(log2 n)^2 of a synthesized SELECT across n. Counted
/// as bounded when no ratio exceeds the one at the smallest n, and the
/// largest ratio is within a factor 2 of the smallest.
inline CliffordScaling clifford_scaling(const std::vector<std::size_t>& n_list, std::size_t k,
                                        Variant v) {
  CliffordScaling out;
  for (auto n : n_list) {
    const auto sc = synth_select(n, k, k == 2 ? LayoutMode::k2 : LayoutMode::general, v);
    const auto r = schedule(lower_macros(sc.circuit));
    const double l = static_cast<double>(ceil_log2(n));
    out.rows.push_back({n, r.clifford_depth, static_cast<double>(r.clifford_depth) / (l * l)});
  }
  if (out.rows.empty()) return out;
  double lo = out.rows.front().ratio, hi = lo;
  for (const auto& r : out.rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
  }
  out.bounded = hi <= out.rows.front().ratio && hi <= 2.0 * lo;
  return out;
}

}  // namespace jwselect
