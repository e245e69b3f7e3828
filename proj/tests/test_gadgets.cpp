#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace jwselect;
using namespace jwselect::testing;

namespace {

/// Suffix parity: bit j of the image is the XOR of bits j..n-1.
std::uint64_t suffix_xor(std::uint64_t x, std::size_t n) {
  std::uint64_t out = 0;
  bool acc = false;
  for (std::size_t j = n; j-- > 0;) {
    acc ^= bit_of(x, n, j);
    out = set_bit(out, n, j, acc);
  }
  return out;
}

std::size_t count_kind(const Circuit& c, GateKind k) {
  return static_cast<std::size_t>(
      std::count_if(c.gates().begin(), c.gates().end(), [&](const Gate& g) { return g.kind == k; }));
}

/// Critical-path count of gates of one kind, in dependency order.
std::size_t stage_depth(const Circuit& c, GateKind k) {
  std::vector<std::size_t> stage(c.n_qubits(), 0);
  std::size_t best = 0;
  for (const auto& g : c.gates()) {
    std::size_t st = 0;
    for (auto q : g.qubits) st = std::max(st, stage[q]);
    if (g.kind == k) best = std::max(best, ++st);
    for (auto q : g.qubits) stage[q] = st;
  }
  return best;
}

/// Controlled SWAP^{(x) m} on qubit 0 and pairs (1+2k, 2+2k).
Matrix toggle_reference(std::size_t m) {
  const std::size_t n = 1 + 2 * m;
  return permutation_matrix(std::size_t{1} << n, [&](std::size_t x) {
    if (!bit_of(x, n, 0)) return x;
    std::uint64_t y = x;
    for (std::size_t k = 0; k < m; ++k) {
      y = set_bit(y, n, 1 + 2 * k, bit_of(x, n, 2 + 2 * k));
      y = set_bit(y, n, 2 + 2 * k, bit_of(x, n, 1 + 2 * k));
    }
    return static_cast<std::size_t>(y);
  });
}

/// Output basis index of a circuit on a basis input, with its amplitude.
std::pair<std::uint64_t, Complex> basis_image(const Circuit& c, std::uint64_t in) {
  const Amplitudes out = run_basis(c, in);
  for (std::uint64_t i = 0; i < out.size(); ++i) {
    if (std::abs(out[i]) > 0.5) return {i, out[i]};
  }
  return {~std::uint64_t{0}, 0};
}

std::size_t t_count(const Circuit& c) { return schedule(lower_macros(c)).t_count; }
std::size_t t_depth(const Circuit& c) { return schedule(lower_macros(c)).t_depth; }

}  // namespace

// ---------------------------------------------------------------------------
// Ladder.

TEST(Ladder, CascadeSmall) {
  EXPECT_TRUE(ladder_cascade(1).empty());
  const Circuit two = ladder_cascade(2);
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(two.gates()[0].qubits, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(cx_image(ladder_cascade(4), 0b1011), 0b1001u);
}

TEST(Ladder, CascadeIsSuffixXor) {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::uint64_t x = 0; x < (1u << n); ++x) EXPECT_EQ(cx_image(ladder_cascade(n), x), suffix_xor(x, n));
  }
}

TEST(Ladder, TreeMatchesCascadeAsGf2Map) {
  for (std::size_t n = 2; n <= 64; ++n) {
    const Circuit tree = ladder_tree(n), cas = ladder_cascade(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t e = set_bit(0, n, j, true);
      ASSERT_EQ(cx_image(tree, e), cx_image(cas, e)) << "n=" << n << " column " << j;
    }
    EXPECT_LE(schedule(tree).clifford_depth, 2 * ceil_log2(n)) << "n=" << n;
  }
}

TEST(Ladder, TreeTwoEqualsCascade) { EXPECT_EQ(ladder_tree(2).gates(), ladder_cascade(2).gates()); }

TEST(Ladder, TreeFiveExhaustive) {
  for (std::uint64_t x = 0; x < 32; ++x) {
    const auto [out, amp] = basis_image(ladder_tree(5), x);
    EXPECT_EQ(out, suffix_xor(x, 5));
    EXPECT_NEAR(amp.real(), 1.0, 1e-15);
  }
}

TEST(Ladder, TreeEightDepth) { EXPECT_LE(schedule(ladder_tree(8)).clifford_depth, 6u); }

TEST(Ladder, UnitariesAgreeUpToSix) {
  for (std::size_t n = 1; n <= 6; ++n) {
    EXPECT_LT(matrix_diff(unitary_of(ladder_tree(n)), unitary_of(ladder_cascade(n))), 1e-15);
  }
}

// ---------------------------------------------------------------------------
// Fanout.

TEST(Fanout, SingleTargetIsOneCx) {
  const Circuit c = fanout_cnot(0, {1});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.gates()[0].kind, GateKind::CX);
}

TEST(Fanout, CopiesControl) {
  const auto [out, amp] = basis_image(fanout_cnot(0, {1, 2, 3}), 0b1000);
  EXPECT_EQ(out, 0b1111u);
}

TEST(Fanout, EqualsSequentialCxProduct) {
  for (std::size_t m = 1; m <= 9; ++m) {
    Qubits t = iota_qubits(1, m);
    Circuit seq(m + 1);
    for (auto q : t) seq.add(GateKind::CX, {0, q});
    const Circuit fan = fanout_cnot(0, t);
    for (std::uint64_t x = 0; x < (1u << (m + 1)); ++x) ASSERT_EQ(cx_image(fan, x), cx_image(seq, x)) << m;
  }
  Qubits t7 = iota_qubits(1, 7);
  Circuit seq(8);
  for (auto q : t7) seq.add(GateKind::CX, {0, q});
  EXPECT_LT(matrix_diff(unitary_of(fanout_cnot(0, t7)), unitary_of(seq)), 1e-15);
}

TEST(Fanout, ScatteredTargets) {
  const Qubits t{5, 1, 7, 3, 6};
  Circuit seq(8);
  for (auto q : t) seq.add(GateKind::CX, {2, q});
  const Circuit fan = fanout_cnot(2, t);
  for (std::uint64_t x = 0; x < 256; ++x) EXPECT_EQ(cx_image(fan, x), cx_image(seq, x));
}

TEST(Fanout, LogarithmicDepth) {
  // Depth grows logarithmically: capacity at least doubles every two layers.
  for (std::size_t d = 2; d <= 12; ++d) EXPECT_GE(fanout_capacity(d), 2 * fanout_capacity(d - 2));
  for (std::size_t m = 1; m <= 200; ++m) {
    EXPECT_EQ(schedule(fanout_cnot(0, iota_qubits(1, m))).clifford_depth, fanout_depth(m));
    EXPECT_LE(fanout_depth(m), 2 * ceil_log2(m + 1) + 1) << "m=" << m;
  }
}

TEST(Fanout, DepthWithinLogPlusOne) {
  for (std::size_t m = 1; m <= 16; ++m) {
    EXPECT_LE(schedule(fanout_cnot(0, iota_qubits(1, m))).clifford_depth, ceil_log2(m + 1) + 1)
        << "m=" << m;
  }
}

TEST(Fanout, OverlapRejected) {
  EXPECT_THROW(fanout_cnot(1, {2, 1}), DimensionError);
  EXPECT_THROW(fanout_cnot(0, {2, 2}), DimensionError);
}

// ---------------------------------------------------------------------------
// Toggle construction.

TEST(Toggle, SinglePairIsOneCswap) {
  const Circuit c = multi_target_controlled_swap(1);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.gates()[0].kind, GateKind::CSWAP);
}

TEST(Toggle, MatchesTensorProductReference) {
  for (std::size_t m = 1; m <= 4; ++m) {
    const Circuit c = multi_target_controlled_swap(m);
    EXPECT_LT(matrix_diff(unitary_of(c), toggle_reference(m)), 1e-12) << "m=" << m;
    EXPECT_LE(count_kind(c, GateKind::CSWAP), 2 * m);
    EXPECT_LE(stage_depth(c, GateKind::CSWAP), 4u);
  }
}

TEST(Toggle, ThreePairs) {
  const Circuit c = multi_target_controlled_swap(3);
  EXPECT_LE(count_kind(c, GateKind::CSWAP), 6u);
  EXPECT_LE(stage_depth(c, GateKind::CSWAP), 4u);
}

TEST(Toggle, LargeMStaysInFourLayers) {
  for (std::size_t m = 1; m <= 40; ++m) {
    const Circuit c = multi_target_controlled_swap(m);
    EXPECT_LE(count_kind(c, GateKind::CSWAP), 2 * m);
    EXPECT_LE(stage_depth(c, GateKind::CSWAP), 4u);
  }
}

TEST(Toggle, BorrowedQubitIsRestored) {
  Circuit c(8);
  emit_multi_target_cswap(c, 0, {{2, 3}, {4, 5}, {6, 7}}, 1);
  EXPECT_EQ(count_kind(c, GateKind::CSWAP), 6u);
  for (std::uint64_t x = 0; x < 256; ++x) {
    std::uint64_t want = x;
    if (bit_of(x, 8, 0)) {
      for (std::size_t a : {2, 4, 6}) {
        want = set_bit(want, 8, a, bit_of(x, 8, a + 1));
        want = set_bit(want, 8, a + 1, bit_of(x, 8, a));
      }
    }
    EXPECT_EQ(basis_image(c, x).first, want);
  }
}

TEST(Toggle, OverlapRejected) {
  Circuit c(5);
  EXPECT_THROW(emit_multi_target_cswap(c, 0, {{1, 2}, {2, 3}}), DimensionError);
  EXPECT_THROW(emit_multi_target_cswap(c, 1, {{1, 2}}), DimensionError);
}

// ---------------------------------------------------------------------------
// SwapUp.

TEST(SwapUp, TwoMovesBitToFront) {
  // address x=1, data |01> -> |10>
  EXPECT_EQ(basis_image(swap_up(2), 0b101).first, 0b110u);
}

TEST(SwapUp, EightCounts) {
  EXPECT_EQ(count_kind(swap_up(8), GateKind::CSWAP), 14u);
  EXPECT_EQ(t_count(swap_up(8)), 98u);
  EXPECT_LE(t_depth(swap_up(8)), 48u);
}

TEST(SwapUp, CswapCountIsTwiceNMinusOne) {
  for (std::size_t n = 2; n <= 64; ++n) EXPECT_EQ(count_kind(swap_up(n), GateKind::CSWAP), 2 * (n - 1)) << "n=" << n;
}

TEST(SwapUp, AddressInvariantAndPermutation) {
  std::mt19937_64 rng(2);
  for (std::size_t n = 2; n <= 8; ++n) {
    const Circuit c = swap_up(n);
    for (std::size_t x = 0; x < n; ++x) {
      // sigma from one-hot tracking.
      std::vector<std::size_t> sigma(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t in = join(x, std::uint64_t{1} << (n - 1 - i), n);
        const auto [out, amp] = basis_image(c, in);
        ASSERT_EQ(out >> n, x) << "address changed";
        EXPECT_NEAR(amp.real(), 1.0, 1e-12);
        const std::uint64_t data = out & ((std::uint64_t{1} << n) - 1);
        ASSERT_EQ(std::popcount(data), 1);
        sigma[i] = n - 1 - std::countr_zero(data);
      }
      EXPECT_EQ(sigma[x], 0u) << "n=" << n << " x=" << x;
      // Content independence.
      for (int t = 0; t < 8; ++t) {
        const std::uint64_t data = rng() & ((std::uint64_t{1} << n) - 1);
        std::uint64_t want = 0;
        for (std::size_t i = 0; i < n; ++i) want = set_bit(want, n, sigma[i], bit_of(data, n, i));
        EXPECT_EQ(basis_image(c, join(x, data, n)).first, join(x, want, n));
      }
    }
  }
}

TEST(SwapUpStar, EightCounts) {
  EXPECT_EQ(t_count(swap_up_star(8)), 28u);
  EXPECT_LE(t_depth(swap_up_star(8)), 12u);
}

TEST(SwapUpStar, MatchesSwapUpUpToSign) {
  for (std::size_t n : {2, 3, 4, 5, 8}) {
    const Circuit plain = swap_up(n), star = swap_up_star(n);
    for (std::uint64_t in = 0; in < (std::uint64_t{1} << plain.n_qubits()); ++in) {
      const auto a = basis_image(plain, in), b = basis_image(star, in);
      ASSERT_EQ(a.first, b.first);
      EXPECT_NEAR(std::abs(b.second.real()), 1.0, 1e-12);
      EXPECT_NEAR(b.second.imag(), 0.0, 1e-12);
    }
  }
}

TEST(SwapUpStar, ConjugatedZIsInjectZ) {
  const Circuit up = swap_up_star(4);
  Circuit c(up.n_qubits());
  c.append(up);
  c.add(GateKind::Z, {2});
  c.append(inverse(up));
  EXPECT_LT(matrix_diff(unitary_of(c), unitary_of(inject(PayloadKind::Z, 4))), 1e-12);
}

// ---------------------------------------------------------------------------
// Phase-incorrect CSWAP.

TEST(CswapStar, BasisActions) {
  const Circuit c = cswap_phase_incorrect();
  EXPECT_EQ(basis_image(c, 0b110).first, 0b101u);
  EXPECT_NEAR(basis_image(c, 0b110).second.real(), 1.0, 1e-12);
  EXPECT_EQ(basis_image(c, 0b100).first, 0b100u);
  EXPECT_NEAR(basis_image(c, 0b100).second.real(), -1.0, 1e-12);
  EXPECT_EQ(basis_image(c, 0b011).first, 0b011u);
  EXPECT_NEAR(basis_image(c, 0b011).second.real(), 1.0, 1e-12);
}

TEST(CswapStar, UnitaryAndGateSet) {
  const Circuit c = cswap_phase_incorrect();
  Matrix want = permutation_matrix(8, [](std::size_t x) {
    return (x & 4) ? (4 | ((x & 1) << 1) | ((x >> 1) & 1)) : x;
  });
  want(4, 4) = -1;
  EXPECT_LT(matrix_diff(unitary_of(c), want), 1e-12);
  EXPECT_EQ(count_kind(c, GateKind::A), 2u);
  EXPECT_EQ(count_kind(c, GateKind::Adg), 2u);
  for (const auto& g : c.gates()) EXPECT_TRUE(is_clifford(g.kind) || g.kind == GateKind::A || g.kind == GateKind::Adg);
}

// ---------------------------------------------------------------------------
// Injection.

TEST(Inject, ZOnAddressedQubit) {
  const Circuit c = inject(PayloadKind::Z, 4);
  auto r = basis_image(c, join(1, 0b0101, 4));
  EXPECT_EQ(r.first, join(1, 0b0101, 4));
  EXPECT_NEAR(r.second.real(), -1.0, 1e-12);
  r = basis_image(c, join(0, 0, 4));
  EXPECT_EQ(r.first, 0u);
  EXPECT_NEAR(r.second.real(), 1.0, 1e-12);
}

TEST(Inject, PauliPayloadsMatchOracle) {
  std::mt19937_64 rng(4);
  for (auto [kind, letter] : {std::pair{PayloadKind::X, Pauli::X}, {PayloadKind::Y, Pauli::Y}, {PayloadKind::Z, Pauli::Z}}) {
    for (std::size_t n : {2, 3, 5}) {
      const Circuit c = inject(kind, n);
      for (std::size_t x = 0; x < n; ++x) {
        const Amplitudes psi = random_state(n, rng);
        Amplitudes full(std::size_t{1} << c.n_qubits());
        for (std::size_t s = 0; s < psi.size(); ++s) full[join(x, s, n)] = psi[s];
        const Amplitudes out = apply_circuit(c, {c.n_qubits(), full}, {.allow_macros = true}).amplitudes;
        const Amplitudes want = pauli_apply(PauliString::single(n, x, letter), psi);
        for (std::size_t s = 0; s < psi.size(); ++s) EXPECT_LT(std::abs(out[join(x, s, n)] - want[s]), 1e-12);
      }
    }
  }
}

TEST(Inject, CostsAtEight) {
  EXPECT_EQ(t_count(inject_z(8, Variant::plain)), 196u);
  EXPECT_EQ(t_count(inject_star_z(8)), 56u);
  EXPECT_LE(t_depth(inject_star_z(8)), 24u);
  EXPECT_EQ(inject_star_z(8).count_marked(), 1u);
}

TEST(Inject, StarEqualsPlainExhaustive) {
  for (std::size_t n : {2, 4, 8}) {
    const Circuit plain = inject_z(n, Variant::plain), star = inject_star_z(n);
    for (std::uint64_t x = 0; x < n; ++x) {
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        const auto a = basis_image(plain, join(x, s, n)), b = basis_image(star, join(x, s, n));
        ASSERT_EQ(a.first, b.first);
        ASSERT_LT(std::abs(a.second - b.second), 1e-12) << "n=" << n << " x=" << x << " s=" << s;
      }
    }
  }
  EXPECT_LT(matrix_diff(unitary_of(inject_z(4, Variant::plain)), unitary_of(inject_star_z(4))), 1e-12);
}

// ---------------------------------------------------------------------------
// Pauli selection.

TEST(SelectQ, FamilyX) {
  const Amplitudes out = run_basis(select_q(), 0b000);
  EXPECT_LT(std::abs(out[0b001] - Complex(0, 1)), 1e-15);
}

TEST(SelectQ, AllFourMatchQMap) {
  // P1 = X, -X, Y, -Y -> Q = Y, -Y, -X, X
  const char* q_of[4] = {"+Y", "-Y", "-X", "+X"};
  std::mt19937_64 rng(9);
  const Circuit c = select_q();
  for (std::uint64_t sel = 0; sel < 4; ++sel) {
    const Amplitudes psi = random_state(1, rng);
    Amplitudes full(8);
    full[sel << 1] = psi[0];
    full[(sel << 1) | 1] = psi[1];
    const Amplitudes out = apply_circuit(c, {3, full}).amplitudes;
    const Amplitudes want = pauli_apply(PauliString::parse(q_of[sel]), psi);
    EXPECT_LT(std::abs(out[sel << 1] - want[0]) + std::abs(out[(sel << 1) | 1] - want[1]), 1e-14) << sel;
  }
}

TEST(SelectP, FlagSelectsXOrY) {
  EXPECT_LT(std::abs(run_basis(select_p(), 0b10)[0b11] - Complex(0, 1)), 1e-15);
  EXPECT_LT(std::abs(run_basis(select_p(), 0b00)[0b01] - Complex(1, 0)), 1e-15);
}

// ---------------------------------------------------------------------------
// Inject-Select.

TEST(InjectSelect, CostsAtEight) {
  EXPECT_EQ(t_count(inject_select_q(8, Variant::plain)), 196u);
  EXPECT_EQ(t_count(inject_select_q(8, Variant::star)), 112u);
  EXPECT_LE(t_depth(inject_select_q(8, Variant::star)), 48u);
  EXPECT_EQ(t_count(inject_select_p(8, Variant::plain)), 196u);
  EXPECT_EQ(t_count(inject_select_p(8, Variant::star)), 112u);
}

TEST(InjectSelect, AddressTwoFamilyX) {
  for (auto v : {Variant::plain, Variant::star}) {
    const Circuit c = inject_select_q(4, v);
    // pauli |00>, address |10>, system |0000>
    const auto [out, amp] = basis_image(c, join(0b0010, 0, 4));
    EXPECT_EQ(out, join(0b0010, 0b0010, 4));
    EXPECT_LT(std::abs(amp - Complex(0, 1)), 1e-12);
  }
}

TEST(InjectSelect, CorrectnessTable) {
  std::mt19937_64 rng(6);
  const char* q_of[4] = {"+Y", "-Y", "-X", "+X"};
  const char* p_of[2] = {"+X", "+Y"};
  for (auto v : {Variant::plain, Variant::star}) {
    for (std::size_t n = 2; n <= 4; ++n) {
      const std::size_t j = ceil_log2(n);
      for (bool is_q : {true, false}) {
        const Circuit c = is_q ? inject_select_q(n, v) : inject_select_p(n, v);
        const std::size_t flags = is_q ? 2 : 1;
        for (std::uint64_t f = 0; f < (1u << flags); ++f) {
          for (std::uint64_t x = 0; x < n; ++x) {
            const std::uint64_t sel = (f << j) | x;
            const Amplitudes psi = random_state(n, rng);
            const ClassicalResult r = apply_classical_control(c, sel, psi);
            PauliString letter = PauliString::parse(is_q ? q_of[f] : p_of[f]);
            PauliString want_p = PauliString::single(n, x, letter[0]).with_phase(letter.phase());
            const Amplitudes want = pauli_apply(want_p, psi);
            Amplitudes got = r.system;
            for (auto& a : got) a *= r.phase;
            EXPECT_EQ(r.selection_out, sel);
            EXPECT_LT(max_abs_diff(got, want), 1e-12)
                << variant_name(v) << " n=" << n << (is_q ? " Q" : " P") << " f=" << f << " x=" << x;
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Cost formulas.

TEST(GadgetCosts, CountsExactAndDepthsBounded) {
  struct Row {
    const char* name;
    std::function<Circuit(std::size_t)> build;
    std::size_t count, depth;
  };
  const Row rows[] = {
      {"SwapUp", [](std::size_t n) { return swap_up(n); }, 14, 16},
      {"SwapUp*", [](std::size_t n) { return swap_up_star(n); }, 4, 4},
      {"Inject(Z)", [](std::size_t n) { return inject_z(n, Variant::plain); }, 28, 32},
      {"Inject*(Z)", [](std::size_t n) { return inject_star_z(n); }, 8, 8},
      {"InjSel(Q)", [](std::size_t n) { return inject_select_q(n, Variant::plain); }, 28, 32},
      {"InjSel*(Q)", [](std::size_t n) { return inject_select_q(n, Variant::star); }, 16, 16},
      {"InjSel(P)", [](std::size_t n) { return inject_select_p(n, Variant::plain); }, 28, 32},
      {"InjSel*(P)", [](std::size_t n) { return inject_select_p(n, Variant::star); }, 16, 16},
  };
  for (std::size_t n = 2; n <= 64; ++n) {
    for (const auto& r : rows) {
      const auto rep = schedule(lower_macros(r.build(n)));
      EXPECT_EQ(rep.t_count, r.count * (n - 1)) << r.name << " n=" << n;
      EXPECT_LE(rep.t_depth, r.depth * ceil_log2(n)) << r.name << " n=" << n;
    }
  }
}
