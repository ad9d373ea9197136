"""Phase primitives: states, overlaps, three-vertex phases, Majorana
decomposition, Bloch geometry."""

import cmath
import math

import numpy as np
import pytest

from triphase.core import (
    BlochVector,
    DegenerateTriangle,
    QubitState,
    SymmetricState,
    UndefinedPhase,
    bloch_from_qubit,
    majorana_decompose,
    qubit_from_bloch,
    qubit_inner,
    qutrit_inner,
    random_qubit,
    random_symmetric,
    spherical_triangle_signed_area,
    symmetrize,
    three_vertex_phase_qubit,
    three_vertex_phase_qutrit,
    wrap_angle,
)

H = QubitState(1, 0)
V = QubitState(0, 1)
D = QubitState.of(1, 1)
R = QubitState.of(1, 1j)


def angdiff(a, b):
    return abs(wrap_angle(a - b))


class TestStates:
    def test_constructor_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            QubitState(1, 1)
        with pytest.raises(ValueError):
            SymmetricState(0.5, 0.5, 0.5)
        with pytest.raises(ValueError):
            BlochVector(1, 1, 0)

    def test_of_normalizes(self):
        s = QubitState.of(3, 4j)
        assert abs(s.amp_h - 0.6) < 1e-15 and abs(s.amp_v - 0.8j) < 1e-15
        with pytest.raises(ValueError):
            QubitState.of(0, 0)

    def test_wrap_angle_branch(self):
        assert wrap_angle(math.pi) == pytest.approx(math.pi)
        assert wrap_angle(-math.pi) == pytest.approx(math.pi)
        assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)
        assert abs(wrap_angle(0.3) - 0.3) < 1e-15


class TestThreeVertexQubit:
    def test_identical_states_zero(self):
        assert three_vertex_phase_qubit(H, H, H) == 0.0

    def test_h_d_r_quarter_turn(self):
        # independent oracle: multiply the overlaps out by hand
        product = qubit_inner(H, R) * qubit_inner(R, D) * qubit_inner(D, H)
        assert product == pytest.approx((1 - 1j) / 4, abs=1e-15)
        gamma = three_vertex_phase_qubit(H, D, R)
        assert gamma == pytest.approx(-math.pi / 4, abs=1e-12)
        assert gamma == pytest.approx(cmath.phase(product), abs=1e-15)

    def test_orthogonal_pair_raises(self):
        with pytest.raises(UndefinedPhase):
            three_vertex_phase_qubit(H, V, D)
        with pytest.raises(UndefinedPhase):
            three_vertex_phase_qubit(H, V, R)

    def test_gauge_invariance(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            a, b, c = (random_qubit(rng) for _ in range(3))
            base = three_vertex_phase_qubit(a, b, c)
            u, v, w = np.exp(1j * rng.uniform(-math.pi, math.pi, size=3))
            a2 = QubitState(u * a.amp_h, u * a.amp_v)
            b2 = QubitState(v * b.amp_h, v * b.amp_v)
            c2 = QubitState(w * c.amp_h, w * c.amp_v)
            assert angdiff(three_vertex_phase_qubit(a2, b2, c2), base) <= 1e-12

    def test_cyclic_and_swap(self):
        rng = np.random.default_rng(12)
        for _ in range(1000):
            a, b, c = (random_qubit(rng) for _ in range(3))
            g = three_vertex_phase_qubit(a, b, c)
            assert angdiff(three_vertex_phase_qubit(b, c, a), g) <= 1e-12
            assert angdiff(three_vertex_phase_qubit(c, a, b), g) <= 1e-12
            assert angdiff(three_vertex_phase_qubit(a, c, b), -g) <= 1e-12


class TestThreeVertexQutrit:
    def test_identical_states_zero(self):
        hh = SymmetricState(1, 0, 0)
        assert three_vertex_phase_qutrit(hh, hh, hh) == 0.0

    def test_orthogonal_pair_raises(self):
        a = SymmetricState(1, 0, 0)
        b = SymmetricState(0, 1, 0)
        c = SymmetricState.of(1, 1, 1)
        with pytest.raises(UndefinedPhase):
            three_vertex_phase_qutrit(a, b, c)

    def test_cyclic_swap_gauge(self):
        rng = np.random.default_rng(13)
        for _ in range(1000):
            a, b, c = (random_symmetric(rng) for _ in range(3))
            g = three_vertex_phase_qutrit(a, b, c)
            assert angdiff(three_vertex_phase_qutrit(b, c, a), g) <= 1e-12
            assert angdiff(three_vertex_phase_qutrit(a, c, b), -g) <= 1e-12
            u = np.exp(1j * rng.uniform(-math.pi, math.pi))
            a2 = SymmetricState(u * a.amp_hh, u * a.amp_sym, u * a.amp_vv)
            assert angdiff(three_vertex_phase_qutrit(a2, b, c), g) <= 1e-12


class TestSymmetrize:
    def test_coincident_pair(self):
        s = symmetrize(H, H)
        assert s.amp_hh == 1.0 and s.amp_sym == 0.0 and s.amp_vv == 0.0

    def test_orthogonal_pair(self):
        s = symmetrize(H, V)
        assert abs(s.amp_sym - 1.0) < 1e-15
        assert s.amp_hh == 0.0 and s.amp_vv == 0.0

    def test_h_with_diagonal(self):
        # |H>|D> + |D>|H> expands to (2|HH> + sqrt(2)*sym)/sqrt(6)
        s = symmetrize(H, D)
        expected = np.array([2.0, math.sqrt(2.0), 0.0]) / math.sqrt(6.0)
        assert np.allclose(s.vec, expected, atol=1e-15)

    def test_exactly_symmetric_in_arguments(self):
        rng = np.random.default_rng(14)
        for _ in range(200):
            p, q = random_qubit(rng), random_qubit(rng)
            a, b = symmetrize(p, q), symmetrize(q, p)
            assert a.amp_hh == b.amp_hh and a.amp_sym == b.amp_sym and a.amp_vv == b.amp_vv

    def test_norm_bounded_below(self):
        # squared norm before normalization is 2(1 + |<p|q>|^2); antipodal
        # pairs still give a valid state
        s = symmetrize(D, QubitState.of(1, -1))
        assert abs(s.amp_hh) ** 2 + abs(s.amp_sym) ** 2 + abs(s.amp_vv) ** 2 == pytest.approx(1.0)


class TestMajorana:
    def test_coincident_pole(self):
        p, q = majorana_decompose(SymmetricState(1, 0, 0))
        assert abs(qubit_inner(p, H)) == pytest.approx(1.0, abs=1e-12)
        assert abs(qubit_inner(q, H)) == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_hv(self):
        p, q = majorana_decompose(SymmetricState(0, 1, 0))
        fids = sorted([abs(qubit_inner(p, H)), abs(qubit_inner(q, H))])
        assert fids[1] == pytest.approx(1.0, abs=1e-12)
        fids = sorted([abs(qubit_inner(p, V)), abs(qubit_inner(q, V))])
        assert fids[1] == pytest.approx(1.0, abs=1e-12)

    def test_degree_drop_gives_vertical(self):
        s = SymmetricState.of(0, 0.6, 0.8)
        p, q = majorana_decompose(s)
        assert q.amp_h == 0.0 and abs(q.amp_v) == 1.0
        assert abs(qutrit_inner(symmetrize(p, q), s)) >= 1.0 - 1e-12

    def test_vv_state(self):
        p, q = majorana_decompose(SymmetricState(0, 0, 1))
        assert p.amp_h == 0.0 and q.amp_h == 0.0

    def test_roundtrip_random(self):
        rng = np.random.default_rng(15)
        for _ in range(1000):
            s = random_symmetric(rng)
            p, q = majorana_decompose(s)
            assert abs(qutrit_inner(symmetrize(p, q), s)) >= 1.0 - 1e-9

    def test_roundtrip_near_degenerate(self):
        rng = np.random.default_rng(16)
        for _ in range(200):
            p = random_qubit(rng)
            eps = 10.0 ** rng.uniform(-10, -4)
            q = QubitState.of(*(p.vec + eps * (rng.normal(size=2) + 1j * rng.normal(size=2))))
            s = symmetrize(p, q)
            pp, qq = majorana_decompose(s)
            assert abs(qutrit_inner(symmetrize(pp, qq), s)) >= 1.0 - 1e-9


class TestBloch:
    def test_conventions(self):
        assert np.allclose(bloch_from_qubit(H).vec, [0, 0, 1], atol=1e-15)
        assert np.allclose(bloch_from_qubit(D).vec, [1, 0, 0], atol=1e-15)
        assert np.allclose(bloch_from_qubit(R).vec, [0, 1, 0], atol=1e-15)
        assert np.allclose(bloch_from_qubit(V).vec, [0, 0, -1], atol=1e-15)

    def test_roundtrip(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            p = random_qubit(rng)
            back = qubit_from_bloch(bloch_from_qubit(p))
            assert abs(qubit_inner(back, p)) >= 1.0 - 1e-12

    def test_poles(self):
        assert abs(qubit_inner(qubit_from_bloch(BlochVector(0, 0, 1)), H)) == pytest.approx(1.0)
        assert abs(qubit_inner(qubit_from_bloch(BlochVector(0, 0, -1)), V)) == pytest.approx(1.0)


class TestSolidAngle:
    def test_degenerate_triangle_zero(self):
        v = bloch_from_qubit(D)
        assert spherical_triangle_signed_area(v, v, v) == 0.0

    def test_octant_orientation(self):
        z, x, y = BlochVector(0, 0, 1), BlochVector(1, 0, 0), BlochVector(0, 1, 0)
        omega = spherical_triangle_signed_area(z, x, y)
        assert omega == pytest.approx(math.pi / 2, abs=1e-12)
        assert spherical_triangle_signed_area(z, y, x) == pytest.approx(-math.pi / 2, abs=1e-12)

    def test_antipodal_raises(self):
        z, zm, x = BlochVector(0, 0, 1), BlochVector(0, 0, -1), BlochVector(1, 0, 0)
        with pytest.raises(DegenerateTriangle):
            spherical_triangle_signed_area(z, zm, x)

    def test_area_phase_law(self):
        rng = np.random.default_rng(18)
        for _ in range(1000):
            a, b, c = (random_qubit(rng) for _ in range(3))
            product = qubit_inner(a, c) * qubit_inner(c, b) * qubit_inner(b, a)
            if abs(product) < 1e-6:
                continue
            gamma = three_vertex_phase_qubit(a, b, c)
            omega = spherical_triangle_signed_area(
                bloch_from_qubit(a), bloch_from_qubit(b), bloch_from_qubit(c)
            )
            assert abs(wrap_angle(gamma + omega / 2.0)) < 1e-9
