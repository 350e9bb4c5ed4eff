import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radtails.exactnum import QRoot, qroot_cmp
from radtails.tails import (
    EqualWeight,
    NotRepresentableError,
    TwoAtom,
    atom_mass_equal,
    brute_force_tail,
    flip_threshold,
    series_tail_value,
    tail_equal,
    tail_two_atom,
    tail_two_atom_decomp,
)

X_37_5 = QRoot.sqrt(Fraction(37, 5))
T_5_37 = QRoot.sqrt(Fraction(5, 37))


def lattice_grid(n):
    """Every atom of the n-coordinate equal-weight sum, plus the midpoints
    between adjacent atoms, plus one point beyond each extreme."""
    out = []
    for m in range(-(n + 1), n + 2):
        out.append(QRoot.scaled_root(m, Fraction(1, n)))
    return out


class TestFlipThreshold:
    def test_only_largest_atom_clears(self):
        assert flip_threshold(10, X_37_5) == 0

    def test_two_atoms_clear(self):
        assert flip_threshold(10, QRoot.scaled_root(8, Fraction(1, 10))) == 1

    def test_below_smallest_atom_takes_all(self):
        n = 7
        x = QRoot(-1, Fraction((n + 1) ** 2, n))
        assert flip_threshold(n, x) == n

    def test_above_rightmost_atom_is_none(self):
        assert flip_threshold(4, QRoot.sqrt(Fraction(5))) is None

    def test_tie_counts(self):
        # the atom 37/sqrt(185) equals sqrt(37/5) exactly
        assert flip_threshold(185, X_37_5) == (185 - 37) // 2


class TestTailEqual:
    def test_unit_threshold_single_coordinate(self):
        assert tail_equal(1, QRoot.of_rational(1)).exact == Fraction(1, 2)

    def test_flagship_threshold_tail(self):
        assert tail_equal(10, X_37_5).exact == Fraction(1, 1024)

    def test_zero_threshold_two_coordinates(self):
        assert tail_equal(2, QRoot(0, Fraction(0))).exact == Fraction(3, 4)

    def test_exact_tie_included(self):
        before = tail_equal(185, X_37_5).exact
        nudged = QRoot.sqrt(Fraction(37, 5) + Fraction(1, 10**9))
        assert before > tail_equal(185, nudged).exact  # the tie carried mass


class TestAtomMass:
    def test_center(self):
        assert atom_mass_equal(2, QRoot(0, Fraction(0))) == Fraction(1, 2)

    def test_rightmost(self):
        assert atom_mass_equal(10, QRoot.sqrt(Fraction(10))) == Fraction(1, 1024)

    def test_not_an_atom(self):
        assert atom_mass_equal(10, X_37_5) == 0

    def test_parity_mismatch(self):
        # 1/sqrt(2) is not an atom of the 2-coordinate sum
        assert atom_mass_equal(2, QRoot.scaled_root(1, Fraction(1, 2))) == 0


class TestTwoAtomTail:
    def test_flagship_two_atom_value(self):
        assert tail_two_atom(TwoAtom(10, T_5_37), X_37_5).exact == Fraction(11, 2048)

    def test_n8_value(self):
        v = TwoAtom(8, QRoot.sqrt(Fraction(2, 11)))
        assert tail_two_atom(v, QRoot.sqrt(Fraction(11, 2))).exact == Fraction(9, 512)

    def test_threshold_below_all_atoms(self):
        v = TwoAtom(2, QRoot.of_rational(Fraction(1, 2)))
        assert tail_two_atom(v, QRoot(-1, Fraction(100))).exact == 1

    def test_rejects_t_outside_unit_interval(self):
        with pytest.raises(ValueError):
            TwoAtom(3, QRoot.of_rational(1))
        with pytest.raises(ValueError):
            TwoAtom(3, QRoot(-1, Fraction(1, 4)))


class TestDecomposition:
    def test_flagship_instance_decomposes(self):
        v = TwoAtom(10, T_5_37)
        # u = sqrt(32/5) = 8/sqrt(10) lands on an atom; v = sqrt(441/40) clears all
        assert tail_two_atom_decomp(v, X_37_5).exact == Fraction(11, 2048)
        assert tail_equal(10, QRoot.sqrt(Fraction(32, 5))).exact == Fraction(11, 1024)
        assert tail_equal(10, QRoot.sqrt(Fraction(441, 40))).exact == 0

    def test_threshold_equal_to_t(self):
        t = QRoot.of_rational(Fraction(1, 2))
        v = TwoAtom(4, t)
        got = tail_two_atom_decomp(v, t).exact
        upper = QRoot.sqrt(Fraction(4, 3))  # 2t/sqrt(1-t^2) with t = 1/2
        expected = (tail_equal(4, QRoot(0, Fraction(0))).exact + tail_equal(4, upper).exact) / 2
        assert got == expected

    def test_n8_matches_direct(self):
        v = TwoAtom(8, QRoot.sqrt(Fraction(2, 11)))
        x = QRoot.sqrt(Fraction(11, 2))
        assert tail_two_atom_decomp(v, x).exact == tail_two_atom(v, x).exact

    def test_irrational_cross_term_rejected(self):
        v = TwoAtom(3, QRoot.sqrt(Fraction(1, 3)))
        with pytest.raises(NotRepresentableError):
            tail_two_atom_decomp(v, QRoot.sqrt(Fraction(2)))


class TestBruteForce:
    def test_equal_weight_oracle(self):
        assert brute_force_tail(EqualWeight(10), X_37_5) == Fraction(1, 1024)

    def test_two_atom_oracle(self):
        assert brute_force_tail(TwoAtom(10, T_5_37), X_37_5) == Fraction(11, 2048)

    def test_above_rightmost(self):
        assert brute_force_tail(EqualWeight(1), QRoot.of_rational(2)) == 0

    def test_coordinate_cutoff(self):
        with pytest.raises(ValueError):
            brute_force_tail(EqualWeight(25), QRoot.of_rational(1))
        with pytest.raises(ValueError):
            brute_force_tail(TwoAtom(24, T_5_37), QRoot.of_rational(1))


class TestOracleEquivalence:
    @pytest.mark.parametrize("n", range(1, 11))
    def test_equal_weight_on_lattice(self, n):
        for x in lattice_grid(n):
            assert tail_equal(n, x).exact == brute_force_tail(EqualWeight(n), x)

    @pytest.mark.parametrize("n", range(1, 10))
    @pytest.mark.parametrize("t2", [Fraction(1, 2), Fraction(5, 37)])
    def test_two_atom_on_lattice(self, n, t2):
        v = TwoAtom(n, QRoot.sqrt(t2))
        for x in lattice_grid(n):
            assert tail_two_atom(v, x).exact == brute_force_tail(v, x)


@st.composite
def thresholds(draw):
    square = Fraction(draw(st.integers(0, 300)), draw(st.integers(1, 30)))
    if square == 0:
        return QRoot(0, square)
    return QRoot(draw(st.sampled_from([-1, 1])), square)


class TestIdentities:
    @given(st.integers(1, 20), thresholds())
    @settings(max_examples=150)
    def test_symmetry(self, n, x):
        lhs = tail_equal(n, x).exact + tail_equal(n, -x).exact
        assert lhs == 1 + atom_mass_equal(n, x)

    @given(st.integers(1, 20), st.lists(thresholds(), min_size=2, max_size=6))
    @settings(max_examples=100)
    def test_monotone_in_threshold(self, n, xs):
        xs.sort(key=lambda q: (q.sign, q.sign * q.square))
        tails = [tail_equal(n, x).exact for x in xs]
        assert all(a >= b for a, b in zip(tails, tails[1:]))

    @given(st.integers(1, 24), thresholds())
    @settings(max_examples=150)
    def test_normalized(self, n, x):
        value = tail_equal(n, x).exact
        assert 0 <= value <= 1
        if qroot_cmp(x, QRoot(-1, Fraction(n))) == -1:
            assert value == 1
        if qroot_cmp(x, QRoot(1, Fraction(n))) == 1:
            assert value == 0

    def test_symmetry_at_an_exact_large_tie(self):
        # 37/sqrt(185) == sqrt(37/5): the tie mass C(185,74)/2^185 must be
        # counted on both sides of the symmetry identity
        n, x = 185, X_37_5
        mass = atom_mass_equal(n, x)
        assert mass == Fraction(math.comb(185, 74), 1 << 185)
        assert tail_equal(n, x).exact + tail_equal(n, -x).exact == 1 + mass

    @pytest.mark.parametrize("n", range(8, 25))
    def test_series_value_identity(self, n):
        square = Fraction(n) - 3 + Fraction(4, n)
        x = QRoot.sqrt(square)
        v = TwoAtom(n, x.reciprocal())
        assert tail_two_atom(v, x).exact == series_tail_value(n)

    @pytest.mark.parametrize("n,k", [(10, 8), (8, 6), (9, 7), (12, 5), (15, 9)])
    def test_split_identity_on_pinned_family(self, n, k):
        # x = sqrt(1 + k^2/n) and t = 1/x make x*t = 1, so both routes apply
        c = 1 + Fraction(k * k, n)
        x = QRoot.sqrt(c)
        v = TwoAtom(n, x.reciprocal())
        assert tail_two_atom(v, x).exact == tail_two_atom_decomp(v, x).exact


def test_series_tail_value_formula():
    assert series_tail_value(10) == Fraction(11, 2048)
    assert series_tail_value(8) == Fraction(9, 512)
    assert series_tail_value(1) == Fraction(1, 2)
    with pytest.raises(ValueError):
        series_tail_value(0)
