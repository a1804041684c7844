"""Tests for KRik coordinates, the gamma calculus and the matchings of P_n."""

from collections import Counter, defaultdict
from math import comb

import pytest

from semimatch.orientation import (
    InvalidCoordinatesError,
    KRik,
    NotInPnError,
    Orientation,
    classify,
    cycle_size,
    dual_case,
    dual_match,
    enumerate_op,
    enumerate_or,
    enumerate_pn,
    enumerate_pn_rank,
    gamma,
    gamma_conj,
    gamma_left,
    gamma_right,
    h_class_of,
    half_dual_match,
    is_anticyclic,
    is_cyclic,
    is_in_pn,
    make_krik,
    mixed_match,
    naive_dual_extension,
    natural_match,
    op_factorize,
    other_half_dual_match,
    phi,
    phi_inv,
    rho,
)
from semimatch.transform import (
    Transformation,
    compose,
    full_transformation_monoid,
    identity,
    h_class_key,
    is_inverse_pair,
    n_cycle,
    power,
    rank,
)


def nondecreasing(seq):
    return all(u <= v for u, v in zip(seq, seq[1:]))


@pytest.fixture
def reversing_ten():
    """A rank-5 orientation-reversing map of degree 10."""
    return Transformation((3, 2, 2, 8, 8, 6, 6, 4, 3, 3))


@pytest.fixture
def reversing_eight():
    return phi(make_krik(8, [0, 2, 4, 6], [1, 3, 5, 7], 3, -1))


def shifted(points, d, n):
    return tuple(sorted((p + d) % n for p in points))


class TestClassification:
    """Cyclic sequences and orientation classes."""

    def test_cyclic_sequences(self):
        """Test cyclic and anti-cyclic detection."""
        assert is_cyclic([2, 3, 0, 1])
        assert not is_cyclic([0, 2, 1, 3])
        assert is_anticyclic([7, 7, 5, 5, 3, 3, 1, 1])

    def test_empty_sequence(self):
        """Test the empty sequence is rejected."""
        with pytest.raises(ValueError):
            is_cyclic([])

    def test_classify(self, reversing_ten):
        """Test the four orientation classes."""
        assert classify(Transformation((1, 2, 3, 0))) is Orientation.OP_ONLY
        assert classify(Transformation((1, 0, 3, 2))) is Orientation.OR_ONLY
        assert classify(Transformation((0, 2, 1, 3))) is Orientation.NEITHER
        assert classify(Transformation((0, 0, 1))) is Orientation.BOTH
        assert classify(reversing_ten) is Orientation.OR_ONLY

    def test_p3_is_t3(self):
        """Test every map of T_3 lies in P_3."""
        assert all(is_in_pn(a) for a in full_transformation_monoid(3))

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_enumeration_matches_classification(self, n):
        """Test the coordinate enumeration lists P_n once each."""
        listed = list(enumerate_pn(n))
        assert len(listed) == len(set(listed))
        assert set(listed) == {a for a in full_transformation_monoid(n) if is_in_pn(a)}

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_rank_counts(self, n):
        """Test a scan of T_n finds n, 2 C(n, 2)^2 and 2 t C(n, t)^2 maps of P_n by rank."""
        counts = Counter(rank(a) for a in full_transformation_monoid(n) if is_in_pn(a))
        expected = {1: n, 2: 2 * comb(n, 2) ** 2}
        expected.update({t: 2 * t * comb(n, t) ** 2 for t in range(3, n + 1)})
        assert counts == expected

    def test_op_and_or_halves(self):
        """Test OP_4 and OR_4 overlap exactly on the maps of rank <= 2."""
        op = set(enumerate_op(4))
        orr = set(enumerate_or(4))
        assert all(len(set(a.images)) <= 2 for a in op & orr)
        assert op | orr == set(enumerate_pn(4))


class TestCoordinates:
    """Encoding and decoding KRik coordinates."""

    def test_decode(self, reversing_ten):
        """Test the rank-5 reversing map decodes to its coordinates."""
        c = phi_inv(reversing_ten)
        assert (c.K, c.R, c.i, c.k) == ((1, 3, 5, 7, 8), (2, 3, 4, 6, 8), 0, -1)

    def test_encode(self):
        """Test encoding reproduces the known image lines."""
        assert phi(make_krik(8, [0, 2, 4, 6], [1, 3, 5, 7], 3, -1)).images == (
            7, 7, 5, 5, 3, 3, 1, 1,
        )
        assert phi(make_krik(10, [0, 2, 4, 7, 8, 9], [0, 1, 2, 5, 6, 7], 4, 1)).images == (
            6, 6, 7, 7, 0, 0, 0, 1, 2, 5,
        )

    def test_identity(self):
        """Test the identity has full coordinates with i = 0, k = 1."""
        c = phi_inv(identity(5))
        assert (c.K, c.R, c.i, c.k) == (tuple(range(5)), tuple(range(5)), 0, 1)

    @pytest.mark.parametrize("n", [4, 6])
    def test_round_trip(self, n):
        """Test phi inverts phi_inv on every element of rank >= 2."""
        for t in range(2, n + 1):
            for a in enumerate_pn_rank(n, t):
                assert phi(phi_inv(a)) == a

    def test_rank_two_parity(self):
        """Test the parity is normalised to +1 at rank 2."""
        c = KRik(n=4, K=(0, 2), R=(1, 3), i=3, k=-1)
        assert (c.i, c.k) == (1, 1)

    def test_invalid_coordinates(self):
        """Test malformed coordinates are rejected."""
        with pytest.raises(InvalidCoordinatesError):
            make_krik(4, [0, 1], [1, 2, 3], 0, 1)
        with pytest.raises(InvalidCoordinatesError):
            make_krik(4, [0, 1, 2], [1, 2, 3], 0, 2)
        with pytest.raises(InvalidCoordinatesError):
            make_krik(4, [0, 4], [1, 2], 0, 1)

    def test_not_in_pn(self):
        """Test decoding a map outside P_n raises."""
        with pytest.raises(NotInPnError):
            phi_inv(Transformation((0, 2, 1, 3)))

    def test_constant_has_no_coordinates(self):
        """Test decoding a constant raises."""
        with pytest.raises(InvalidCoordinatesError):
            phi_inv(Transformation((2, 2, 2)))

    def test_rho(self, reversing_eight):
        """Test rho of the natural inverse swaps kernel and range points."""
        assert rho(natural_match(reversing_eight)) == ((1, 3, 5, 7), (0, 2, 4, 6))
        assert rho(identity(3)) == ((0, 1, 2), (0, 1, 2))

    def test_h_class_sizes(self):
        """Test an H-class of rank t has t OP and t OR members."""
        a = phi(make_krik(6, [0, 2, 4], [1, 2, 5], 0, 1))
        members = h_class_of(a)
        assert len(members) == 6
        assert sum(1 for b in members if classify(b) is Orientation.OP_ONLY) == 3
        assert sum(1 for b in members if classify(b) is Orientation.OR_ONLY) == 3

    @pytest.mark.parametrize("n", [4, 5, 6])
    def test_every_h_class_size(self, n):
        """Test every H-class of P_n found by a scan of T_n has t OP-only and t OR-only maps."""
        tallies = defaultdict(Counter)
        members = {}
        for a in full_transformation_monoid(n):
            orientation = classify(a)
            if orientation is Orientation.NEITHER:
                continue
            tallies[h_class_key(a)][orientation] += 1
            members.setdefault(h_class_key(a), a)

        assert len(tallies) == n + sum(comb(n, t) ** 2 for t in range(2, n + 1))
        for key, tally in tallies.items():
            t = len(key[1])
            if t >= 3:
                assert tally == {Orientation.OP_ONLY: t, Orientation.OR_ONLY: t}
            else:
                assert tally == {Orientation.BOTH: t}
            assert len(h_class_of(members[key])) == sum(tally.values())


class TestGamma:
    """The reflection gamma acting on coordinates."""

    def test_gamma(self):
        """Test gamma_3 and its square."""
        assert gamma(3).images == (2, 1, 0)
        for n in range(1, 11):
            assert compose(gamma(n), gamma(n)) == identity(n)

    def test_conjugate_of_reversing_map(self, reversing_ten):
        """Test the conjugate coordinates agree with direct composition."""
        g = gamma(10)
        conj = gamma_conj(phi_inv(reversing_ten))
        assert (conj.K, conj.R, conj.i, conj.k) == ((2, 3, 5, 7, 9), (1, 3, 5, 6, 7), 2, -1)
        assert phi(conj).images == (6, 6, 5, 3, 3, 1, 1, 7, 7, 6)
        assert phi(conj) == compose(compose(g, reversing_ten), g)

    def test_right_gamma_range(self, reversing_ten):
        """Test a*gamma keeps K and reflects R."""
        c = gamma_right(phi_inv(reversing_ten))
        assert (c.K, c.R) == ((1, 3, 5, 7, 8), (1, 3, 5, 6, 7))

    @pytest.mark.parametrize("n", [4, 5])
    def test_formulas_against_composition(self, n):
        """Test all three gamma formulas on every element of rank >= 2."""
        g = gamma(n)
        for t in range(2, n + 1):
            for a in enumerate_pn_rank(n, t):
                c = phi_inv(a)
                assert phi(gamma_right(c)) == compose(a, g)
                assert phi(gamma_left(c)) == compose(g, a)
                assert phi(gamma_conj(c)) == compose(compose(g, a), g)


class TestMatchings:
    """Natural, dual, half-dual and mixed matchings."""

    def test_natural_examples(self, reversing_eight):
        """Test the natural inverse of the known maps."""
        assert natural_match(reversing_eight).images == (0, 6, 6, 4, 4, 2, 2, 0)
        preserving = phi(make_krik(10, [0, 2, 4, 7, 8, 9], [0, 1, 2, 5, 6, 7], 4, 1))
        image = natural_match(preserving)
        assert image.images == (4, 7, 8, 8, 8, 9, 0, 2, 2, 2)
        assert phi_inv(image).i == 2

    def test_natural_small(self):
        """Test the natural inverse of an idempotent of T_3 leaves its subgroup."""
        assert natural_match(Transformation((1, 1, 2))).images == (2, 0, 2)

    def test_natural_fixes_constants(self):
        """Test constants are their own natural inverse."""
        assert natural_match(Transformation((1, 1, 1))) == Transformation((1, 1, 1))

    def test_natural_rejects_non_pn(self):
        """Test maps outside P_n raise."""
        with pytest.raises(NotInPnError):
            natural_match(Transformation((0, 2, 1, 3)))

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_natural_laws(self, n):
        """Test involution, inverse and coordinate laws of the natural matching."""
        for a in enumerate_pn(n):
            b = natural_match(a)
            assert natural_match(b) == a
            assert is_inverse_pair(a, b)
            if len(set(a.images)) >= 2:
                c, d = phi_inv(a), phi_inv(b)
                assert (d.K, d.R, d.k) == (c.R, c.K, c.k)

    def test_alternating_idempotent(self):
        """Test the natural inverse of the alternating idempotent is a full cycle."""
        a = Transformation((1, 1, 3, 3, 5, 5, 7, 7))
        assert cycle_size(a) == 1
        assert cycle_size(natural_match(a)) == 4

    def test_dual_examples(self):
        """Test the dual inverse of the known maps."""
        idempotent = phi(make_krik(8, [0, 2, 4, 6], [1, 3, 5, 7], 0, 1))
        assert dual_match(idempotent) == idempotent
        case_one = phi(make_krik(10, [1, 3, 5, 7, 8], [2, 3, 4, 6, 8], 4, -1))
        assert dual_case(phi_inv(case_one)) == 1
        assert dual_match(case_one).images == (0, 0, 0, 7, 6, 4, 4, 2, 2, 0)
        case_two = phi(make_krik(10, [1, 2, 5, 7, 8, 9], [0, 4, 5, 6, 7, 9], 4, 1))
        image = dual_match(case_two)
        assert image.images == (6, 7, 7, 7, 7, 8, 0, 1, 4, 4)
        assert (dual_case(phi_inv(case_two)), dual_case(phi_inv(image))) == (2, 3)

    def test_dual_differs_from_natural(self, reversing_eight):
        """Test the dual and natural matchings disagree on P_8."""
        assert dual_match(reversing_eight) == reversing_eight
        assert natural_match(reversing_eight) != reversing_eight

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_dual_laws(self, n):
        """Test involution, inverse and case laws of the dual matching."""
        pairs = {1: 1, 2: 3, 3: 2, 4: 4}
        for a in enumerate_pn(n):
            b = dual_match(a)
            assert dual_match(b) == a
            assert is_inverse_pair(a, b)
            if len(set(a.images)) >= 2:
                c, d = phi_inv(a), phi_inv(b)
                assert (d.K, d.R) == (shifted(c.R, 1, n), shifted(c.K, -1, n))
                assert dual_case(d) == pairs[dual_case(c)]

    @pytest.mark.parametrize("n", [4, 5])
    def test_half_dual_is_permutation_not_involution(self, n):
        """Test the half dual is a bijection of P_n onto itself but not an involution."""
        elements = list(enumerate_pn(n))
        images = [half_dual_match(a) for a in elements]
        assert len(set(images)) == len(elements)
        assert all(is_inverse_pair(a, b) for a, b in zip(elements, images))
        assert any(half_dual_match(b) != a for a, b in zip(elements, images))

    def test_half_dual_drift(self, reversing_ten):
        """Test applying the half dual twice moves both sets down by one."""
        c = phi_inv(reversing_ten)
        twice = half_dual_match(half_dual_match(reversing_ten))
        assert rho(twice) == (shifted(c.K, -1, 10), shifted(c.R, -1, 10))

    def test_other_half_dual(self, reversing_ten):
        """Test the second half dual is an inverse in H-class (R+1, K)."""
        c = phi_inv(reversing_ten)
        b = other_half_dual_match(reversing_ten)
        assert is_inverse_pair(reversing_ten, b)
        assert rho(b) == (shifted(c.R, 1, 10), c.K)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_mixed_is_involution(self, n):
        """Test the mixed matching is an involution matching of P_n."""
        for a in enumerate_pn(n):
            b = mixed_match(a)
            assert mixed_match(b) == a
            assert is_inverse_pair(a, b)

    def test_naive_extension_drifts(self, reversing_ten):
        """Test the gamma-twisted natural extension is not an involution."""
        c = phi_inv(reversing_ten)
        twice = naive_dual_extension(naive_dual_extension(reversing_ten))
        assert twice != reversing_ten
        assert rho(twice) == (shifted(c.K, 1, 10), shifted(c.R, 1, 10))


class TestFactorisation:
    """OP maps as powers of the n-cycle times an order-preserving map."""

    def test_op_factorize(self):
        """Test the factors recombine to the map."""
        a = Transformation((2, 3, 3, 0))
        r, f = op_factorize(a)
        assert all(u <= v for u, v in zip(f.images, f.images[1:]))
        rebuilt = Transformation(tuple(f.images[(x + r) % 4] for x in range(4)))
        assert rebuilt == a

    def test_op_factorize_rejects(self):
        """Test constants and reversing maps have no factorisation."""
        with pytest.raises(ValueError):
            op_factorize(Transformation((1, 1, 1)))
        with pytest.raises(NotInPnError):
            op_factorize(Transformation((3, 2, 1, 0)))

    def test_op_factorize_all_of_op5(self):
        """Test every non-constant OP map of degree 5 has exactly one factorisation."""
        g = n_cycle(5)
        maps = [
            a
            for a in full_transformation_monoid(5)
            if classify(a) in (Orientation.OP_ONLY, Orientation.BOTH) and rank(a) >= 2
        ]
        assert len(maps) == sum(1 for a in enumerate_op(5) if rank(a) >= 2)
        for a in maps:
            r, f = op_factorize(a)
            assert nondecreasing(f.images)
            assert compose(power(g, r), f) == a
            shifts = [
                s for s in range(5) if nondecreasing(compose(power(g, (5 - s) % 5), a).images)
            ]
            assert shifts == [r]

    def test_cycle_size_of_cycle(self):
        """Test the n-cycle has a single cycle of length n."""
        assert cycle_size(n_cycle(6)) == 6
