"""Tests for transformations, digraph parameters and inverses."""

import pytest

from semimatch.transform import (
    INFINITE,
    DegreeMismatchError,
    InvalidTransformationError,
    Transformation,
    compose,
    constant_map,
    digraph_profile,
    fixed_points,
    full_transformation_monoid,
    grasp,
    h_class_key,
    height,
    identity,
    inverses_of,
    inverses_of_brute,
    is_group_element,
    is_idempotent,
    is_inverse_pair,
    kernel_partition,
    make_transformation,
    max_depth_preimages,
    n_cycle,
    parse_transformation_json,
    power,
    range_of,
    rank,
    to_one_indexed,
)


@pytest.fixture
def alpha_1():
    """The first T_8 witness map, 0-indexed."""
    return Transformation((1, 2, 3, 4, 4, 2, 7, 3))


@pytest.fixture
def beta_1():
    """Its strong inverse, 0-indexed."""
    return Transformation((4, 0, 1, 2, 4, 0, 0, 6))


class TestConstruction:
    """Validation of image lists."""

    def test_make_transformation(self):
        """Test a valid image list is wrapped unchanged."""
        a = make_transformation(3, [1, 1, 2])
        assert a.images == (1, 1, 2)
        assert a.n == 3
        assert a(0) == 1

    def test_wrong_length(self):
        """Test a short image list is rejected."""
        with pytest.raises(InvalidTransformationError):
            make_transformation(3, [0, 1])

    def test_out_of_range_names_index(self):
        """Test the offending index is reported."""
        with pytest.raises(InvalidTransformationError) as exc_info:
            make_transformation(3, [0, 3, 1])
        assert exc_info.value.index == 1

    def test_non_integer(self):
        """Test booleans and floats are not images."""
        with pytest.raises(InvalidTransformationError):
            make_transformation(2, [True, 0])
        with pytest.raises(InvalidTransformationError):
            make_transformation(2, [0.0, 1])

    def test_zero_degree(self):
        """Test degree 0 is rejected."""
        with pytest.raises(InvalidTransformationError):
            make_transformation(0, [])

    def test_parse_json_list(self):
        """Test parsing a plain JSON list."""
        assert parse_transformation_json("[1, 1, 2]").images == (1, 1, 2)

    def test_parse_json_one_indexed(self):
        """Test 1-indexed input is shifted down."""
        assert parse_transformation_json("[2, 2, 3]", one_indexed=True).images == (1, 1, 2)
        assert parse_transformation_json('{"images": [2, 2, 3], "one_indexed": true}').images == (
            1,
            1,
            2,
        )

    def test_parse_bad_json(self):
        """Test malformed JSON raises the validation error."""
        with pytest.raises(InvalidTransformationError):
            parse_transformation_json("[1, 2")
        with pytest.raises(InvalidTransformationError):
            parse_transformation_json('{"maps": []}')

    def test_to_one_indexed(self):
        """Test the display form adds one to every image."""
        assert to_one_indexed(Transformation((0, 2, 1))) == [1, 3, 2]

    def test_str_is_compact_json(self):
        """Test the string form is a compact image list."""
        assert str(Transformation((0, 2, 1))) == "[0,2,1]"


class TestComposition:
    """Products and basic queries."""

    def test_compose_left_to_right(self):
        """Test compose applies the left factor first."""
        a = Transformation((1, 1, 2))
        b = Transformation((2, 0, 2))
        assert compose(a, b).images == (0, 0, 2)
        assert (a * b) == compose(a, b)

    def test_compose_associative(self):
        """Test associativity on a sample of T_3."""
        maps = list(full_transformation_monoid(3))[::5]
        for a in maps:
            for b in maps:
                for c in maps:
                    assert compose(compose(a, b), c) == compose(a, compose(b, c))

    def test_degree_mismatch(self):
        """Test composing maps of different degree raises."""
        with pytest.raises(DegreeMismatchError):
            compose(identity(2), identity(3))

    def test_identity_and_constants(self):
        """Test identity and constant maps."""
        a = Transformation((2, 0, 1))
        assert compose(identity(3), a) == a
        assert compose(a, identity(3)) == a
        assert constant_map(3, 1).images == (1, 1, 1)

    def test_powers_of_cycle(self):
        """Test the n-cycle has order n."""
        c = n_cycle(5)
        assert power(c, 5) == identity(5)
        assert power(c, 2).images == (2, 3, 4, 0, 1)

    def test_negative_power(self):
        """Test negative powers raise."""
        with pytest.raises(ValueError):
            power(identity(2), -1)

    def test_rank_range_kernel(self):
        """Test rank, range and kernel of a rank-2 map."""
        a = Transformation((3, 2, 2, 3))
        assert rank(a) == 2
        assert range_of(a) == (2, 3)
        assert kernel_partition(a) == [(0, 3), (1, 2)]
        assert h_class_key(a) == (((0, 3), (1, 2)), (2, 3))

    def test_idempotents_and_fixed_points(self):
        """Test idempotency and fixed points."""
        e = Transformation((1, 1, 3, 3))
        assert is_idempotent(e)
        assert fixed_points(e) == (1, 3)
        assert not is_idempotent(Transformation((1, 0, 2)))

    def test_group_elements(self):
        """Test Xa = Xa^2 detects group elements."""
        assert is_group_element(Transformation((1, 1, 2)))
        assert not is_group_element(Transformation((2, 0, 2)))

    def test_monoid_size_and_order(self):
        """Test T_n has n^n elements in lexicographic order."""
        maps = list(full_transformation_monoid(3))
        assert len(maps) == 27
        assert maps == sorted(maps)
        assert maps[0] == constant_map(3, 0)


class TestDigraph:
    """Depth, height and grasp."""

    def test_depth_zero_points(self, alpha_1):
        """Test the points outside the image have depth zero."""
        profile = digraph_profile(alpha_1)
        assert [x for x in range(8) if profile.depth[x] == 0] == [0, 5, 6]

    def test_height_of_point(self, alpha_1):
        """Test the height of point 5 is one."""
        assert height(alpha_1, 5) == 1

    def test_stable_range_is_infinite(self, alpha_1):
        """Test height and depth are infinite on the fixed point 4."""
        profile = digraph_profile(alpha_1)
        assert profile.stable_range == (4,)
        assert profile.depth[4] == INFINITE
        assert height(alpha_1, 4) == INFINITE

    def test_cycle_lengths(self):
        """Test cycle lengths of a map with a 2-cycle and a fixed point."""
        profile = digraph_profile(Transformation((1, 0, 2, 2)))
        assert profile.cycle_lengths == (1, 2)

    def test_grasp(self, alpha_1, beta_1):
        """Test grasp of the witness pair at points 0 and 6."""
        assert grasp(alpha_1, beta_1, 0) == 3
        assert grasp(alpha_1, beta_1, 6) == 1

    def test_max_depth_preimages(self, alpha_1):
        """Test the deepest preimages of each range point."""
        deepest = max_depth_preimages(alpha_1)
        assert deepest[2] == (1,)
        assert deepest[7] == (6,)
        assert set(deepest) == set(range_of(alpha_1))


class TestInverses:
    """V(a) from transversals against brute force."""

    def test_inverse_pair(self):
        """Test the natural pair in T_3 are mutual inverses."""
        assert is_inverse_pair(Transformation((1, 1, 2)), Transformation((2, 0, 2)))

    @pytest.mark.parametrize("n", [2, 3])
    def test_inverses_match_brute_force(self, n):
        """Test the structural enumeration equals the scan of T_n."""
        for a in full_transformation_monoid(n):
            assert inverses_of(a) == inverses_of_brute(a)

    def test_inverse_count_in_t3(self):
        """Test |V(a)| for a rank-2 map of T_3."""
        a = Transformation((1, 1, 2))
        assert len(inverses_of(a)) == len(inverses_of_brute(a)) == 4

    def test_every_inverse_is_inverse(self, alpha_1):
        """Test every generated inverse satisfies both laws."""
        found = inverses_of(alpha_1)
        assert found
        assert all(is_inverse_pair(alpha_1, b) for b in found)
