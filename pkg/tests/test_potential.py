"""Tests for rank, potentials, the annotation algebra and the log facts."""
import math
import random
from fractions import Fraction

import pytest

from src.models.annotation import Annotation, LogIndex, RankIndex, constant_index
from src.models.value import LEAF, node
from src.potential.algebra import add, add_constant, in_template, index_universe, scale, share
from src.potential.functions import log2p, potential_of, rank
from src.semantics.generator import gen_random_search_tree

TOLERANCE = 1e-9


def _make_splay_annotation():
    return Annotation(
        1,
        {
            RankIndex(1): Fraction(1),
            LogIndex((1,), 0): Fraction(3),
            LogIndex((0,), 2): Fraction(1),
        },
    )


def _make_random_annotation(arity, rng):
    annotation = Annotation(arity)
    for index in index_universe(arity):
        if rng.random() < 0.5:
            annotation[index] = Fraction(rng.randint(0, 6), rng.randint(1, 3))
    return annotation


class TestRankAndPotential:
    def test_leaf_rank(self):
        assert rank(LEAF) == 1.0

    def test_single_node(self):
        single = node(LEAF, 1, LEAF)

        assert rank(single) == 2.0
        assert potential_of(_make_splay_annotation(), [single]) == pytest.approx(6.0)

    def test_balanced_tree(self):
        balanced = node(node(LEAF, 1, LEAF), 2, node(LEAF, 3, LEAF))

        assert rank(balanced) == pytest.approx(6.0)
        assert potential_of(_make_splay_annotation(), [balanced]) == pytest.approx(13.0)

    def test_log_is_clamped_at_one(self):
        assert log2p(0) == 0.0
        assert log2p(1) == 0.0
        assert log2p(8) == 3.0

    def test_arity_mismatch_raises(self):
        with pytest.raises(ValueError):
            potential_of(_make_splay_annotation(), [LEAF, LEAF])

    def test_empty_annotation_has_no_potential(self):
        assert potential_of(Annotation(0), []) == 0.0


class TestAnnotation:
    @pytest.mark.parametrize(
        "arity,index",
        [(1, RankIndex(2)), (2, LogIndex((1,), 0)), (1, LogIndex((0,), 0))],
    )
    def test_bad_indices_raise(self, arity, index):
        with pytest.raises(ValueError):
            Annotation(arity, {index: Fraction(1)})

    def test_template_size(self):
        # ranks plus 2^m vectors times 3 constants, without log(0)
        assert len(index_universe(1)) == 1 + 2 * 3 - 1
        assert len(index_universe(2)) == 2 + 4 * 3 - 1
        assert index_universe(0) == [LogIndex((), 1), LogIndex((), 2)]

    def test_in_template(self):
        assert in_template(LogIndex((1, 1), 2))
        assert not in_template(LogIndex((2, 0), 0))


class TestAlgebra:
    def test_add_and_scale(self):
        q = _make_splay_annotation()

        doubled = add(q, q)

        assert doubled[RankIndex(1)] == 2
        assert scale(2, q) == doubled
        assert len(scale(0, q)) == 0

    def test_add_constant_only_touches_log_two(self):
        q = add_constant(_make_splay_annotation(), 1)

        assert q[constant_index(1)] == 2
        assert q[RankIndex(1)] == 1

    def test_add_constant_shifts_potential_by_the_amount(self):
        tree = gen_random_search_tree(12, seed=4)
        q = _make_splay_annotation()

        shifted = potential_of(add_constant(q, Fraction(5, 2)), [tree])

        assert shifted == pytest.approx(potential_of(q, [tree]) + 2.5)

    def test_share_merges_last_two_positions(self):
        q = Annotation(
            3,
            {
                RankIndex(2): Fraction(1),
                RankIndex(3): Fraction(2),
                LogIndex((0, 1, 1), 0): Fraction(1),
                LogIndex((1, 1, 0), 1): Fraction(4),
            },
        )

        shared = share(q)

        assert shared.arity == 2
        assert shared[RankIndex(2)] == 3
        assert shared[LogIndex((0, 2), 0)] == 1
        assert shared[LogIndex((1, 1), 1)] == 4

    def test_restricted_share_rejects_indices_outside_the_template(self):
        q = Annotation(2, {LogIndex((1, 1), 0): Fraction(1)})

        with pytest.raises(ValueError):
            share(q, restricted=True)

    def test_share_needs_two_trees(self):
        with pytest.raises(ValueError):
            share(_make_splay_annotation())

    def test_sharing_preserves_potential(self):
        rng = random.Random(2)
        for _ in range(1000):
            arity = rng.randint(2, 3)
            q = _make_random_annotation(arity, rng)
            trees = [gen_random_search_tree(rng.randint(1, 20), rng=rng) for _ in range(arity - 1)]
            duplicated = trees + [trees[-1]]

            before = potential_of(q, duplicated)
            after = potential_of(share(q), trees)

            assert abs(before - after) <= TOLERANCE * max(1.0, abs(before))


@pytest.mark.slow
class TestLogFacts:
    """The two facts the knowledge rows encode, checked on samples."""

    def test_concavity(self):
        rng = random.Random(11)
        for _ in range(10_000):
            x = rng.uniform(1, 1e6)
            y = rng.uniform(1, 1e6)

            assert 2 + math.log2(x) + math.log2(y) <= 2 * math.log2(x + y) + TOLERANCE

    def test_composition_with_a_shared_summand(self):
        rng = random.Random(12)
        checked = 0
        while checked < 10_000:
            count = rng.randint(1, 3)
            a = [rng.uniform(0.1, 100) for _ in range(count)]
            b = rng.uniform(0.1, 100)
            q = rng.uniform(0.1, 3)
            qs = [q + rng.uniform(0, 2) for _ in range(count)]
            if sum(qi * math.log2(ai) for qi, ai in zip(qs, a)) < q * math.log2(b):
                continue
            c = rng.uniform(1, 1000)

            left = sum(qi * math.log2(ai + c) for qi, ai in zip(qs, a))
            assert left >= q * math.log2(b + c) - TOLERANCE * max(1.0, abs(left))
            checked += 1
