import itertools

from hypothesis import given, strategies as st

from einfchar import linalg

rows = st.lists(st.integers(0, 2 ** 6 - 1), max_size=6)


def span(vectors):
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


@given(rows)
def test_rank_matches_span_size(vs):
    assert 2 ** linalg.rank(vs) == len(span(vs))


@given(rows)
def test_kernel_vectors_are_relations(vs):
    for mask in linalg.kernel(vs):
        acc = 0
        for i in linalg.bits_of(mask):
            acc ^= vs[i]
        assert mask and acc == 0
    assert len(linalg.kernel(vs)) == len(vs) - linalg.rank(vs)


@given(rows, st.integers(0, 2 ** 6 - 1))
def test_solve_agrees_with_span(vs, target):
    mask = linalg.solve(vs, target)
    if target in span(vs):
        acc = 0
        for i in linalg.bits_of(mask):
            acc ^= vs[i]
        assert acc == target
    else:
        assert mask is None


def test_transpose_is_involutive():
    m = [0b101, 0b011, 0b110]
    assert linalg.transpose(linalg.transpose(m, 3), 3) == m
    for r, c in itertools.product(range(3), range(3)):
        assert (m[r] >> c & 1) == (linalg.transpose(m, 3)[c] >> r & 1)
