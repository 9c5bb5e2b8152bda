
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from golden import BINOMIALS, CYCLE_PAIR
from p1stats.errors import EmptyMoveError, InvalidArgument, InvalidVariant
from p1stats.model import (DyadConfig, Network, all_statistics, build_design_matrix, n_dyads,
                           parse_network, sufficient_statistic)
from p1stats.moves import (CompiledMoves, CycleSpec, MarkovMove, apply, cycle_move, edge_coord,
                           enumerate_cycles, enumerate_walks, generate_move_set, lift_move,
                           moves_from_json, moves_hash, moves_to_json, moves_to_lattice, overlap,
                           q_generators, realizations, t_generators, walk_moves)


def mv(name):
    n, text = BINOMIALS[name]
    return MarkovMove.from_binomial(n, text)


def canon(moves):
    return {m.canonical() for m in moves}


# cycles of G_n

def _bruteforce_cycles(n, max_len):
    """Edge sets of simple cycles of G_n (alpha_i -- beta_j, i != j) by DFS over vertex paths."""
    adj = {("a", i): [("b", j) for j in range(n) if j != i] for i in range(n)}
    adj.update({("b", j): [("a", i) for i in range(n) if i != j] for j in range(n)})
    found = set()

    def dfs(path):
        u = path[-1]
        for v in adj[u]:
            if v == path[0] and len(path) >= 4:
                edges = frozenset(frozenset((path[k], path[(k + 1) % len(path)]))
                                  for k in range(len(path)))
                found.add(edges)
            elif v not in path and len(path) < max_len:
                dfs(path + [v])

    for s in adj:
        dfs([s])
    return found


def _cycle_edges(c):
    vs = []
    for a, b in zip(c.alphas, c.betas):
        vs += [("a", a), ("b", b)]
    return frozenset(frozenset((vs[m], vs[(m + 1) % len(vs)])) for m in range(len(vs)))


def test_cycle_examples():
    assert enumerate_cycles(2) == []
    cs = enumerate_cycles(3, 6)
    assert len(cs) == 1 and cs[0].length == 6


@pytest.mark.parametrize("n", [3, 4, 5])
def test_cycles_match_bruteforce(n):
    L = 2 * n if n <= 4 else 8
    ours = [_cycle_edges(c) for c in enumerate_cycles(n, L)]
    assert len(ours) == len(set(ours))
    assert set(ours) == _bruteforce_cycles(n, L)


def test_cycle_counts_by_length():
    def counts(n):
        cs = enumerate_cycles(n)
        return [sum(c.length == L for c in cs) for L in range(4, 2 * n + 1, 2)]
    assert counts(4) == [6, 16, 6]
    assert counts(5) == [30, 130, 270, 156]
    # 4-cycles are exactly the head-swap quadrics: one per 2 tails x 2 heads choice
    four = [cycle_move(c) for c in enumerate_cycles(4, 4)]
    assert all(m.degree == 2 for m in four)


@pytest.mark.parametrize("n", [4, 5])
def test_cycle_recursion(n):
    # each cycle avoids some node entirely, or meets alpha_i or beta_i for every i
    everything = {_cycle_edges(c) for c in enumerate_cycles(n)}
    lifted = set()
    for drop in range(n):
        keep = [i for i in range(n) if i != drop]
        for c in enumerate_cycles(n - 1):
            lifted.add(_cycle_edges(CycleSpec(n, tuple(keep[a] for a in c.alphas),
                                             tuple(keep[b] for b in c.betas))))
    spanning = {_cycle_edges(c) for c in enumerate_cycles(n) if len(c.nodes()) == n}
    assert everything == lifted | spanning


def test_cycle_spec_validation():
    with pytest.raises(InvalidArgument):
        CycleSpec(3, (0, 1), (0, 2))        # alpha_1 -- beta_1 is not an edge
    with pytest.raises(InvalidArgument):
        CycleSpec(3, (0,), (1,))


def test_cycle_moves_match_printed():
    six = cycle_move(enumerate_cycles(3, 6)[0])
    assert six.canonical() == mv("zero3_cubic").canonical()
    # the 10-vertex cycle a1 b4 a2 b3 a5 b1 a4 b2 a3 b5
    c = CycleSpec(5, (0, 1, 4, 3, 2), (3, 2, 0, 1, 4))
    assert cycle_move(c).canonical() == mv("a5_quintic").canonical()
    # a 4-cycle is a head swap p_ik(1,0) p_jl(1,0) - p_il(1,0) p_jk(1,0)
    q = cycle_move(CycleSpec(4, (0, 1), (2, 3)))
    i, j, k, l = 0, 1, 2, 3
    expect = {edge_coord(4, i, k): 1, edge_coord(4, j, l): 1,
              edge_coord(4, i, l): -1, edge_coord(4, j, k): -1}
    assert canon([q]) == canon([MarkovMove.from_dict(4, expect)])


def test_cycle_moves_are_squarefree_and_in_common_kernel():
    from p1stats.model import common_submatrix
    for n in (3, 4, 5):
        B = common_submatrix(n).entries
        for c in enumerate_cycles(n, 8):
            m = cycle_move(c)
            assert {v for _, v in m.delta} <= {-1, 1}
            x = np.zeros(B.shape[1], dtype=int)
            for (d, cfg), v in m.delta:
                x[2 * d + (0 if cfg is DyadConfig.OUT else 1)] = v
            assert not (B @ x).any()


# T and Q generators, walks

def test_t_generators():
    (t,) = t_generators(2)
    printed = MarkovMove.from_binomial(2, "p12(1,0)p12(0,1) - p12(1,1)p12(0,0)")
    assert t.canonical() == printed.canonical()
    for n in range(2, 7):
        A = build_design_matrix(n, "zero")
        assert all(g.in_kernel(A) for g in t_generators(n))
    with pytest.raises(InvalidVariant):
        t_generators(3, "constant")
    with pytest.raises(InvalidVariant):
        t_generators(3, "edge")
    for x in (Network.from_code(2, c) for c in range(4)):
        assert apply(x, t, 1) is None and apply(x, t, -1) is None


def test_q_generators():
    assert q_generators(3) == []
    Q = q_generators(4)
    assert len(Q) == 3
    printed = MarkovMove.from_binomial(4, "p12(1,1)p34(1,1) - p13(1,1)p24(1,1)")
    assert printed.canonical() in canon(Q)
    for n in (4, 5, 6):
        for v in ("constant", "edge"):
            S = build_design_matrix(n, v, "simplified")
            assert all(q.in_kernel(S) for q in q_generators(n))
        Z = build_design_matrix(n, "zero")
        assert not any(q.in_kernel(Z) for q in q_generators(n))
        assert all(lift_move(q).in_kernel(Z) for q in q_generators(n))


def test_walk_moves():
    assert canon(walk_moves(4, 4)) == canon(q_generators(4))
    for m in walk_moves(5, 6):
        assert m.in_kernel(build_design_matrix(5, "edge", "simplified"))
    kinds = {w.kind for w in enumerate_walks(5, 6)}
    assert kinds == {"even-cycle", "odd-cycles-vertex"}
    bowtie = [w for w in enumerate_walks(5, 6) if w.kind == "odd-cycles-vertex"]
    assert bowtie and all(len(w.edges) == 6 for w in bowtie)
    assert all(len(w.edges) % 2 == 0 for w in enumerate_walks(6, 8))
    assert any(w.kind == "odd-cycles-path" for w in enumerate_walks(6, 8))


def test_walk_bowtie_is_degree_three():
    E = build_design_matrix(5, "edge", "simplified")
    w = [w for w in enumerate_walks(5, 6) if w.kind == "odd-cycles-vertex"][0]
    from p1stats.moves import walk_move
    m = walk_move(w)
    assert m.degree == 3 and m.in_kernel(E)


# lifting and overlap

def test_lift_head_swap_to_printed_quartic():
    swap = MarkovMove.from_binomial(4, "p14(0,1)p23(0,1) - p13(0,1)p24(0,1)")
    assert lift_move(swap).canonical() == mv("edge4_deg4").canonical()


def test_lift_printed_quintic():
    raw = MarkovMove.from_binomial(4, "p14(0,1)p12(1,0)p23(1,0) - p13(1,0)p24(0,1)p12(0,1)")
    assert lift_move(raw).canonical() == mv("edge4_deg5").canonical()


def test_lift_balanced_move_unchanged():
    c = mv("zero3_cubic")
    assert lift_move(c).canonical() == c.canonical()
    with pytest.raises(InvalidArgument):
        lift_move(c, "other")


def test_lift_mutual_padding():
    swap = MarkovMove.from_binomial(4, "p14(0,1)p23(0,1) - p13(0,1)p24(0,1)")
    m = lift_move(swap, "mutual")
    assert m.is_multihomogeneous()
    assert all(c in (DyadConfig.IN, DyadConfig.MUTUAL) for (_, c), _ in m.delta)


def test_overlap_examples():
    f = MarkovMove.from_binomial(4, "p12(1,0)p13(0,1)p23(1,0) - p12(0,1)p13(1,0)p23(0,1)")
    g = MarkovMove.from_binomial(4, "p14(0,1)p23(0,1) - p13(0,1)p24(0,1)")
    # printed quartics are unbalanced on some dyads; compare lifted forms
    assert overlap(f, g, "zero").canonical() == lift_move(mv("worked_quartic")).canonical()
    cyc = MarkovMove.from_binomial(4, "p12(0,1)p13(1,0)p23(0,1) - p12(1,0)p13(0,1)p23(1,0)")
    swap = MarkovMove.from_binomial(4, "p13(1,0)p24(1,0) - p14(1,0)p23(1,0)")
    assert overlap(-cyc, swap, "zero").canonical() == lift_move(mv("overlap_quartic")).canonical()
    with pytest.raises(EmptyMoveError):
        overlap(f, -f, "zero")
    # without the Zero rewrite no mutual dyad can appear
    m = overlap(f, g, "constant")
    assert all(c is not DyadConfig.MUTUAL for (_, c), _ in m.delta)


# move sets

def test_small_move_sets():
    (e,) = generate_move_set(3, "edge", 1)
    assert e.canonical() == mv("edge3_cubic").canonical() == mv("zero3_cubic").canonical()
    (c,) = generate_move_set(3, "constant", 1)
    assert c.canonical() == e.canonical()
    assert canon(generate_move_set(3, "zero", 2)) == {e.canonical()}
    with pytest.raises(InvalidArgument):
        generate_move_set(2, "zero")
    with pytest.raises(InvalidArgument):
        generate_move_set(3, "zero", 0)


@pytest.mark.parametrize("variant", ["zero", "constant", "edge"])
def test_move_sets_in_kernel_n4(variant):
    A = build_design_matrix(4, variant)
    S = generate_move_set(4, variant, 2)
    assert len(S) == len(canon(S))
    for m in S:
        assert not (A.entries @ m.dense()).any()
        assert m.is_multihomogeneous() and m.is_applicable_shape()
    assert canon(generate_move_set(4, variant, 1)) <= canon(S)


def test_move_set_sizes():
    sizes = {v: [len(generate_move_set(4, v, d)) for d in (1, 2)]
             for v in ("zero", "constant", "edge")}
    assert sizes == {"zero": [391, 394], "constant": [151, 154], "edge": [55, 58]}


@pytest.mark.parametrize("name,variants", [
    ("zero3_cubic", {"zero", "constant", "edge"}),
    ("edge3_cubic", {"zero", "constant", "edge"}),
    ("edge4_deg4", {"zero", "constant", "edge"}),
    ("edge4_deg5", {"zero", "constant", "edge"}),
    ("overlap_quartic", {"zero", "constant"}),
    ("worked_quartic", {"zero", "constant"}),
    ("zero4_quartic_a", {"zero", "constant", "edge"}),
    ("zero4_quartic_b", {"zero"}),
    ("zero4_quartic_c", {"zero"}),
    ("zero4_quartic_d", {"zero", "constant"}),
    ("zero4_quintic_a", {"zero", "constant"}),
    ("zero4_quintic_b", {"zero", "constant"}),
    ("constant4_sextic", {"zero", "constant"}),
])
def test_printed_generators_membership(name, variants):
    n, _ = BINOMIALS[name]
    m = mv(name)
    if not m.is_multihomogeneous():
        m = lift_move(m)
    kernel = {v for v in ("zero", "constant", "edge") if m.in_kernel(build_design_matrix(n, v))}
    assert kernel == variants
    for v in variants:
        assert m.canonical() in canon(generate_move_set(n, v, 2))


def test_realizations():
    swap = MarkovMove.from_binomial(4, "p13(1,0)p24(1,0) - p14(1,0)p23(1,0)")
    rs = realizations(swap)
    assert len(rs) == 16
    Z = build_design_matrix(4, "zero")
    E = build_design_matrix(4, "edge")
    assert len(realizations(swap, Z)) == 16
    assert 0 < len(realizations(swap, E)) < 16


# application

def test_apply_examples():
    x, y = (parse_network(s) for s in CYCLE_PAIR)
    c = mv("zero3_cubic")
    assert {apply(x, c, 1), apply(x, c, -1)} - {None} == {y}
    assert apply(Network.empty(3), c, 1) is None and apply(Network.empty(3), c, -1) is None
    with pytest.raises(InvalidArgument):
        apply(Network.empty(4), c)
    with pytest.raises(InvalidArgument):
        apply(x, c, 2)


@pytest.mark.parametrize("n,variant", [(3, "zero"), (3, "constant"), (3, "edge"),
                                       (4, "zero"), (4, "constant"), (4, "edge")])
def test_apply_preserves_statistic_exhaustively(n, variant):
    A = build_design_matrix(n, variant)
    S = generate_move_set(n, variant, 2)
    T = all_statistics(A)
    cm = CompiledMoves.build(n, S)
    codes = np.arange(4 ** n_dyads(n), dtype=np.int64)
    for k in range(len(S)):
        for sgn, src, dst in ((1, cm.frm[k], cm.to[k]), (-1, cm.to[k], cm.frm[k])):
            ok = (codes & cm.masks[k]) == src
            new = (codes[ok] & ~cm.masks[k]) | dst
            assert np.array_equal(T[codes[ok]], T[new])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 4095), st.integers(0, 393), st.sampled_from([1, -1]))
def test_apply_matches_compiled_step_and_is_involutive(code, k, sgn):
    S = _zero4()
    cm = _zero4_compiled()
    x = Network.from_code(4, code)
    y = apply(x, S[k], sgn)
    step = cm.step(code, k, sgn)
    assert (y is None and step is None) or y.code == step
    if y is not None:
        assert apply(y, S[k], -sgn) == x
        A = build_design_matrix(4, "zero")
        assert sufficient_statistic(A, x) == sufficient_statistic(A, y)


_CACHE = {}


def _zero4():
    if "S" not in _CACHE:
        _CACHE["S"] = generate_move_set(4, "zero", 2)
    return _CACHE["S"]


def _zero4_compiled():
    if "cm" not in _CACHE:
        _CACHE["cm"] = CompiledMoves.build(4, _zero4())
    return _CACHE["cm"]


# serialization

def test_serialization_round_trips():
    S = generate_move_set(4, "constant", 2)
    for m in S[:50]:
        assert MarkovMove.from_line(4, m.to_line()).canonical() == m.canonical()
        assert MarkovMove.from_binomial(4, m.binomial()).canonical() == m.canonical()
    back = moves_from_json(moves_to_json(S))
    assert [m.delta for m in back] == [m.delta for m in S]
    assert [m.provenance for m in back] == [m.provenance for m in S]
    lines = moves_to_lattice(S).splitlines()
    assert lines[0] == f"{len(S)} 24"
    assert moves_hash(S) == moves_hash(back)
    with pytest.raises(InvalidArgument):
        MarkovMove.from_line(4, "3 +1 1-2:10")


def test_canonical_sign():
    m = mv("zero3_cubic")
    assert m.canonical() == (-m).canonical()
    assert m.canonical_move().delta[0][1] < 0
