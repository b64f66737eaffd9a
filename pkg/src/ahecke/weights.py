"""Characters t in Hom(L, C^x) and the combinatorics attached to them.

Local factors for a positive root alpha (with u = t^{-alpha_vee}):

    d_alpha(t) = 1 - u
    a_alpha(t) = 1 - q_alpha^{-1}                                (one-parameter)
               = 1 - q_n^{-1} + (q_0^{1/2} - q_0^{-1/2}) q_n^{-1/2} v   (two-parameter)
    n_alpha(t) = 1 - q_alpha^{-1} u                              (one-parameter)
               = (1 - q_0^{-1/2} q_n^{-1/2} v)(1 + q_0^{1/2} q_n^{-1/2} v)  (two-parameter)
    b_alpha = a_alpha / d_alpha,  c_alpha = n_alpha / d_alpha,

where v = t^{-alpha_vee/2} in the two-parameter (non-reduced) case.  The
products c(t), n(t), d(t) run over the reduced positive roots (classes R1
and R2); the doubled roots of a BC system carry no factor of their own.

On top of the factors sit the zero sets N(t) and D(t) of the Macdonald
c-function, the sets F_J(t), the calibration graph, regularity,
calibratability of a weight for a pair of simple roots, and Kato's
irreducibility criterion for the principal series.
"""

from __future__ import annotations

from .hecke_core import Params
from .root_data import Character, RootDatum, WeylElement, inversion_set, weyl_act_char

__all__ = [
    "EPS_ZERO",
    "JNotSubsetOfN",
    "PoleAtCharacter",
    "c_product",
    "calibration_components",
    "d_product",
    "d_set",
    "f_j_set",
    "is_calibratable",
    "is_regular",
    "kato_irreducible",
    "local_factor",
    "n_product",
    "n_set",
    "reduced_positive_indices",
]

EPS_ZERO = 1e-9


class PoleAtCharacter(ZeroDivisionError):
    """b_alpha or c_alpha requested at a character with d_alpha(t) = 0."""


class JNotSubsetOfN(ValueError):
    """F_J(t) requested for a set J not contained in N(t)."""


def reduced_positive_indices(datum: RootDatum) -> tuple:
    """Indices of the reduced positive roots (classes R1 and R2)."""
    return tuple(
        j for j, r in enumerate(datum.positive_roots) if r.cls in ("R1", "R2")
    )


def _near_zero(value, scale) -> bool:
    return abs(value) <= EPS_ZERO * max(scale, 1.0)


def _d_factor(datum, t, j):
    u = t.value(tuple(-c for c in datum.positive_roots[j].coroot))
    return 1 - u, 1 + abs(u)


def _a_factor(datum, params: Params, t, j):
    root = datum.positive_roots[j]
    q = params.q[root.param]
    if root.cls == "R1":
        return 1 - 1 / q, 1.0
    sq0, sqn = params.sqrt_q[0], params.sqrt_q[root.param]
    v = t.value(tuple(-c for c in root.half_coroot))
    return 1 - 1 / q + (sq0 / sqn - 1 / (sq0 * sqn)) * v, 1 + abs(v)


def _n_factor(datum, params: Params, t, j):
    root = datum.positive_roots[j]
    q = params.q[root.param]
    if root.cls == "R1":
        u = t.value(tuple(-c for c in root.coroot))
        return 1 - u / q, 1 + abs(u)
    sq0, sqn = params.sqrt_q[0], params.sqrt_q[root.param]
    v = t.value(tuple(-c for c in root.half_coroot))
    return (1 - v / (sq0 * sqn)) * (1 + sq0 * v / sqn), (1 + abs(v)) ** 2


def local_factor(datum: RootDatum, params: Params, kind: str, root_index: int, t: Character):
    """Evaluate a_alpha, b_alpha, c_alpha, d_alpha or n_alpha at t."""
    if kind == "d":
        return _d_factor(datum, t, root_index)[0]
    if kind == "a":
        return _a_factor(datum, params, t, root_index)[0]
    if kind == "n":
        return _n_factor(datum, params, t, root_index)[0]
    if kind in ("b", "c"):
        d, scale = _d_factor(datum, t, root_index)
        if _near_zero(d, scale):
            raise PoleAtCharacter(
                f"d_alpha(t) = 0 for root {root_index}; {kind}_alpha undefined"
            )
        num = local_factor(datum, params, "a" if kind == "b" else "n", root_index, t)
        return num / d
    raise ValueError(f"unknown local factor kind {kind!r}")


def c_product(datum: RootDatum, params: Params, t: Character):
    """The Macdonald c-function c(t) = prod over reduced positive roots."""
    out = 1
    for j in reduced_positive_indices(datum):
        out *= local_factor(datum, params, "c", j, t)
    return out


def n_product(datum: RootDatum, params: Params, t: Character):
    out = 1
    for j in reduced_positive_indices(datum):
        out *= _n_factor(datum, params, t, j)[0]
    return out


def d_product(datum: RootDatum, params: Params, t: Character):
    out = 1
    for j in reduced_positive_indices(datum):
        out *= _d_factor(datum, t, j)[0]
    return out


def n_set(datum: RootDatum, params: Params, t: Character) -> frozenset:
    """N(t): reduced positive roots with n_alpha(t) n_{-alpha}(t) = 0."""
    tinv = t.inverse()
    out = []
    for j in reduced_positive_indices(datum):
        n_pos, s_pos = _n_factor(datum, params, t, j)
        n_neg, s_neg = _n_factor(datum, params, tinv, j)
        if _near_zero(n_pos, s_pos) or _near_zero(n_neg, s_neg):
            out.append(j)
    return frozenset(out)


def d_set(datum: RootDatum, t: Character) -> frozenset:
    """D(t): reduced positive roots with d_alpha(t) = 0, i.e. t^{alpha_vee} = 1."""
    out = []
    for j in reduced_positive_indices(datum):
        d, scale = _d_factor(datum, t, j)
        if _near_zero(d, scale):
            out.append(j)
    return frozenset(out)


def _reduced_inversions(datum: RootDatum, w: WeylElement) -> frozenset:
    reduced = frozenset(reduced_positive_indices(datum))
    return frozenset(inversion_set(datum, w)) & reduced


def f_j_set(datum: RootDatum, params: Params, t: Character, J) -> tuple:
    """F_J(t) = {w : R(w^{-1}) meets N(t) in exactly J and misses D(t)}."""
    J = frozenset(J)
    N = n_set(datum, params, t)
    if not J <= N:
        raise JNotSubsetOfN(f"J={sorted(J)} is not a subset of N(t)={sorted(N)}")
    D = d_set(datum, t)
    out = []
    for w in datum.weyl:
        winv = datum.weyl[datum.weyl_inv[w.index]]
        R = _reduced_inversions(datum, winv)
        if R & N == J and not R & D:
            out.append(w)
    return tuple(out)


def is_regular(datum: RootDatum, t: Character) -> bool:
    """t^{alpha_vee} != 1 for every root (doubled roots included)."""
    for r in datum.positive_roots:
        u = t.value(r.coroot)
        if _near_zero(u - 1, abs(u)):
            return False
    return True


def calibration_components(datum: RootDatum, params: Params, t: Character) -> list:
    """Connected components of the calibration graph on the orbit of t.

    Vertices are the distinct characters {wt : w in W0} (deduplicated by
    value); wt and s_i wt are joined iff alpha_i is not in N(wt).
    """
    orbit = [weyl_act_char(datum, w, t) for w in datum.weyl]
    # deduplicate by value
    reps: list = []          # class representative characters
    cls_of_w = []            # weyl index -> class index
    for u in orbit:
        for k, v in enumerate(reps):
            if u.close_to(v, EPS_ZERO):
                cls_of_w.append(k)
                break
        else:
            reps.append(u)
            cls_of_w.append(len(reps) - 1)

    parent = list(range(len(reps)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for w in datum.weyl:
        wt = orbit[w.index]
        Nwt = n_set(datum, params, wt)
        for pos, i in enumerate(datum.simple_indices):
            if i in Nwt:
                continue
            si = datum.simple_weyl_indices[pos]
            sw = datum.weyl_mult[si][w.index]
            union(cls_of_w[w.index], cls_of_w[sw])

    groups: dict = {}
    for k in range(len(reps)):
        groups.setdefault(find(k), []).append(reps[k])
    return list(groups.values())


# ---------------------------------------------------------------------------
# Calibratability of a weight for a pair of simple roots (rank 2).

def _pattern_values(datum: RootDatum, params: Params):
    """The exceptional (t^{alpha_i_vee}, t^{alpha_j_vee or half}) patterns.

    Returns (vec_i, vec_j, patterns) where vec_i/vec_j are the lattice
    vectors to evaluate and patterns is a list of (value_i, value_j, tag)
    admissible when the parameters satisfy the attached relation.  The
    simple root alpha_1 plays the role of the short/middle root alpha_i and
    alpha_2 the long/short root alpha_j, matching the layout of the rank-2
    data used here.
    """
    tag = datum.type_tag
    q1 = params.q[datum.simple_root(1).param]
    q2 = params.q[datum.simple_root(2).param]
    vec_i = datum.simple_root(1).coroot
    patterns = []
    if tag == "C2":
        vec_j = datum.simple_root(2).coroot
        if _near_zero(q1 - q2, q1):
            patterns += [(q1, 1 / q1, "C2a"), (1 / q1, q1, "C2a")]
        if _near_zero(q1 - q2 * q2, q1):
            patterns += [(1 / (q2 * q2), q2, "C2b"), (q2 * q2, q2, "C2b")]
        return vec_i, vec_j, patterns
    if tag == "G2":
        vec_j = datum.simple_root(2).coroot
        if _near_zero(q1 - q2, q1):
            patterns += [
                (1 / q1, q1, "G2a"), (q1, 1 / q1, "G2a"),
                (q1 * q1, 1 / q1, "G2a"), (1 / (q1 * q1), q1, "G2a"),
            ]
        if _near_zero(q1 - q2 ** 3, q1):
            patterns += [
                (q2 ** 3, 1 / q2, "G2b"), (1 / q2 ** 3, q2, "G2b"),
                (1 / q2 ** 3, q2 * q2, "G2b"), (q2 ** 3, 1 / (q2 * q2), "G2b"),
            ]
        return vec_i, vec_j, patterns
    if tag == "BC2":
        q0 = params.q[0]
        vec_j = datum.simple_root(2).half_coroot
        r0 = (q0 * q2) ** 0.5
        r1 = (q2 / q0) ** 0.5
        if _near_zero(q1 - q0 * q2, q1):
            patterns += [(q0 * q2, 1 / r0, "BC2a"), (1 / (q0 * q2), r0, "BC2a")]
        if _near_zero(q1 - q0 / q2, q1) or _near_zero(q1 - q2 / q0, q1):
            patterns += [(q2 / q0, -1 / r1, "BC2b"), (q0 / q2, -r1, "BC2b")]
        if _near_zero(q1 - r0, q1):
            patterns += [(1 / q1, q1, "BC2c"), (q1, 1 / q1, "BC2c")]
        if _near_zero(q1 - r1, q1) or _near_zero(q1 - 1 / r1, q1):
            patterns += [(1 / q1, -q1, "BC2d"), (q1, -1 / q1, "BC2d")]
        return vec_i, vec_j, patterns
    return vec_i, datum.simple_root(2).coroot, patterns


def is_calibratable(datum: RootDatum, params: Params, t: Character, i: int, j: int):
    """Whether t is (i, j)-calibratable; returns (bool, case tag).

    Case (1) is (i, j)-regularity over the group generated by s_i and s_j.
    Otherwise the orbit of t (and its inverse) is matched against the
    exceptional parameter-and-value patterns of the C2 / G2 / BC2 systems.
    """
    if datum.rank == 1:
        return True, "rank1"
    if {i, j} != {1, 2}:
        raise ValueError("simple-root indices must be the pair {1, 2}")
    # (i, j)-regularity: W_ij is all of W0 in rank 2
    regular = True
    for w in datum.weyl:
        wt = weyl_act_char(datum, w, t)
        for k in (1, 2):
            u = wt.value(datum.simple_root(k).coroot)
            if _near_zero(u - 1, abs(u)):
                regular = False
    if regular:
        return True, "regular"
    vec_i, vec_j, patterns = _pattern_values(datum, params)
    if patterns:
        candidates = []
        for w in datum.weyl:
            wt = weyl_act_char(datum, w, t)
            candidates.append(wt)
            candidates.append(wt.inverse())
        for u in candidates:
            vi, vj = u.value(vec_i), u.value(vec_j)
            for pi, pj, tag in patterns:
                if _near_zero(vi - pi, abs(pi)) and _near_zero(vj - pj, abs(pj)):
                    return True, tag
    return False, "none"


def _reflection_index(datum: RootDatum, root_index: int) -> int:
    """Index in datum.weyl of the reflection s_alpha."""
    root = datum.positive_roots[root_index]
    n = datum.rank
    mat = tuple(
        tuple(
            (1 if r == c else 0) - root.coroot[r] * root.functional[c]
            for c in range(n)
        )
        for r in range(n)
    )
    for w in datum.weyl:
        if w.matrix == mat:
            return w.index
    raise ValueError(f"no reflection found for root {root_index}")


def kato_irreducible(datum: RootDatum, params: Params, t: Character) -> bool:
    """Kato's criterion: M(t) irreducible iff N(t) is empty and the
    stabiliser of t equals the normal closure of {s_alpha : alpha in D(t)}."""
    if n_set(datum, params, t):
        return False
    stab = {
        w.index
        for w in datum.weyl
        if weyl_act_char(datum, w, t).close_to(t, EPS_ZERO)
    }
    gens = {_reflection_index(datum, j) for j in d_set(datum, t)}
    closure = {0} | gens
    changed = True
    while changed:
        changed = False
        for a in list(closure):
            for b in list(closure):
                p = datum.weyl_mult[a][b]
                if p not in closure:
                    closure.add(p)
                    changed = True
            for w in datum.weyl:
                conj = datum.weyl_mult[datum.weyl_mult[w.index][a]][
                    datum.weyl_inv[w.index]
                ]
                if conj not in closure:
                    closure.add(conj)
                    changed = True
    return stab == closure
