"""Finite dimensional representations: principal series, calibrated
modules, parabolically induced modules, and the one-dimensional catalog.

A representation is stored as matrices for the generators: pi(T_i) for the
simple reflections and pi(x^{b_k}) for the fixed lattice basis b_1..b_n.
Matrices for arbitrary T_w x^lambda follow from reduced words.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .hecke_core import HeckeAlgebra, Params
from .root_data import Character, RootDatum, WeylElement, weyl_act_char
from .weights import (
    EPS_ZERO,
    f_j_set,
    is_calibratable,
    is_regular,
    local_factor,
    n_set,
)

__all__ = [
    "EmptyF",
    "InvalidOneDimCharacter",
    "IrregularCharacter",
    "NotApplicable",
    "NotCalibratable",
    "Representation",
    "calibrated_module",
    "char_value",
    "check_relations",
    "companion_one_dim",
    "f_value",
    "g2_pi7_plus",
    "g_series_truncated",
    "induced_parabolic",
    "matrix_of",
    "one_dim",
    "one_dim_catalog",
    "principal_series",
    "principal_series_tau",
    "rep_from_dict",
    "rep_to_dict",
]


class IrregularCharacter(ValueError):
    """The tau-basis principal series needs a regular central character."""


class DenominatorVanishes(ZeroDivisionError):
    """A factor d_alpha(wt) vanishes where an inverse is required."""


class NotCalibratable(ValueError):
    """Calibrated module requested at a non-calibratable weight."""


class EmptyF(ValueError):
    """F_J(t) is empty, so no module M_J(t) exists."""


class InvalidOneDimCharacter(ValueError):
    """Proposed one-dimensional data violates the parabolic relations."""


class NotApplicable(ValueError):
    """No companion representation exists for this one-dimensional rep."""


@dataclass
class Representation:
    """Matrices for the algebra generators (numpy, complex128)."""

    datum: RootDatum
    label: str
    dim: int
    t_mats: tuple            # i-1 -> pi(T_i)
    x_mats: tuple            # k -> pi(x^{b_k})
    weight_support: tuple = ()   # Characters, when known
    _x_inv: tuple = field(default=(), repr=False)
    _word_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.t_mats = tuple(np.asarray(m, dtype=complex) for m in self.t_mats)
        self.x_mats = tuple(np.asarray(m, dtype=complex) for m in self.x_mats)
        self._x_inv = tuple(np.linalg.inv(m) for m in self.x_mats)

    def x_matrix(self, lam) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for k, e in enumerate(lam):
            if e > 0:
                out = out @ np.linalg.matrix_power(self.x_mats[k], e)
            elif e < 0:
                out = out @ np.linalg.matrix_power(self._x_inv[k], -e)
        return out

    def t_word_matrix(self, w_index: int) -> np.ndarray:
        cached = self._word_cache.get(w_index)
        if cached is None:
            cached = np.eye(self.dim, dtype=complex)
            for i in self.datum.weyl[w_index].word:
                cached = cached @ self.t_mats[i - 1]
            self._word_cache[w_index] = cached
        return cached


def matrix_of(rep: Representation, h) -> np.ndarray:
    """pi(h) for a Bernstein-basis element h = sum c T_w x^lambda."""
    if h.basis != "bernstein":
        raise ValueError("matrix_of needs a Bernstein-basis element")
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for (w_index, lam), c in h.terms.items():
        out += complex(c) * (rep.t_word_matrix(w_index) @ rep.x_matrix(lam))
    return out


def char_value(rep: Representation, h) -> complex:
    return complex(np.trace(matrix_of(rep, h)))


def check_relations(datum: RootDatum, params: Params, rep: Representation) -> float:
    """Largest deviation from the defining relations (0 for a true rep)."""
    algebra = HeckeAlgebra(datum, params)
    eye = np.eye(rep.dim, dtype=complex)
    worst = 0.0
    for i in range(1, datum.rank + 1):
        ti = rep.t_mats[i - 1]
        sq = params.sqrt_q[datum.simple_root(i).param]
        worst = max(worst, np.abs((ti - sq * eye) @ (ti + eye / sq)).max())
    if datum.rank == 2:
        a, b = rep.t_mats
        left, right = eye.copy(), eye.copy()
        for k in range(datum.coxeter_matrix[0][1]):
            left = left @ (a if k % 2 == 0 else b)
            right = right @ (b if k % 2 == 0 else a)
        worst = max(worst, np.abs(left - right).max())
        x1, x2 = rep.x_mats
        worst = max(worst, np.abs(x1 @ x2 - x2 @ x1).max())
    # Bernstein relations T_i x^lam = x^{s_i lam} T_i + correction
    for i in range(1, datum.rank + 1):
        si = datum.simple_reflection(i)
        for k in range(datum.rank):
            lam = tuple(1 if j == k else 0 for j in range(datum.rank))
            corr = algebra.bernstein_correction(i, lam)
            rhs = rep.x_matrix(datum.act_on_lattice(si, lam)) @ rep.t_mats[i - 1]
            for mu, c in corr.items():
                rhs = rhs + complex(c) * rep.x_matrix(mu)
            lhs = rep.t_mats[i - 1] @ rep.x_matrix(lam)
            worst = max(worst, np.abs(lhs - rhs).max())
    return float(worst)


# ---------------------------------------------------------------------------
# Principal series.

def principal_series(datum: RootDatum, params: Params, t: Character) -> Representation:
    """M(t) on the basis {T_w (x) v_t : w in W0}."""
    algebra = HeckeAlgebra(datum, params)
    n = len(datum.weyl)

    def gen_matrix(g):
        mat = np.zeros((n, n), dtype=complex)
        for w in datum.weyl:
            prod = algebra.bernstein_mult(g, algebra.element(w.index, algebra._zero))
            for (u, lam), c in prod.terms.items():
                mat[u, w.index] += complex(c) * t.value(lam)
        return mat

    t_mats = tuple(gen_matrix(algebra.T(i)) for i in range(1, datum.rank + 1))
    basis = []
    for k in range(datum.rank):
        basis.append(tuple(1 if j == k else 0 for j in range(datum.rank)))
    x_mats = tuple(gen_matrix(algebra.x(b)) for b in basis)
    support = tuple(weyl_act_char(datum, w, t) for w in datum.weyl)
    return Representation(datum, "principal_series", n, t_mats, x_mats, support)


def principal_series_tau(datum: RootDatum, params: Params, t: Character) -> Representation:
    """M(t) on the intertwiner basis {tau_w (x) v_t}, for regular t.

    x^lambda acts diagonally by (wt)^lambda.  T_i follows from
    (1 - x^{-alpha_i_vee}) T_i = tau_i + q_i^{1/2} a_i(x) together with
    tau_i tau_w = tau_{s_i w} (length increasing) or
    q_i n_i(x) n_i(x^{-1}) tau_{s_i w} (length decreasing).
    """
    if not is_regular(datum, t):
        raise IrregularCharacter("tau basis requires a regular central character")
    n = len(datum.weyl)
    orbit = [weyl_act_char(datum, w, t) for w in datum.weyl]
    x_mats = []
    for k in range(datum.rank):
        b = tuple(1 if j == k else 0 for j in range(datum.rank))
        x_mats.append(np.diag([orbit[w.index].value(b) for w in datum.weyl]))
    t_mats = []
    for i in range(1, datum.rank + 1):
        root_index = datum.simple_indices[i - 1]
        coroot = datum.positive_roots[root_index].coroot
        si = datum.simple_reflection(i)
        mat = np.zeros((n, n), dtype=complex)
        for w in datum.weyl:
            wt = orbit[w.index]
            sw = datum.weyl_mult[si.index][w.index]
            swt = orbit[sw]
            d_w = 1 - wt.value(tuple(-c for c in coroot))
            d_sw = 1 - swt.value(tuple(-c for c in coroot))
            if min(abs(d_w), abs(d_sw)) <= EPS_ZERO:
                raise DenominatorVanishes("d_alpha_i vanishes on the orbit")
            sq = params.sqrt_q[datum.simple_root(i).param]
            mat[w.index, w.index] = sq * local_factor(
                datum, params, "a", root_index, wt
            ) / d_w
            if datum.weyl[sw].length > w.length:
                kappa = 1.0
            else:
                q = params.q[datum.simple_root(i).param]
                kappa = q * local_factor(
                    datum, params, "n", root_index, swt
                ) * local_factor(datum, params, "n", root_index, swt.inverse())
            mat[sw, w.index] = kappa / d_sw
        t_mats.append(mat)
    return Representation(
        datum, "principal_series_tau", n, tuple(t_mats), tuple(x_mats), tuple(orbit)
    )


def f_value(datum: RootDatum, params: Params, t: Character, h) -> complex:
    """f_t(h): the (1, 1) entry of h on the tau basis of M(t)."""
    rep = principal_series_tau(datum, params, t)
    return complex(matrix_of(rep, h)[0, 0])


def g_series_truncated(datum: RootDatum, params: Params, t: Character, h, order: int):
    """Direct evaluation of sum_mu t^{-mu} Tr(x^mu h) over |mu|_inf <= order.

    Converges (as order grows) to f_t(h) / (q_{w0} c(t) c(1/t)) when t is
    small enough; used as an independent check on f_value.
    """
    algebra = HeckeAlgebra(datum, params)
    total = 0.0 + 0.0j
    rng = range(-order, order + 1)
    if datum.rank == 1:
        grid = [(k,) for k in rng]
    else:
        grid = [(a, b) for a in rng for b in rng]
    for mu in grid:
        prod = algebra.bernstein_mult(algebra.x(mu), h)
        total += t.value(tuple(-m for m in mu)) * complex(
            algebra.trace(algebra.bernstein_to_coxeter(prod))
        )
    return total


# ---------------------------------------------------------------------------
# Calibrated modules M_J(t).

def calibrated_module(datum: RootDatum, params: Params, t: Character, J) -> Representation:
    """M_J(t) with basis {e_w : w in F_J(t)}.

    x^lambda e_w = (wt)^lambda e_w and
    T_i e_w = q_i^{1/2} b_i(wt) e_w + q_i^{1/2} c_i(wt) e_{s_i w},
    where e_v = 0 for v outside F_J(t).
    """
    if datum.rank == 2:
        ok, _ = is_calibratable(datum, params, t, 1, 2)
        if not ok:
            raise NotCalibratable("weight is not calibratable for the pair (1, 2)")
    F = f_j_set(datum, params, t, J)
    if not F:
        raise EmptyF("F_J(t) is empty")
    pos = {w.index: k for k, w in enumerate(F)}
    dim = len(F)
    orbit = tuple(weyl_act_char(datum, w, t) for w in F)
    x_mats = []
    for k in range(datum.rank):
        b = tuple(1 if j == k else 0 for j in range(datum.rank))
        x_mats.append(np.diag([u.value(b) for u in orbit]))
    t_mats = []
    for i in range(1, datum.rank + 1):
        root_index = datum.simple_indices[i - 1]
        si = datum.simple_reflection(i)
        sq = params.sqrt_q[datum.simple_root(i).param]
        mat = np.zeros((dim, dim), dtype=complex)
        for k, w in enumerate(F):
            wt = orbit[k]
            mat[k, k] = sq * local_factor(datum, params, "b", root_index, wt)
            sw = datum.weyl_mult[si.index][w.index]
            if sw in pos:
                mat[pos[sw], k] = sq * local_factor(
                    datum, params, "c", root_index, wt
                )
        t_mats.append(mat)
    label = "M_J(t), J={" + ",".join(str(j) for j in sorted(J)) + "}"
    return Representation(datum, label, dim, tuple(t_mats), tuple(x_mats), orbit)


# ---------------------------------------------------------------------------
# Parabolically induced modules (rank 2 only).

def _coset_reps(datum: RootDatum, i: int):
    """Minimal length representatives of W0 / <s_i>, sorted by length."""
    si = datum.simple_reflection(i)
    reps = [
        w for w in datum.weyl
        if datum.weyl[datum.weyl_mult[w.index][si.index]].length > w.length
    ]
    reps.sort(key=lambda w: (w.length, w.index))
    return reps


def induced_parabolic(
    datum: RootDatum, params: Params, i: int, t_value, x_values
) -> Representation:
    """Induce from the one-dimensional module of the parabolic subalgebra
    generated by T_i and all x^lambda, with T_i -> t_value and
    x^{b_k} -> x_values[k]."""
    algebra = HeckeAlgebra(datum, params)
    sq = params.sqrt_q[datum.simple_root(i).param]
    t_value = complex(t_value)
    xi = tuple(complex(v) for v in x_values)
    tol = 1e-8 * max(abs(t_value), 1.0)
    if abs((t_value - sq) * (t_value + 1 / sq)) > tol:
        raise InvalidOneDimCharacter("T_i value fails the quadratic relation")
    si = datum.simple_reflection(i)

    def xi_pow(lam):
        out = 1.0 + 0.0j
        for v, e in zip(xi, lam):
            out *= v ** e
        return out

    for k in range(datum.rank):
        lam = tuple(1 if j == k else 0 for j in range(datum.rank))
        rhs = xi_pow(datum.act_on_lattice(si, lam)) * t_value
        for mu, c in algebra.bernstein_correction(i, lam).items():
            rhs += complex(c) * xi_pow(mu)
        if abs(t_value * xi_pow(lam) - rhs) > 1e-8 * max(1.0, abs(rhs)):
            raise InvalidOneDimCharacter(
                "x values fail the Bernstein relation for T_i"
            )

    reps = _coset_reps(datum, i)
    pos = {w.index: k for k, w in enumerate(reps)}
    dim = len(reps)

    def gen_matrix(g):
        mat = np.zeros((dim, dim), dtype=complex)
        for col, u in enumerate(reps):
            prod = algebra.bernstein_mult(g, algebra.element(u.index, algebra._zero))
            for (v, lam), c in prod.terms.items():
                value = complex(c) * xi_pow(lam)
                vs = datum.weyl_mult[v][si.index]
                if datum.weyl[vs].length < datum.weyl[v].length:
                    mat[pos[vs], col] += value * t_value
                else:
                    mat[pos[v], col] += value
        return mat

    t_mats = tuple(gen_matrix(algebra.T(j)) for j in range(1, datum.rank + 1))
    basis = [tuple(1 if j == k else 0 for j in range(datum.rank)) for k in range(datum.rank)]
    x_mats = tuple(gen_matrix(algebra.x(b)) for b in basis)
    t_char = Character(xi)
    support = tuple(weyl_act_char(datum, u, t_char) for u in reps)
    return Representation(
        datum, f"induced(i={i})", dim, t_mats, x_mats, support
    )


# ---------------------------------------------------------------------------
# One-dimensional representations.

def one_dim(datum: RootDatum, label: str, t_values, x_values) -> Representation:
    t_mats = tuple(np.array([[complex(v)]]) for v in t_values)
    x_mats = tuple(np.array([[complex(v)]]) for v in x_values)
    support = (Character(tuple(complex(v) for v in x_values)),)
    return Representation(datum, label, 1, t_mats, x_mats, support)


def one_dim_catalog(datum: RootDatum, params: Params) -> dict:
    """The one-dimensional representations appearing in the trace formulas,
    keyed by their name."""
    tag = datum.tag
    q = params.free
    out = {}
    if tag == "A1Q":
        (qv,) = q
        out["pi"] = ((-qv ** -0.5,), (1 / qv,))
    elif tag == "A1P":
        (qv,) = q
        out["pi1"] = ((-qv ** -0.5,), (qv ** -0.5,))
        out["pi2"] = ((-qv ** -0.5,), (-qv ** -0.5,))
    elif tag == "BC1Q":
        q0, q1 = q
        out["pi1"] = ((-q1 ** -0.5,), ((q0 * q1) ** -0.5,))
        out["pi2"] = ((-q1 ** -0.5,), (-((q0 / q1) ** 0.5),))
        out["pi3"] = ((q1 ** 0.5,), (-((q1 / q0) ** 0.5),))
    elif tag == "A2Q":
        (qv,) = q
        out["pi2"] = ((-qv ** -0.5, -qv ** -0.5), (1 / qv, 1 / qv))
    elif tag == "A2P":
        (qv,) = q
        w = cmath.exp(2j * math.pi / 3)
        T = (-qv ** -0.5, -qv ** -0.5)
        out["pi2"] = (T, (1 / qv, 1 / qv))
        out["pi3"] = (T, (w / qv, 1 / (w * qv)))
        out["pi4"] = (T, (1 / (w * qv), w / qv))
    elif tag == "C2Q":
        q1, q2 = q
        s1, s2 = q1 ** 0.5, q2 ** 0.5
        out["pi3"] = ((-1 / s1, -1 / s2), (1 / q1, 1 / q2))
        out["pi4"] = ((-1 / s1, -1 / s2), (1 / q1, -1.0))
        out["pi5"] = ((-1 / s1, s2), (1 / q1, -1.0))
        out["pi6"] = ((s1, -1 / s2), (q1, 1 / q2))
        out["pi7"] = ((-1 / s1, s2), (1 / q1, q2))
    elif tag == "C2P":
        q1, q2 = q
        s1, s2 = q1 ** 0.5, q2 ** 0.5
        for sign, suffix in ((1.0, "+"), (-1.0, "-")):
            out["pi3" + suffix] = ((-1 / s1, -1 / s2), (1 / (q1 * q2), sign / (s1 * q2)))
            out["pi4" + suffix] = ((s1, -1 / s2), (q1 / q2, sign * s1 / q2))
            out["pi5" + suffix] = ((-1 / s1, s2), (q2 / q1, sign * q2 / s1))
    elif tag == "G2Q":
        q1, q2 = q
        s1, s2 = q1 ** 0.5, q2 ** 0.5
        out["pi3"] = ((-1 / s1, -1 / s2), (1 / q1, 1 / q2))
        out["pi4"] = ((s1, -1 / s2), (q1, 1 / q2))
        out["pi5"] = ((-1 / s1, s2), (1 / q1, q2))
    elif tag == "BC2Q":
        q0, q1, q2 = q
        s0, s1, s2 = q0 ** 0.5, q1 ** 0.5, q2 ** 0.5
        out["pi5"] = ((-1 / s1, -1 / s2), (1 / q1, 1 / (s0 * s2)))
        out["pi6"] = ((-1 / s1, -1 / s2), (1 / q1, -s0 / s2))
        out["pi7"] = ((s1, -1 / s2), (q1, 1 / (s0 * s2)))
        out["pi8"] = ((s1, -1 / s2), (q1, -s0 / s2))
        out["pi9"] = ((-1 / s1, s2), (1 / q1, s0 * s2))
        out["pi10"] = ((-1 / s1, s2), (1 / q1, -s2 / s0))
        out["pi11"] = ((s1, s2), (q1, -s2 / s0))
    return {
        label: one_dim(datum, label, tv, xv) for label, (tv, xv) in out.items()
    }


def companion_one_dim(datum: RootDatum, params: Params, rep: Representation) -> Representation:
    """The partner representation with pi(T_n) flipped between q_n^{1/2} and
    -q_n^{-1/2}; exists only when pi(x^{alpha_n_vee}) = -1."""
    if rep.dim != 1:
        raise NotApplicable("companion is defined for one-dimensional reps")
    n = datum.rank
    coroot = datum.simple_root(n).coroot
    val = 1.0 + 0.0j
    for m, e in zip(rep.x_mats, coroot):
        val *= complex(m[0, 0]) ** e
    if abs(val + 1) > EPS_ZERO:
        raise NotApplicable("pi(x^{alpha_n_vee}) is not -1")
    sq = params.sqrt_q[datum.simple_root(n).param]
    tn = complex(rep.t_mats[n - 1][0, 0])
    flipped = sq if abs(tn + 1 / sq) <= EPS_ZERO * abs(sq) else -1 / sq
    t_values = [complex(m[0, 0]) for m in rep.t_mats]
    t_values[n - 1] = flipped
    x_values = [complex(m[0, 0]) for m in rep.x_mats]
    return one_dim(datum, rep.label + "'", t_values, x_values)


# ---------------------------------------------------------------------------
# The 3-dimensional family of the G2 formula at the special parameters.

def _g2_symbolic_matrices():
    """Example matrices for M_J(t) at t = (q1, q1^{-1/2} q2^{1/2}) with
    J_vee = {alpha1_vee + 2 alpha2_vee}, in terms of a = q1^{1/2}, b = q2^{1/2}."""
    import sympy as sp

    a, b = sp.symbols("a b", positive=True)
    T1 = a * sp.Matrix(
        [
            [(1 - a ** -2) / (1 - a * b ** -3), (1 - a ** -3 * b ** 3) / (1 - a ** -1 * b ** 3), 0],
            [(1 - a ** -1 * b ** -3) / (1 - a * b ** -3), (1 - a ** -2) / (1 - a ** -1 * b ** 3), 0],
            [0, 0, -(a ** -2)],
        ]
    )
    T2 = b * sp.Matrix(
        [
            [-(b ** -2), 0, 0],
            [0, (1 - b ** -2) / (1 - a * b ** -1), (1 - a * b ** -3) / (1 - a ** -1 * b)],
            [0, (1 - a ** -1 * b ** -1) / (1 - a * b ** -1), (1 - b ** -2) / (1 - a ** -1 * b)],
        ]
    )
    X1 = sp.diag(a ** -1 * b ** 3, a * b ** -3, a ** -2)
    X2 = sp.diag(b ** -2, a ** -1 * b, a * b ** -1)
    return a, b, T1, T2, X1, X2


def g2_pi7_plus(datum: RootDatum, params: Params) -> Representation:
    """The 3-dimensional module at t_+ = (q1, q1^{-1/2} q2^{1/2}).

    Away from q1 = q2 and q1 = q2^3 this is a calibrated module.  At those
    parameter values the calibrated construction degenerates; the module is
    then obtained by a change of basis in the generic matrices followed by
    specialisation.
    """
    if datum.tag != "G2Q":
        raise ValueError("g2_pi7_plus is specific to the G2 configuration")
    q1, q2 = params.free
    generic = abs(q1 - q2) > EPS_ZERO * q1 and abs(q1 - q2 ** 3) > EPS_ZERO * q1
    if generic:
        t = Character((q1, (q2 / q1) ** 0.5))
        J = n_set(datum, params, t)
        rep = calibrated_module(datum, params, t, J)
        # Rescale the longest-element basis vector so that the generator
        # matrices take the standard closed form for this family.
        a, b = math.sqrt(q1), math.sqrt(q2)
        kappa = (1 - 1 / (a * b)) / (1 - a / b ** 3)
        scale = np.diag([1.0, 1.0, kappa]).astype(complex)
        scale_inv = np.diag([1.0, 1.0, 1.0 / kappa]).astype(complex)
        t_mats = tuple(scale @ m @ scale_inv for m in rep.t_mats)
        x_mats = tuple(scale @ m @ scale_inv for m in rep.x_mats)
        return Representation(
            datum, "pi7+", 3, t_mats, x_mats, rep.weight_support
        )

    import sympy as sp

    a, b, T1, T2, X1, X2 = _g2_symbolic_matrices()
    if abs(q1 - q2) <= EPS_ZERO * q1:
        conj = sp.Matrix([[1, 0, 0], [0, 1, -a / b], [0, -1, 1]])
        target = b
    else:
        conj = sp.Matrix([[1, -a * b ** -3, 0], [-1, 1, 0], [0, 0, 1 - a * b ** -3]])
        target = b ** 3
    mats = []
    for M in (T1, T2, X1, X2):
        spec = sp.cancel(sp.together(conj * M * conj.inv())).subs(a, target)
        if spec.has(sp.zoo, sp.nan, sp.oo):
            raise ArithmeticError("no finite specialisation found")
        numeric = np.array(
            sp.lambdify(b, spec, "numpy")(math.sqrt(q2)), dtype=complex
        )
        mats.append(numeric)
    support = ()
    rep = Representation(
        datum, "pi7+", 3, (mats[0], mats[1]), (mats[2], mats[3]), support
    )
    return rep


# ---------------------------------------------------------------------------
# Serialization.

def _mat_to_list(m: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _mat_from_list(rows):
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def rep_to_dict(rep: Representation) -> dict:
    return {
        "type": rep.datum.tag,
        "label": rep.label,
        "dim": rep.dim,
        "t_mats": [_mat_to_list(m) for m in rep.t_mats],
        "x_mats": [_mat_to_list(m) for m in rep.x_mats],
        "weight_support": [
            [[float(v.real), float(v.imag)] for v in u.values]
            for u in rep.weight_support
        ],
    }


def rep_from_dict(datum: RootDatum, data: dict) -> Representation:
    if data["type"] != datum.tag:
        raise ValueError(f"representation is for {data['type']}, not {datum.tag}")
    support = tuple(
        Character(tuple(complex(re, im) for re, im in values))
        for values in data.get("weight_support", [])
    )
    return Representation(
        datum,
        data["label"],
        data["dim"],
        tuple(_mat_from_list(m) for m in data["t_mats"]),
        tuple(_mat_from_list(m) for m in data["x_mats"]),
        support,
    )
