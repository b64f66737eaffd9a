"""Spectral decomposition of the canonical trace.

For each supported type this module provides:

* the Macdonald ``c``-function and the auxiliary one-variable functions
  ``c_1, c_2, c_3`` as explicit :class:`FactorProduct` data (:func:`c_catalog`),
* the constants appearing in the trace formula (:func:`constants`),
* the full list of spectral terms -- the torus term, the one-parameter
  character families and the discrete characters, with their masses,
  densities and parameter-regime case splits (:func:`spectral_terms`),
* torus quadrature (:func:`torus_integral`) and numeric residue extraction
  (:func:`residue_numeric`),
* end-to-end verification ``RHS(h) ~ Tr(h)`` (:func:`plancherel_rhs`,
  :func:`verify`).

The trace decomposes as a sum of a 2-torus (or 1-torus in rank 1) principal
series term with density 1/|c(t)|^2, finitely many 1-torus families of
induced representations with densities 1/|c_k(s)|^2, and finitely many
discrete characters with constant masses.  Torus integrals are evaluated by
uniform-grid averages with an irrational phase offset; the grid offset keeps
the sample points away from the (removable) singularities of the integrands.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .hecke_core import HeckeAlgebra, HeckeElement, Params, make_params
from .reps import (
    Representation,
    _coset_reps,
    calibrated_module,
    g2_pi7_plus,
    induced_parabolic,
    one_dim_catalog,
)
from .root_data import Character, RootDatum, datum_from_tag
from .weights import n_set

__all__ = [
    "BoundaryParameters",
    "Factor",
    "FactorProduct",
    "InducedFamily",
    "SingularNode",
    "SpectralTerm",
    "THETA0",
    "c_catalog",
    "constants",
    "plancherel_rhs",
    "residue_constant_checks",
    "residue_numeric",
    "rhs_lhs_table",
    "sigma1",
    "sigma2",
    "spectral_terms",
    "torus_integral",
    "verify",
]

# Default grid phase offset (irrational, to dodge the measure-zero singular
# supports of the integrands) and the retry offsets used on SingularNode.
THETA0 = (math.sqrt(2.0) - 1.0) / 2.0
RETRY_OFFSETS = (THETA0, (math.sqrt(3.0) - 1.0) / 2.0, (math.sqrt(5.0) - 1.0) / 2.0)

#: Relative tolerance for classifying parameters into a regime.
EPS_REGIME = 1e-6

#: Sample proximity threshold for declaring a grid node singular.
EPS_NODE = 1e-9

OMEGA = cmath.exp(2j * math.pi / 3)


class SingularNode(ArithmeticError):
    """A quadrature sample fell within ``EPS_NODE`` of a density pole."""


class BoundaryParameters(ValueError):
    """Parameters sit on (or too close to) a regime boundary that the trace
    formula does not cover."""


def sigma1(x):
    return 1 + x


def sigma2(x):
    return 1 + x + x * x


# ---------------------------------------------------------------------------
# Factor products (c-functions).

def _monomial(t, e):
    """t^e = prod t_i^{e_i} for a tuple of values/arrays t and integers e."""
    out = None
    for v, k in zip(t, e):
        if k:
            term = v ** k
            out = term if out is None else out * term
    if out is None:
        base = t[0]
        if isinstance(base, np.ndarray):
            return np.ones_like(base)
        return 1.0 + 0.0j
    return out


@dataclass(frozen=True)
class Factor:
    """One factor ``1 + sign * coefficient * t^{-exponent}``."""

    coefficient: complex
    exponent: tuple
    sign: int = -1

    def value(self, t):
        neg = tuple(-e for e in self.exponent)
        return 1 + self.sign * self.coefficient * _monomial(t, neg)


@dataclass(frozen=True)
class FactorProduct:
    """A product of factors over a product of denominator factors."""

    factors: tuple
    denominator_factors: tuple = ()

    def numerator_value(self, t):
        out = 1
        for f in self.factors:
            out = out * f.value(t)
        return out

    def denominator_value(self, t):
        out = 1
        for f in self.denominator_factors:
            out = out * f.value(t)
        return out

    def value(self, t):
        return self.numerator_value(t) / self.denominator_value(t)

    def abs2(self, t):
        """|value|^2 for t on the unit torus."""
        v = self.value(t)
        return (v * np.conj(v)).real

    def inverse_abs2(self, t):
        """1/|value|^2 on the torus; raises SingularNode near numerator zeros."""
        nv = self.numerator_value(t)
        if np.min(np.abs(nv)) < EPS_NODE:
            raise SingularNode("density pole within EPS_NODE of a grid sample")
        dv = self.denominator_value(t)
        return ((dv * np.conj(dv)) / (nv * np.conj(nv))).real


def _fp(num, den):
    def build(spec):
        out = []
        for item in spec:
            if len(item) == 2:
                coeff, exp = item
                sign = -1
            else:
                coeff, exp, sign = item
            exp = (exp,) if isinstance(exp, int) else tuple(exp)
            out.append(Factor(complex(coeff), exp, sign))
        return tuple(out)

    return FactorProduct(build(num), build(den))


def c_catalog(type_tag: str, params) -> dict:
    """The c-functions of the trace formula, exactly as displayed."""
    datum, params = _resolve(type_tag, params)
    tag = datum.tag
    q = params.free
    if tag == "A1Q":
        (qv,) = q
        return {"c": _fp([(1 / qv, 1)], [(1, 1)])}
    if tag == "A1P":
        (qv,) = q
        return {"c": _fp([(1 / qv, 2)], [(1, 2)])}
    if tag == "BC1Q":
        q0, q1 = q
        return {
            "c": _fp(
                [((q0 * q1) ** -0.5, 1), ((q0 / q1) ** 0.5, 1, +1)], [(1, 2)]
            )
        }
    if tag == "A2Q":
        (qv,) = q
        exps = [(1, 0), (0, 1), (1, 1)]
        return {
            "c": _fp([(1 / qv, e) for e in exps], [(1, e) for e in exps]),
            "c1": _fp([(qv ** -1.5, 1)], [(qv ** 0.5, 1)]),
        }
    if tag == "A2P":
        (qv,) = q
        exps = [(2, -1), (-1, 2), (1, 1)]
        return {
            "c": _fp([(1 / qv, e) for e in exps], [(1, e) for e in exps]),
            "c1": _fp([(qv ** -1.5, 3)], [(qv ** 0.5, 3)]),
        }
    if tag == "C2Q":
        q1, q2 = q
        exps1 = [(1, 0), (1, 2)]
        exps2 = [(0, 1), (1, 1)]
        return {
            "c": _fp(
                [(1 / q1, e) for e in exps1] + [(1 / q2, e) for e in exps2],
                [(1, e) for e in exps1 + exps2],
            ),
            "c1": _fp(
                [
                    (q1 ** -0.5, 1, +1),
                    (q1 ** -0.5 / q2, 1),
                    (q1 ** 0.5 / q2, 1),
                ],
                [(1, 2), (q1 ** 0.5, 1)],
            ),
            "c2": _fp(
                [(1 / (q1 * q2), 1), (q2 / q1, 1)], [(1, 1), (q2, 1)]
            ),
        }
    if tag == "C2P":
        q1, q2 = q
        exps1 = [(2, -2), (0, 2)]
        exps2 = [(-1, 2), (1, 0)]
        return {
            "c": _fp(
                [(1 / q1, e) for e in exps1] + [(1 / q2, e) for e in exps2],
                [(1, e) for e in exps1 + exps2],
            ),
            "c1": _fp(
                [
                    (q1 ** -0.5, 1, +1),
                    (q1 ** -0.5 / q2, 1),
                    (q1 ** 0.5 / q2, 1),
                ],
                [(1, 2), (q1 ** 0.5, 1)],
            ),
            "c2": _fp(
                [(1 / (q1 * q2), 2), (q2 / q1, 2)], [(1, 2), (q2, 2)]
            ),
        }
    if tag == "G2Q":
        q1, q2 = q
        exps1 = [(1, 0), (2, 3), (1, 3)]
        exps2 = [(0, 1), (1, 2), (1, 1)]
        return {
            "c": _fp(
                [(1 / q1, e) for e in exps1] + [(1 / q2, e) for e in exps2],
                [(1, e) for e in exps1 + exps2],
            ),
            "c1": _fp(
                [
                    (q1 ** -0.5 * OMEGA, 1),
                    (q1 ** -0.5 / OMEGA, 1),
                    (1 / q2, 2),
                    (q1 ** -0.5 / q2, 1),
                    (q1 ** 0.5 / q2, 1),
                ],
                [(1, 2), (q1 ** -0.5, 1), (q1 ** 0.5, 3)],
            ),
            "c2": _fp(
                [
                    (1 / q1, 2),
                    (q2 ** -1.5 / q1, 1),
                    (q2 ** 1.5 / q1, 1),
                ],
                [(1, 2), (q2 ** 1.5, 1), (q2 ** 0.5, 1)],
            ),
        }
    if tag == "BC2Q":
        q0, q1, q2 = q
        a = (q0 * q2) ** 0.5
        b = (q2 / q0) ** 0.5
        return {
            "c": _fp(
                [
                    (1 / q1, (1, 0)),
                    (1 / q1, (1, 2)),
                    (1 / a, (1, 1)),
                    (1 / b, (1, 1), +1),
                    (1 / a, (0, 1)),
                    (1 / b, (0, 1), +1),
                ],
                [(1, (1, 0)), (1, (1, 2)), (1, (2, 2)), (1, (0, 2))],
            ),
            "c1": _fp(
                [
                    ((q0 * q1 * q2) ** -0.5, 1),
                    ((q0 / (q1 * q2)) ** 0.5, 1, +1),
                    ((q1 / (q0 * q2)) ** 0.5, 1),
                    ((q0 * q1 / q2) ** 0.5, 1, +1),
                ],
                [(1, 2), (q1, 2)],
            ),
            "c2": _fp(
                [
                    ((q0 / q2) ** 0.5, 1, +1),
                    (1 / (q1 * a), 1),
                    (a / q1, 1),
                ],
                [(1, 2), (a, 1)],
            ),
            "c3": _fp(
                [
                    (1 / a, 1, +1),
                    ((q0 / q2) ** 0.5 / q1, 1),
                    ((q2 / q0) ** 0.5 / q1, 1),
                ],
                [(1, 2), (b, 1)],
            ),
        }
    raise ValueError(f"unsupported type tag {tag!r}")


# ---------------------------------------------------------------------------
# Constants.

def _bc2_c1_formula(q0, q1, q2):
    return (q0 * q1 * q2 - 1) * (q0 * q1 * q1 * q2 - 1) / (
        sigma1(q0) * sigma1(q1) * sigma1(q2) * sigma1(q0 * q1) * sigma1(q1 * q2)
    )


def constants(type_tag: str, params) -> dict:
    """All constants of the relevant trace formula, evaluated as reals."""
    datum, params = _resolve(type_tag, params)
    tag = datum.tag
    q = params.free
    if tag == "A1Q":
        (qv,) = q
        return {"surface": 1 / (2 * qv), "chi": (qv - 1) / (qv + 1)}
    if tag == "A1P":
        (qv,) = q
        return {"surface": 1 / (2 * qv), "chi12": (qv - 1) / (2 * (qv + 1))}
    if tag == "BC1Q":
        q0, q1 = q
        denom = (q0 + 1) * (q1 + 1)
        return {
            "surface": 1 / (2 * q1),
            "chi1": (q0 * q1 - 1) / denom,
            "chi23": abs(q0 - q1) / denom,
        }
    if tag == "A2Q":
        (qv,) = q
        return {
            "surface": 1 / (6 * qv ** 3),
            "line1": (qv - 1) ** 2 / (qv ** 2 * (qv ** 2 - 1)),
            "chi2": (qv - 1) ** 3 / (qv ** 3 - 1),
        }
    if tag == "A2P":
        (qv,) = q
        return {
            "surface": 1 / (6 * qv ** 3),
            "line1": (qv - 1) ** 2 / (qv ** 2 * (qv ** 2 - 1)),
            "chi234": (qv - 1) ** 3 / (3 * (qv ** 3 - 1)),
        }
    if tag in ("C2Q", "C2P"):
        q1, q2 = q
        out = {
            "surface": 1 / (8 * q1 ** 2 * q2 ** 2),
            "A": (q1 * q2 - 1) * (q1 * q2 ** 2 - 1)
            / (sigma1(q1) * sigma1(q2) ** 2 * sigma1(q1 * q2)),
            "B": 2 * q2 * (q1 - 1) ** 2
            / (sigma1(q2) ** 2 * sigma1(q1 / q2) * sigma1(q1 * q2)),
            "C": (q1 / q2 - 1) * (1 - q1 / q2 ** 2)
            / (sigma1(q1) * sigma1(1 / q2) ** 2 * sigma1(q1 / q2)),
        }
        if tag == "C2Q":
            out["line1"] = (q1 - 1) / (2 * q1 * q2 ** 2 * (q1 + 1))
            out["line2"] = (q2 - 1) / (2 * q1 ** 2 * q2 * (q2 + 1))
        else:
            out["line1"] = (q1 - 1) ** 2 / (4 * q1 * q2 ** 2 * (q1 ** 2 - 1))
            out["line2"] = (q2 - 1) ** 2 / (2 * q1 ** 2 * q2 * (q2 ** 2 - 1))
        return out
    if tag == "G2Q":
        q1, q2 = q
        r = math.sqrt(q1 / q2)
        rq = math.sqrt(q1 * q2)
        return {
            "surface": 1 / (12 * q1 ** 3 * q2 ** 3),
            "line1": (q1 - 1) ** 2 / (2 * q1 * q2 ** 3 * (q1 ** 2 - 1)),
            "line2": (q2 - 1) ** 2 / (2 * q1 ** 3 * q2 ** 2 * (q2 ** 2 - 1)),
            "A": (q1 * q2 ** 2 - 1) * (q1 ** 2 * q2 ** 3 - 1)
            / (sigma1(q1) * sigma1(q2) * sigma2(q2) * sigma2(q1 * q2)),
            "B+": q1 * (q1 - 1) * (q2 - 1)
            / (2 * sigma1(q1) * sigma1(q2) * sigma2(r) * sigma2(rq)),
            "B-": q1 * (q1 - 1) * (q2 - 1)
            / (2 * sigma1(q1) * sigma1(q2) * sigma2(-r) * sigma2(-rq)),
            "C": q2 * (q1 - 1) * (q1 ** 3 - 1)
            / (sigma2(q2) * sigma2(q1 / q2) * sigma2(q1 * q2)),
            "D": (1 - q1 / q2 ** 2) * (q1 ** 2 / q2 ** 3 - 1)
            / (sigma1(q1) * sigma1(1 / q2) * sigma2(1 / q2) * sigma2(q1 / q2)),
        }
    if tag == "BC2Q":
        q0, q1, q2 = q
        return {
            "surface": 1 / (8 * q1 ** 2 * q2 ** 2),
            "C1": _bc2_c1_formula(q0, q1, q2),
            "C2": -_bc2_c1_formula(1 / q0, q1, 1 / q2),
            "C3": (q2 - q0) * (q0 * q2 - 1)
            / (
                sigma1(q0 / q1)
                * sigma1(q2 / q1)
                * sigma1(q0 * q1)
                * sigma1(q1 * q2)
            ),
            "C4": _bc2_c1_formula(1 / q0, q1, q2),
            "C5": -_bc2_c1_formula(q0, q1, 1 / q2),
            "C6": (q1 - 1) / (2 * q1 * q2 ** 2 * (q1 + 1)),
            "C7": (q0 * q2 - 1) / (2 * q1 ** 2 * q2 * (q0 + 1) * (q2 + 1)),
            "C8": abs(q2 - q0) / (2 * q1 ** 2 * q2 * (q0 + 1) * (q2 + 1)),
        }
    raise ValueError(f"unsupported type tag {tag!r}")


# ---------------------------------------------------------------------------
# Quadrature and residues.

def _grid_circle(resolution: int, phase_offset: float) -> np.ndarray:
    k = np.arange(resolution)
    return np.exp(2j * np.pi * (k + phase_offset) / resolution)


def _torus_grid(dim: int, resolution: int, phase_offset: float) -> tuple:
    circle = _grid_circle(resolution, phase_offset)
    if dim == 1:
        return (circle,)
    if dim == 2:
        # The second coordinate gets a rationally independent offset so that
        # no integer combination of the two offsets is an integer; otherwise
        # coroots with coordinate sum zero would pin singular nodes onto the
        # grid for every choice of a single shared offset.
        circle2 = _grid_circle(resolution, (phase_offset * math.sqrt(3.0)) % 1.0)
        return (np.repeat(circle, resolution), np.tile(circle2, resolution))
    raise ValueError("torus dimension must be 1 or 2")


def torus_integral(fn, dim: int, resolution: int, phase_offset: float = THETA0):
    """Average of fn over a uniform N^dim grid on the torus (Haar mass 1)."""
    values = np.asarray(fn(_torus_grid(dim, resolution, phase_offset)))
    return complex(values.mean())


def residue_numeric(fn, center, radius, n: int = 512) -> complex:
    """(1/2 pi i) times the contour integral of fn around the given circle."""
    z = center + radius * np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)
    return complex(np.mean(fn(z) * (z - center)))


# ---------------------------------------------------------------------------
# Spectral terms.

@dataclass
class InducedFamily:
    """A one-torus family s -> Ind(T_i -> t_value, x^{b_k} -> xi(s)[k])."""

    datum: RootDatum
    params: Params
    i: int
    t_value: complex
    xi: object  # callable: s (scalar or array) -> tuple of x-values

    def rep_at(self, s) -> Representation:
        return induced_parabolic(
            self.datum, self.params, self.i, self.t_value, self.xi(complex(s))
        )


@dataclass
class SpectralTerm:
    """One summand of the trace decomposition.

    ``rep_family`` is ``None`` for the principal-series torus term, an
    :class:`InducedFamily` for a 1-torus family, and a fixed
    :class:`Representation` for a discrete (point mass) term.
    """

    label: str
    torus_dim: int
    mass: float
    datum: RootDatum
    params: Params
    density: FactorProduct | None = None
    rep_family: object = None
    regime_guard: str = "always"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)


def _resolve(type_tag: str, params):
    datum = datum_from_tag(type_tag)
    if not isinstance(params, Params):
        params = make_params(datum, tuple(float(v) for v in params))
    return datum, params


def _near(a: float, b: float) -> bool:
    return abs(a - b) <= EPS_REGIME * max(abs(a), abs(b))


def _calibrated(datum, params, t_values, j_mode, label):
    t = Character(tuple(t_values))
    N = n_set(datum, params, t)
    if j_mode == "full":
        J = N
    elif j_mode == "empty":
        J = set()
    elif j_mode == "alpha2":
        target = tuple(datum.simple_root(2).coroot)
        J = {j for j in N if tuple(datum.positive_roots[j].coroot) == target}
    else:
        raise ValueError(j_mode)
    rep = calibrated_module(datum, params, t, J)
    return Representation(
        datum, label, rep.dim, rep.t_mats, rep.x_mats, rep.weight_support
    )


def spectral_terms(type_tag: str, params) -> list:
    """The full term list of the trace formula for the given parameters."""
    datum, params = _resolve(type_tag, params)
    tag = datum.tag
    algebra = HeckeAlgebra(datum, params)
    cc = c_catalog(tag, params)
    K = constants(tag, params)
    cat = one_dim_catalog(datum, params)
    q = params.free

    terms = [
        SpectralTerm(
            "surface",
            datum.rank,
            1.0 / (len(datum.weyl) * algebra.q_w0()),
            datum,
            params,
            density=cc["c"],
        )
    ]

    def line(label, mass, density, i, t_value, xi, guard="always"):
        fam = InducedFamily(datum, params, i, complex(t_value), xi)
        terms.append(
            SpectralTerm(label, 1, mass, datum, params, density, fam, guard)
        )

    def point(label, mass, rep, guard="always"):
        terms.append(
            SpectralTerm(label, 0, mass, datum, params, None, rep, guard)
        )

    if tag == "A1Q":
        point("chi", K["chi"], cat["pi"])
        return terms
    if tag == "A1P":
        point("chi1", K["chi12"], cat["pi1"])
        point("chi2", K["chi12"], cat["pi2"])
        return terms
    if tag == "BC1Q":
        q0, q1 = q
        point("chi1", K["chi1"], cat["pi1"])
        if not _near(q0, q1):
            if q0 < q1:
                point("chi2", K["chi23"], cat["pi2"], "q0<q1")
            else:
                point("chi3", K["chi23"], cat["pi3"], "q1<q0")
        return terms
    if tag == "A2Q":
        (qv,) = q
        sq = qv ** 0.5
        line("chi_s1", K["line1"], cc["c1"], 1, -1 / sq, lambda s: (1 / qv, sq * s))
        point("chi2", K["chi2"], cat["pi2"])
        return terms
    if tag == "A2P":
        (qv,) = q
        sq = qv ** 0.5
        line("chi_s1", K["line1"], cc["c1"], 1, -1 / sq, lambda s: (s / sq, s * s))
        for name in ("pi2", "pi3", "pi4"):
            point("chi" + name[2:], K["chi234"], cat[name])
        return terms
    if tag == "C2Q":
        q1, q2 = q
        s1, s2 = q1 ** 0.5, q2 ** 0.5
        line("chi_s1", K["line1"], cc["c1"], 1, -1 / s1, lambda s: (1 / q1, s1 * s))
        line("chi_s2", K["line2"], cc["c2"], 2, -1 / s2, lambda s: (q2 * s, 1 / q2))
        point("chi3", K["A"], cat["pi3"])
        # The two characters split the mass of the proof's single f-value.
        point("chi4", K["B"] / 2, cat["pi4"])
        point("chi5", K["B"] / 2, cat["pi5"])
        if not (_near(q1, q2) or _near(q1, q2 ** 2)):
            if q1 < q2:
                point("chi6", abs(K["C"]), cat["pi6"], "q1<q2")
            elif q1 < q2 ** 2:
                point(
                    "chi8",
                    abs(K["C"]),
                    _calibrated(datum, params, (1 / q1, q2), "alpha2", "pi8"),
                    "q2<q1<q2^2",
                )
            else:
                point("chi7", abs(K["C"]), cat["pi7"], "q2^2<q1")
        return terms
    if tag == "C2P":
        q1, q2 = q
        s1, s2 = q1 ** 0.5, q2 ** 0.5
        line("chi_s+", K["line1"], cc["c1"], 1, -1 / s1, lambda s: (s / s1, s))
        line("chi_s-", K["line1"], cc["c1"], 1, -1 / s1, lambda s: (s / s1, -s))
        line("chi_s2", K["line2"], cc["c2"], 2, -1 / s2, lambda s: (s * s, s / s2))
        point("chi3+", K["A"] / 2, cat["pi3+"])
        point("chi3-", K["A"] / 2, cat["pi3-"])
        point(
            "chi6",
            K["B"] / 2,
            _calibrated(datum, params, (-1 / q1, 1 / s1), "empty", "pi6"),
        )
        if not (_near(q1, q2) or _near(q1, q2 ** 2)):
            half_c = abs(K["C"]) / 2
            if q1 < q2:
                point("chi4+", half_c, cat["pi4+"], "q1<q2")
                point("chi4-", half_c, cat["pi4-"], "q1<q2")
            elif q1 < q2 ** 2:
                for sign, suffix in ((1.0, "+"), (-1.0, "-")):
                    rep = _calibrated(
                        datum,
                        params,
                        (q2 / q1, sign * q2 / s1),
                        "alpha2",
                        "pi7" + suffix,
                    )
                    point("chi7" + suffix, half_c, rep, "q2<q1<q2^2")
            else:
                point("chi5+", half_c, cat["pi5+"], "q2^2<q1")
                point("chi5-", half_c, cat["pi5-"], "q2^2<q1")
        return terms
    if tag == "G2Q":
        q1, q2 = q
        s1, s2 = q1 ** 0.5, q2 ** 0.5
        line("chi_s1", K["line1"], cc["c1"], 1, -1 / s1, lambda s: (1 / q1, s1 * s))
        line(
            "chi_s2",
            K["line2"],
            cc["c2"],
            2,
            -1 / s2,
            lambda s: (q2 ** 1.5 * s, 1 / q2),
        )
        point("chi3", K["A"], cat["pi3"])
        point("chi7+", K["B+"], g2_pi7_plus(datum, params))
        point(
            "chi7-",
            K["B-"],
            _calibrated(
                datum, params, (q1, -math.sqrt(q2 / q1)), "full", "pi7-"
            ),
        )
        point(
            "chi8",
            K["C"],
            _calibrated(datum, params, (q1, OMEGA), "full", "pi8"),
        )
        if not (_near(q1, q2 ** 1.5) or _near(q1, q2 ** 2)):
            if q1 < q2 ** 1.5:
                point("chi4", abs(K["D"]), cat["pi4"], "q1<q2^3/2")
            elif q1 < q2 ** 2:
                point(
                    "chi6",
                    abs(K["D"]),
                    _calibrated(datum, params, (1 / q1, q2), "alpha2", "pi6"),
                    "q2^3/2<q1<q2^2",
                )
            else:
                point("chi5", abs(K["D"]), cat["pi5"], "q2^2<q1")
        return terms
    if tag == "BC2Q":
        q0, q1, q2 = q
        boundaries = [
            ("q0=q2", q0, q2),
            ("q1=(q0q2)^1/2", q1, math.sqrt(q0 * q2)),
            ("q1=q0q2", q1, q0 * q2),
        ]
        if q0 < q2:
            boundaries += [
                ("q1=(q2/q0)^1/2", q1, math.sqrt(q2 / q0)),
                ("q1=q2/q0", q1, q2 / q0),
            ]
        else:
            boundaries += [
                ("q1=(q0/q2)^1/2", q1, math.sqrt(q0 / q2)),
                ("q1=q0/q2", q1, q0 / q2),
            ]
        for name, a, b in boundaries:
            if _near(a, b):
                raise BoundaryParameters(
                    f"parameters sit on the uncovered boundary {name}"
                )
        a = math.sqrt(q0 * q2)
        s1, s2 = q1 ** 0.5, q2 ** 0.5
        line("chi_s1", K["C6"], cc["c1"], 1, -1 / s1, lambda s: (1 / q1, s1 * s))
        line("chi_s2", K["C7"], cc["c2"], 2, -1 / s2, lambda s: (a * s, 1 / a))
        if q0 < q2:
            line(
                "chi_s3",
                K["C8"],
                cc["c3"],
                2,
                -1 / s2,
                lambda s: (math.sqrt(q2 / q0) * s, -math.sqrt(q0 / q2)),
                "q0<q2",
            )
        else:
            line(
                "chi_s4",
                K["C8"],
                cc["c3"],
                2,
                s2,
                lambda s: (math.sqrt(q0 / q2) * s, -math.sqrt(q2 / q0)),
                "q2<q0",
            )
        point("chi5", K["C1"], cat["pi5"])
        if q1 < a:
            point("chi7", abs(K["C2"]), cat["pi7"], "q1<(q0q2)^1/2")
        elif q1 < q0 * q2:
            point(
                "chi12",
                abs(K["C2"]),
                _calibrated(datum, params, (1 / q1, a), "alpha2", "pi12"),
                "(q0q2)^1/2<q1<q0q2",
            )
        else:
            point("chi9", abs(K["C2"]), cat["pi9"], "q0q2<q1")
        if q0 < q2:
            point(
                "chi15",
                abs(K["C3"]),
                _calibrated(datum, params, (-q0, 1 / a), "empty", "pi15"),
                "q0<q2",
            )
            point("chi6", abs(K["C4"]), cat["pi6"], "q0<q2")
            if q1 < math.sqrt(q2 / q0):
                point("chi8", abs(K["C5"]), cat["pi8"], "q1<(q2/q0)^1/2")
            elif q1 < q2 / q0:
                point(
                    "chi13",
                    abs(K["C5"]),
                    _calibrated(
                        datum,
                        params,
                        (1 / q1, -math.sqrt(q2 / q0)),
                        "alpha2",
                        "pi13",
                    ),
                    "(q2/q0)^1/2<q1<q2/q0",
                )
            else:
                point("chi10", abs(K["C5"]), cat["pi10"], "q2/q0<q1")
        else:
            point(
                "chi16",
                abs(K["C3"]),
                _calibrated(datum, params, (-q2, 1 / a), "empty", "pi16"),
                "q2<q0",
            )
            point("chi10", abs(K["C5"]), cat["pi10"], "q2<q0")
            if q1 < math.sqrt(q0 / q2):
                point("chi11", abs(K["C4"]), cat["pi11"], "q1<(q0/q2)^1/2")
            elif q1 < q0 / q2:
                point(
                    "chi14",
                    abs(K["C4"]),
                    _calibrated(
                        datum,
                        params,
                        (1 / q1, -math.sqrt(q0 / q2)),
                        "alpha2",
                        "pi14",
                    ),
                    "(q0/q2)^1/2<q1<q0/q2",
                )
            else:
                point("chi6", abs(K["C4"]), cat["pi6"], "q0/q2<q1")
        return terms
    raise ValueError(f"unsupported type tag {tag!r}")


# ---------------------------------------------------------------------------
# Term evaluation.

def _as_arrays(xi, s):
    out = []
    for v in xi:
        arr = np.asarray(v, dtype=complex)
        if arr.ndim == 0:
            arr = np.full_like(s, complex(v))
        out.append(arr)
    return tuple(out)


def _surface_cache(term: SpectralTerm, resolution: int, offset: float) -> dict:
    key = (resolution, offset)
    cache = term._cache.get(key)
    if cache is not None:
        return cache
    datum, params = term.datum, term.params
    t = _torus_grid(datum.rank, resolution, offset)
    n = len(datum.weyl)

    def tpow(w_index, lam):
        # (wt)^lam = t^{w^{-1} lam}
        mu = datum.act_on_lattice(datum.weyl[datum.weyl_inv[w_index]], lam)
        return _monomial(t, mu)

    # Reject grids sampling too close to a d-factor zero.
    for root in datum.positive_roots:
        if root.cls not in ("R1", "R2"):
            continue
        for sgn in (1, -1):
            d = 1 - _monomial(t, tuple(sgn * c for c in root.coroot))
            if np.min(np.abs(d)) < EPS_NODE:
                raise SingularNode("principal series weight is singular on grid")

    weight = term.density.inverse_abs2(t)

    def a_grid(root_index, w_index):
        root = datum.positive_roots[root_index]
        qv = params.q[root.param]
        if root.cls == "R1":
            base = np.full(t[0].shape, 1 - 1 / qv, dtype=complex)
            return base
        sq0, sqn = params.sqrt_q[0], params.sqrt_q[root.param]
        v = tpow(w_index, tuple(-c for c in root.half_coroot))
        return 1 - 1 / qv + (sq0 / sqn - 1 / (sq0 * sqn)) * v

    def n_grid(root_index, w_index, invert):
        root = datum.positive_roots[root_index]
        qv = params.q[root.param]
        flip = -1 if not invert else 1
        if root.cls == "R1":
            u = tpow(w_index, tuple(flip * c for c in root.coroot))
            return 1 - u / qv
        sq0, sqn = params.sqrt_q[0], params.sqrt_q[root.param]
        v = tpow(w_index, tuple(flip * c for c in root.half_coroot))
        return (1 - v / (sq0 * sqn)) * (1 + sq0 * v / sqn)

    gens = []
    for i in range(1, datum.rank + 1):
        root_index = datum.simple_indices[i - 1]
        coroot = datum.positive_roots[root_index].coroot
        neg = tuple(-c for c in coroot)
        si = datum.simple_reflection(i)
        sq = params.sqrt_q[datum.simple_root(i).param]
        qv = params.q[datum.simple_root(i).param]
        mat = np.zeros((t[0].shape[0], n, n), dtype=complex)
        for w in datum.weyl:
            sw = datum.weyl_mult[si.index][w.index]
            d_w = 1 - tpow(w.index, neg)
            d_sw = 1 - tpow(sw, neg)
            mat[:, w.index, w.index] = sq * a_grid(root_index, w.index) / d_w
            if datum.weyl[sw].length > w.length:
                kappa = 1.0
            else:
                kappa = qv * n_grid(root_index, sw, False) * n_grid(
                    root_index, sw, True
                )
            mat[:, sw, w.index] += kappa / d_sw
        gens.append(mat)

    cache = {
        "tpow": tpow,
        "weight": weight,
        "gens": gens,
        "diag": {},
        "n": n,
    }
    term._cache[key] = cache
    return cache


def _surface_diags(term, cache, w_indices):
    """Diagonals of the tau-basis matrices of T_w over the grid."""
    datum = term.datum
    missing = [w for w in w_indices if w not in cache["diag"]]
    if missing:
        full = {(): None}  # word -> (P, n, n) matrix, None = identity

        def matrix_for(word):
            if word in full:
                return full[word]
            prefix = matrix_for(word[:-1])
            gen = cache["gens"][word[-1] - 1]
            out = gen if prefix is None else np.matmul(prefix, gen)
            full[word] = out
            return out

        idx = np.arange(cache["n"])
        for w in missing:
            word = tuple(datum.weyl[w].word)
            mat = matrix_for(word)
            if mat is None:
                diag = np.ones((cache["weight"].shape[0], cache["n"]), complex)
            else:
                diag = mat[:, idx, idx].copy()
            cache["diag"][w] = diag
    return {w: cache["diag"][w] for w in w_indices}


def _surface_values(term, keys, resolution, offset):
    cache = _surface_cache(term, resolution, offset)
    datum = term.datum
    diags = _surface_diags(term, cache, {w for w, _ in keys})
    weight = cache["weight"]
    tpow = cache["tpow"]
    by_lam = {}
    for idx, (w, lam) in enumerate(keys):
        by_lam.setdefault(tuple(lam), []).append((idx, w))
    out = np.zeros(len(keys), dtype=complex)
    for lam, entries in by_lam.items():
        if any(lam):
            pows = np.stack(
                [tpow(w.index, lam) for w in datum.weyl], axis=1
            )
        else:
            pows = None
        for idx, w in entries:
            diag = diags[w]
            if pows is None:
                chi = diag.sum(axis=1)
            else:
                chi = (diag * pows).sum(axis=1)
            out[idx] = np.mean(chi * weight)
    return out * term.mass


def _line_cache(term: SpectralTerm, resolution: int, offset: float) -> dict:
    key = (resolution, offset)
    cache = term._cache.get(key)
    if cache is not None:
        return cache
    datum, params = term.datum, term.params
    fam = term.rep_family
    s = _grid_circle(resolution, offset)
    xi = _as_arrays(fam.xi(s), s)
    algebra = HeckeAlgebra(datum, params)
    si = datum.simple_reflection(fam.i)
    reps_ = _coset_reps(datum, fam.i)
    pos = {w.index: k for k, w in enumerate(reps_)}
    dim = len(reps_)
    zero = (0,) * datum.rank

    def gen_matrix(g):
        mat = np.zeros((resolution, dim, dim), dtype=complex)
        for col, u in enumerate(reps_):
            prod = algebra.bernstein_mult(g, algebra.element(u.index, zero))
            for (v, lam), c in prod.terms.items():
                coeff = complex(c)
                vs = datum.weyl_mult[v][si.index]
                if datum.weyl[vs].length < datum.weyl[v].length:
                    row = pos[vs]
                    coeff *= fam.t_value
                else:
                    row = pos[v]
                mat[:, row, col] += coeff * _monomial(xi, lam)
        return mat

    t_mats = [gen_matrix(algebra.T(i)) for i in range(1, datum.rank + 1)]
    x_mats, x_inv = [], []
    for k in range(datum.rank):
        basis = tuple(1 if j == k else 0 for j in range(datum.rank))
        x_mats.append(gen_matrix(algebra.x(basis)))
        x_inv.append(gen_matrix(algebra.x(tuple(-b for b in basis))))
    weight = term.density.inverse_abs2((s,))
    cache = {
        "t_mats": t_mats,
        "x_mats": x_mats,
        "x_inv": x_inv,
        "weight": weight,
        "dim": dim,
        "words": {},
        "lams": {},
    }
    term._cache[key] = cache
    return cache


def _line_word_matrix(cache, word):
    if word in cache["words"]:
        return cache["words"][word]
    if not word:
        return None
    prefix = _line_word_matrix(cache, word[:-1])
    gen = cache["t_mats"][word[-1] - 1]
    out = gen if prefix is None else np.matmul(prefix, gen)
    cache["words"][word] = out
    return out


def _line_lam_matrix(cache, lam):
    lam = tuple(lam)
    if lam in cache["lams"]:
        return cache["lams"][lam]
    out = None
    for k, e in enumerate(lam):
        if not e:
            continue
        base = cache["x_mats"][k] if e > 0 else cache["x_inv"][k]
        for _ in range(abs(e)):
            out = base if out is None else np.matmul(out, base)
    cache["lams"][lam] = out
    return out


def _line_values(term, keys, resolution, offset):
    cache = _line_cache(term, resolution, offset)
    datum = term.datum
    weight = cache["weight"]
    out = np.zeros(len(keys), dtype=complex)
    for idx, (w, lam) in enumerate(keys):
        a = _line_word_matrix(cache, tuple(datum.weyl[w].word))
        b = _line_lam_matrix(cache, lam)
        if a is None and b is None:
            chi = np.full(resolution, cache["dim"], dtype=complex)
        elif a is None:
            chi = np.einsum("pii->p", b)
        elif b is None:
            chi = np.einsum("pii->p", a)
        else:
            chi = np.einsum("pij,pji->p", a, b)
        out[idx] = np.mean(chi * weight)
    return out * term.mass


def _point_values(term, keys):
    rep = term.rep_family
    out = np.zeros(len(keys), dtype=complex)
    for idx, (w, lam) in enumerate(keys):
        out[idx] = np.trace(rep.t_word_matrix(w) @ rep.x_matrix(lam))
    return out * term.mass


def _term_values(term, keys, resolution, offset):
    if term.rep_family is None:
        return _surface_values(term, keys, resolution, offset)
    if isinstance(term.rep_family, InducedFamily):
        return _line_values(term, keys, resolution, offset)
    return _point_values(term, keys)


# ---------------------------------------------------------------------------
# RHS assembly and verification.

def _monomial_keys(h: HeckeElement):
    if h.basis != "bernstein":
        raise ValueError("plancherel_rhs needs a Bernstein-basis element")
    keys = []
    coeffs = []
    for (w, lam), c in sorted(h.terms.items()):
        keys.append((w, tuple(lam)))
        coeffs.append(complex(c))
    return keys, coeffs


def plancherel_rhs(h: HeckeElement, terms, resolution: int = 256) -> dict:
    """Evaluate the spectral side on h: total and per-term breakdown."""
    keys, coeffs = _monomial_keys(h)
    last_error = None
    for offset in RETRY_OFFSETS:
        try:
            breakdown = {}
            total = 0.0 + 0.0j
            for term in terms:
                if keys:
                    values = _term_values(term, keys, resolution, offset)
                    value = complex(np.dot(np.asarray(coeffs), values))
                else:
                    value = 0.0 + 0.0j
                breakdown[term.label] = value
                total += value
            return {"total": total, "breakdown": breakdown}
        except SingularNode as exc:
            last_error = exc
    raise last_error


def verify(
    type_tag: str,
    params,
    h: HeckeElement,
    resolution: int = 256,
    element_src: str = "",
) -> dict:
    """Compare Tr(h) (exact) against the spectral side (quadrature)."""
    datum, params = _resolve(type_tag, params)
    algebra = HeckeAlgebra(datum, params)
    lhs = complex(algebra.trace(h))
    terms = spectral_terms(type_tag, params)
    rhs = plancherel_rhs(h, terms, resolution)
    total = rhs["total"]
    abs_err = abs(total - lhs)
    rel_err = abs_err / max(1.0, abs(lhs))
    return {
        "schema_version": "1",
        "type": datum.tag,
        "params": dict(zip(datum.free_parameter_names, params.free)),
        "element_src": element_src,
        "resolution": resolution,
        "lhs": {"re": lhs.real, "im": lhs.imag},
        "rhs": {"re": total.real, "im": total.imag},
        "breakdown": [
            {"label": label, "value": {"re": value.real, "im": value.imag}}
            for label, value in rhs["breakdown"].items()
        ],
        "abs_err": abs_err,
        "rel_err": rel_err,
    }


def rhs_lhs_table(
    type_tag: str,
    params,
    resolution: int = 256,
    max_length: int = 3,
    max_exponent: int = 2,
    terms=None,
) -> dict:
    """Batch comparison over all h = T_w x^lam with len(w) <= max_length and
    |lam|_inf <= max_exponent.  Returns per-element errors and the worst one."""
    datum, params = _resolve(type_tag, params)
    algebra = HeckeAlgebra(datum, params)
    if terms is None:
        terms = spectral_terms(type_tag, params)
    words = [w.index for w in datum.weyl if w.length <= max_length]
    rng = range(-max_exponent, max_exponent + 1)
    if datum.rank == 1:
        lams = [(k,) for k in rng]
    else:
        lams = [(a, b) for a in rng for b in rng]
    keys = [(w, lam) for w in words for lam in lams]
    last_error = None
    for offset in RETRY_OFFSETS:
        try:
            rhs = np.zeros(len(keys), dtype=complex)
            for term in terms:
                rhs += _term_values(term, keys, resolution, offset)
            break
        except SingularNode as exc:
            last_error = exc
    else:
        raise last_error
    rows = []
    worst = 0.0
    for (w, lam), rhs_val in zip(keys, rhs):
        lhs = complex(algebra.trace(algebra.element(w, lam)))
        err = abs(rhs_val - lhs) / max(1.0, abs(lhs))
        worst = max(worst, err)
        rows.append(
            {
                "w_index": w,
                "word": tuple(datum.weyl[w].word),
                "lam": lam,
                "lhs": lhs,
                "rhs": complex(rhs_val),
                "rel_err": err,
            }
        )
    return {"rows": rows, "worst_rel_err": worst, "resolution": resolution}


# ---------------------------------------------------------------------------
# Residue cross-checks for the constants.

def _annulus_density(cfun, pref):
    def density(z):
        return pref / (cfun.value((z,)) * cfun.value((1.0 / z,)))

    return density


def residue_constant_checks(type_tag: str, params) -> list:
    """Pairs (theorem constant, numeric residue of the matching density pole).

    Each entry records a constant of the trace formula whose proof identifies
    it with (minus) a single residue of a contour-shifted density, together
    with the numeric residue extraction.
    """
    datum, params = _resolve(type_tag, params)
    tag = datum.tag
    q = params.free
    cc = c_catalog(tag, params)
    K = constants(tag, params)
    checks = []

    def add(label, constant, cfun, pref, pole, factor=1.0):
        density = _annulus_density(cfun, pref)
        res = residue_numeric(
            lambda z: density(z) / z, pole, 0.01 * abs(pole)
        )
        checks.append(
            {
                "label": label,
                "constant": constant,
                "residue": -factor * res,
                "pole": pole,
            }
        )

    if tag == "A1Q":
        (qv,) = q
        add("chi", K["chi"], cc["c"], 1.0 / qv, 1.0 / qv)
    elif tag == "A1P":
        (qv,) = q
        add("chi1", K["chi12"], cc["c"], 1.0 / qv, qv ** -0.5)
        add("chi2", K["chi12"], cc["c"], 1.0 / qv, -(qv ** -0.5))
    elif tag == "BC1Q":
        q0, q1 = q
        add("chi1", K["chi1"], cc["c"], 1.0 / q1, (q0 * q1) ** -0.5)
        if q0 < q1:
            add("chi2", K["chi23"], cc["c"], 1.0 / q1, -((q0 / q1) ** 0.5))
        elif q1 < q0:
            add("chi3", K["chi23"], cc["c"], 1.0 / q1, -((q1 / q0) ** 0.5))
    elif tag == "A2Q":
        (qv,) = q
        add("chi2", K["chi2"], cc["c1"], K["line1"], qv ** -1.5)
    elif tag == "A2P":
        (qv,) = q
        add("chi234", K["chi234"], cc["c1"], K["line1"], qv ** -0.5)
    elif tag == "C2Q":
        q1, q2 = q
        # The point masses arise from poles crossed while shifting the
        # one-parameter family integrals; the density prefactors are the
        # line-term masses themselves.  The poles feeding A and C are crossed
        # with multiplicity two, the pole feeding B/2 with multiplicity one.
        add("A", K["A"], cc["c2"], K["line2"], 1.0 / (q1 * q2), factor=2.0)
        add("B/2", K["B"] / 2, cc["c1"], K["line1"], -(q1 ** -0.5))
        if q2 < q1:
            add("C", K["C"], cc["c2"], K["line2"], q2 / q1, factor=2.0)
    return checks
