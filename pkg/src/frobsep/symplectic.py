"""Characters and Haar integration for USp(2g) and USp(2g) x USp(2g').

Irreducible characters are evaluated through the Chebyshev form of the
Weyl determinant ratio (the sine factors of numerator and denominator
cancel), which keeps evaluation stable away from coincident eigenvalue
cosines; coincidences are resolved by a confluent limit at rank <= 2 and
by small deterministic jitters at higher rank.  Haar integrals run on
tensor-product Gauss-Legendre grids against the Weyl density, normalized
so the constant function integrates to 1 on the same grid.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Final, Iterable, Mapping

import numpy as np

from . import laurent
from .errors import NonIntegral, OrderTooSmall, PoleInput, UnsupportedModel

MIN_QUADRATURE_ORDER: Final = 8
DEFAULT_QUADRATURE_ORDER: Final = 64
MAX_TENSOR_RANK: Final = 3            # order**g quadrature nodes
INTEGRALITY_TOL: Final = 1e-3
COINCIDENCE_TOL: Final = 1e-6         # |cos t_i - cos t_j| below this is confluent
JITTER_EPS: Final = 1e-7
T_SEARCH_GRID: Final = 512

Partition = tuple[int, ...]


def _as_partition(parts: Iterable[int]) -> Partition:
    t = tuple(int(x) for x in parts)
    while t and t[-1] == 0:
        t = t[:-1]
    if any(x < 0 for x in t):
        raise ValueError(f"negative part in {parts}")
    if any(t[i] < t[i + 1] for i in range(len(t) - 1)):
        raise ValueError(f"parts must be non-increasing, got {parts}")
    return t


@dataclass(frozen=True)
class DominantWeight:
    """Highest weight of an irreducible USp(2g) representation."""

    g: int
    parts: Partition

    def __post_init__(self):
        if self.g < 1:
            raise ValueError("rank must be >= 1")
        parts = _as_partition(self.parts)
        if len(parts) > self.g:
            raise ValueError(f"partition {parts} has more than g={self.g} parts")
        object.__setattr__(self, "parts", parts)

    @property
    def degree(self) -> int:
        return sum(self.parts)


@dataclass(frozen=True)
class TorusPoint:
    """Conjugacy-class representative by eigenvalue angles, one list per factor."""

    angles: tuple[float, ...]
    angles2: tuple[float, ...] = ()

    def __post_init__(self):
        for t in self.angles + self.angles2:
            if not -1e-12 <= t <= math.pi + 1e-12:
                raise ValueError(f"angle {t} outside [0, pi]")

    def power(self, r: int) -> "TorusPoint":
        """Class of the r-th power: angles r*theta folded back into [0, pi]."""
        return TorusPoint(tuple(fold_angle(r * t) for t in self.angles),
                          tuple(fold_angle(r * t) for t in self.angles2))


def fold_angle(t: float) -> float:
    """Map an arbitrary real angle to its [0, pi] class representative."""
    return math.acos(math.cos(t))


# ---------------------------------------------------------------------------
# character evaluation


def _cheb_u(c: np.ndarray, mmax: int) -> np.ndarray:
    """Chebyshev U_0..U_mmax at c, stacked on axis 0."""
    out = np.empty((mmax + 1,) + c.shape)
    out[0] = 1.0
    if mmax >= 1:
        out[1] = 2.0 * c
    for k in range(1, mmax):
        out[k + 1] = 2.0 * c * out[k] - out[k - 1]
    return out


def _cheb_u_with_deriv(c: np.ndarray, mmax: int) -> tuple[np.ndarray, np.ndarray]:
    u = _cheb_u(c, mmax)
    du = np.zeros_like(u)
    if mmax >= 1:
        du[1] = 2.0
    for k in range(1, mmax):
        du[k + 1] = 2.0 * u[k] + 2.0 * c * du[k] - du[k - 1]
    return u, du


def _exponents(parts: Partition, g: int) -> np.ndarray:
    lam = list(parts) + [0] * (g - len(parts))
    return np.array([lam[k] + g - k for k in range(g)], dtype=np.int64)


def _char_values(parts: Partition, g: int, thetas: np.ndarray) -> np.ndarray:
    """sp_lambda at angle rows thetas (N, g); handles coincident cosines."""
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    n = thetas.shape[0]
    ell = _exponents(parts, g)
    c = np.cos(thetas)
    u = _cheb_u(c, int(ell.max()) - 1)
    if g == 1:
        return u[ell[0] - 1, :, 0]
    mat = np.empty((n, g, g))
    for k in range(g):
        mat[:, :, k] = u[ell[k] - 1]
    num = np.linalg.det(mat)
    den = np.ones(n)
    min_gap = np.full(n, np.inf)
    for i in range(g):
        for j in range(i + 1, g):
            diff = c[:, i] - c[:, j]
            den *= 2.0 * diff
            min_gap = np.minimum(min_gap, np.abs(diff))
    out = np.empty(n)
    ok = min_gap > COINCIDENCE_TOL
    out[ok] = num[ok] / den[ok]
    bad = ~ok
    if bad.any():
        if g == 2:
            out[bad] = _confluent_rank2(ell, c[bad])
        else:
            out[bad] = _jittered(parts, g, thetas[bad])
    return out


def _confluent_rank2(ell: np.ndarray, c: np.ndarray) -> np.ndarray:
    # limit of the determinant ratio as the two cosines merge (Wronskian form)
    cbar = 0.5 * (c[:, 0] + c[:, 1])
    u, du = _cheb_u_with_deriv(cbar, int(ell.max()) - 1)
    l1, l2 = ell[0] - 1, ell[1] - 1
    return 0.5 * (du[l1] * u[l2] - u[l1] * du[l2])


def _jittered(parts: Partition, g: int, thetas: np.ndarray) -> np.ndarray:
    # rank >= 3 fallback: average over three deterministic angle perturbations
    rng = np.random.default_rng(0x5EED)
    acc = np.zeros(thetas.shape[0])
    for _ in range(3):
        shift = JITTER_EPS * rng.uniform(-1.0, 1.0, size=thetas.shape)
        jt = thetas + shift
        ell = _exponents(parts, g)
        c = np.cos(jt)
        u = _cheb_u(c, int(ell.max()) - 1)
        mat = np.empty((thetas.shape[0], g, g))
        for k in range(g):
            mat[:, :, k] = u[ell[k] - 1]
        den = np.ones(thetas.shape[0])
        for i in range(g):
            for j in range(i + 1, g):
                den *= 2.0 * (c[:, i] - c[:, j])
        acc += np.linalg.det(mat) / den
    return acc / 3.0


def char_value(weight: DominantWeight, point: TorusPoint) -> float:
    """Evaluate the irreducible character at a torus point of the same rank."""
    if len(point.angles) != weight.g:
        raise ValueError(f"point has {len(point.angles)} angles, weight rank {weight.g}")
    return float(_char_values(weight.parts, weight.g, np.array([point.angles]))[0])


def dimension(weight: DominantWeight) -> int:
    """Weyl dimension formula for type C."""
    return laurent.dimension_exact(weight.parts, weight.g)


# ---------------------------------------------------------------------------
# Haar-measure quadrature


@lru_cache(maxsize=None)
def _grid(g: int, order: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Tensor Gauss-Legendre nodes on [0, pi]^g with Weyl-density weights.

    Returns (thetas (N, g), weight*density (N,), normalization); the
    normalization makes the constant function integrate to exactly 1.
    """
    if order < MIN_QUADRATURE_ORDER:
        raise OrderTooSmall(f"quadrature order {order} < {MIN_QUADRATURE_ORDER}")
    if g > MAX_TENSOR_RANK:
        raise UnsupportedModel(f"tensor quadrature supports rank <= {MAX_TENSOR_RANK}")
    x, w = np.polynomial.legendre.leggauss(order)
    t = 0.5 * math.pi * (x + 1.0)
    wt = 0.5 * math.pi * w
    thetas = np.array(list(itertools.product(t, repeat=g)))
    weights = np.array([math.prod(ws) for ws in itertools.product(wt, repeat=g)])
    cos = np.cos(thetas)
    dens = np.prod(4.0 * np.sin(thetas) ** 2, axis=1)
    for i in range(g):
        for j in range(i + 1, g):
            dens = dens * (2.0 * cos[:, i] - 2.0 * cos[:, j]) ** 2
    wd = weights * dens
    return thetas, wd, float(wd.sum())


@lru_cache(maxsize=None)
def _char_on_grid(g: int, parts: Partition, order: int) -> np.ndarray:
    thetas, _, _ = _grid(g, order)
    values = _char_values(parts, g, thetas)
    values.setflags(write=False)
    return values


def weyl_integrate(f: Callable[[TorusPoint], float], g: int,
                   order: int = DEFAULT_QUADRATURE_ORDER) -> float:
    """Haar integral of a class function on USp(2g) given by point evaluation."""
    thetas, wd, norm = _grid(g, order)
    vals = np.array([f(TorusPoint(tuple(row))) for row in thetas])
    return float(np.dot(wd, vals) / norm)


@lru_cache(maxsize=None)
def _pair_integral(g: int, p1: Partition, p2: Partition, order: int) -> float:
    _, wd, norm = _grid(g, order)
    v1 = _char_on_grid(g, p1, order)
    v2 = v1 if p2 == p1 else _char_on_grid(g, p2, order)
    return float(np.dot(wd, v1 * v2) / norm)


# ---------------------------------------------------------------------------
# virtual characters

TermKey = tuple[Partition, ...]


def _canonical_terms(terms: Mapping, nfactors: int) -> dict[TermKey, int]:
    out: dict[TermKey, int] = {}
    for key, coeff in terms.items():
        coeff = int(coeff)
        if coeff == 0:
            continue
        if nfactors == 1 and (not key or isinstance(key[0], int)):
            key = (key,)
        if len(key) != nfactors:
            raise ValueError(f"term key {key} does not match {nfactors} factor(s)")
        ck = tuple(_as_partition(p) for p in key)
        out[ck] = out.get(ck, 0) + coeff
    return {k: c for k, c in out.items() if c}


@dataclass(frozen=True)
class AnalyticMetadata:
    """Size data used by the explicit-formula error terms."""

    d_chi: int
    delta: int
    w_chi: int
    t_chi: float
    gamma_chi_bound: int
    n_chi_bound: int
    b_bound: tuple[int | None, int]   # (conductor if declared, exponent)


@dataclass(frozen=True)
class VirtualCharacter:
    """Integer combination of irreducible characters of one or two factors."""

    gs: tuple[int, ...]
    terms: Mapping[TermKey, int]
    metadata: AnalyticMetadata | None = field(default=None, compare=False)
    # set when the character is a box product of per-factor combinations
    box_factors: tuple[Mapping[Partition, int], ...] | None = field(
        default=None, compare=False)

    def __post_init__(self):
        if len(self.gs) not in (1, 2):
            raise ValueError("only one or two symplectic factors are supported")
        object.__setattr__(self, "terms", _canonical_terms(self.terms, len(self.gs)))

    @property
    def is_product_group(self) -> bool:
        return len(self.gs) == 2

    def value(self, point: TorusPoint) -> float:
        angle_sets = (point.angles, point.angles2)[: len(self.gs)]
        for g, angles in zip(self.gs, angle_sets):
            if len(angles) != g:
                raise ValueError("torus point rank mismatch")
        total = 0.0
        for key, coeff in self.terms.items():
            prod = float(coeff)
            for g, parts, angles in zip(self.gs, key, angle_sets):
                prod *= float(_char_values(parts, g, np.array([angles]))[0])
            total += prod
        return total

    def __add__(self, other: "VirtualCharacter") -> "VirtualCharacter":
        if self.gs != other.gs:
            raise ValueError("cannot add characters of different groups")
        merged = dict(self.terms)
        for k, c in other.terms.items():
            merged[k] = merged.get(k, 0) + c
        return VirtualCharacter(self.gs, merged)

    def __neg__(self) -> "VirtualCharacter":
        return VirtualCharacter(self.gs, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "VirtualCharacter") -> "VirtualCharacter":
        return self + (-other)

    def scaled(self, k: int) -> "VirtualCharacter":
        return VirtualCharacter(self.gs, {key: k * c for key, c in self.terms.items()})

    @property
    def total_dimension(self) -> int:
        """d_chi: dimensions of positive and negative parts added."""
        total = 0
        for key, coeff in self.terms.items():
            d = 1
            for g, parts in zip(self.gs, key):
                d *= laurent.dimension_exact(parts, g)
            total += abs(coeff) * d
        return total

    @property
    def trivial_coefficient(self) -> int:
        return self.terms.get(tuple(() for _ in self.gs), 0)

    @property
    def max_degree(self) -> int:
        return max((sum(sum(p) for p in key) for key in self.terms), default=0)

    def to_json(self) -> dict:
        doc: dict = {"g": self.gs[0], "terms": []}
        if self.is_product_group:
            doc["g2"] = self.gs[1]
        for key, coeff in sorted(self.terms.items()):
            entry = {"lambda": list(key[0]), "coeff": coeff}
            if self.is_product_group:
                entry["mu"] = list(key[1])
            doc["terms"].append(entry)
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "VirtualCharacter":
        g = int(doc["g"])
        g2 = doc.get("g2")
        gs = (g,) if g2 is None else (g, int(g2))
        terms: dict[TermKey, int] = {}
        for entry in doc["terms"]:
            lam = _as_partition(entry["lambda"])
            key: TermKey = (lam,) if g2 is None else (lam, _as_partition(entry.get("mu", [])))
            terms[key] = terms.get(key, 0) + int(entry["coeff"])
        return cls(gs, terms)

    @classmethod
    def from_path(cls, path) -> "VirtualCharacter":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def trivial_char(g: int) -> VirtualCharacter:
    return VirtualCharacter((g,), {((),): 1})


def tautological_char(g: int) -> VirtualCharacter:
    return VirtualCharacter((g,), {((1,),): 1})


def tensor_square_char(g: int) -> VirtualCharacter:
    """V (x) V decomposed into irreducibles: Sym^2 V + (sp(1,1) + 1)."""
    terms = {((2,),): 1, ((),): 1}
    if g >= 2:
        terms[((1, 1),)] = 1
    return VirtualCharacter((g,), terms)


def sym2_char(g: int) -> VirtualCharacter:
    return VirtualCharacter((g,), {((2,),): 1})


def box_product(chi1: VirtualCharacter, chi2: VirtualCharacter) -> VirtualCharacter:
    """External product of two single-factor characters."""
    if chi1.is_product_group or chi2.is_product_group:
        raise ValueError("box product takes single-factor characters")
    terms = {}
    for (p1,), c1 in chi1.terms.items():
        for (p2,), c2 in chi2.terms.items():
            terms[(p1, p2)] = terms.get((p1, p2), 0) + c1 * c2
    out = VirtualCharacter((chi1.gs[0], chi2.gs[0]), terms)
    object.__setattr__(out, "box_factors", (
        {p: c for (p,), c in chi1.terms.items()},
        {p: c for (p,), c in chi2.terms.items()},
    ))
    return out


# ---------------------------------------------------------------------------
# inner products and multiplicities


def _round_gate(raw: float, context: str) -> int:
    nearest = round(raw)
    if abs(raw - nearest) > INTEGRALITY_TOL:
        raise NonIntegral(f"{context}: raw value {raw!r} is not near an integer")
    return int(nearest)


def inner_product_raw(chi1: VirtualCharacter, chi2: VirtualCharacter,
                      order: int = DEFAULT_QUADRATURE_ORDER) -> float:
    """Haar inner product before integer rounding (selfdual characters)."""
    if chi1.gs != chi2.gs:
        raise ValueError("characters live on different groups")
    total = 0.0
    for key1, c1 in chi1.terms.items():
        for key2, c2 in chi2.terms.items():
            prod = float(c1 * c2)
            for g, p1, p2 in zip(chi1.gs, key1, key2):
                prod *= _pair_integral(g, p1, p2, order)
            total += prod
    return total


def inner_product(chi1: VirtualCharacter, chi2: VirtualCharacter,
                  order: int = DEFAULT_QUADRATURE_ORDER) -> int:
    return _round_gate(inner_product_raw(chi1, chi2, order), "inner product")


def trivial_multiplicity(chi: VirtualCharacter,
                         order: int = DEFAULT_QUADRATURE_ORDER) -> int:
    """Multiplicity of the trivial representation, by quadrature."""
    if chi.is_product_group:
        triv = VirtualCharacter(chi.gs, {((), ()): 1})
    else:
        triv = trivial_char(chi.gs[0])
    return inner_product(chi, triv, order)


def trivial_multiplicity_exact(chi: VirtualCharacter) -> int:
    """Exact antisymmetrization path, independent of all quadrature."""
    if not chi.is_product_group:
        poly: laurent.LaurentPoly = {}
        g = chi.gs[0]
        for (parts,), coeff in chi.terms.items():
            poly = laurent.add(poly, laurent.scale(_sp_poly(parts, g), coeff))
        return laurent.trivial_multiplicity_exact(poly, g)
    total = 0
    for key, coeff in chi.terms.items():
        prod = coeff
        for g, parts in zip(chi.gs, key):
            prod *= laurent.trivial_multiplicity_exact(_sp_poly(parts, g), g)
        total += prod
    return total


def psi_delta_exact(g: int, g2: int) -> int:
    """delta(psi) from the raw product definition, no decomposition involved.

    Expands V*V -/+ 2g*V as Laurent polynomials straight from the
    tautological trace and antisymmetrizes; the product-group Haar measure
    factors, so the two trivial multiplicities multiply.
    """
    out = 1
    for rank, sign in ((g, -1), (g2, +1)):
        v = laurent.tautological(rank)
        factor = laurent.add(laurent.mul(v, v), laurent.scale(v, sign * 2 * rank))
        out *= laurent.trivial_multiplicity_exact(factor, rank)
    return out


@lru_cache(maxsize=None)
def _sp_poly(parts: Partition, g: int) -> "laurent.LaurentPoly":
    """Exact Laurent polynomial of sp_lambda by unitriangular orbit-sum reduction."""
    padded = tuple(parts) + (0,) * (g - len(parts))
    orbit = set()
    for perm in itertools.permutations(padded):
        for signs in itertools.product((1, -1), repeat=g):
            orbit.add(tuple(s * p for s, p in zip(signs, perm)))
    poly = {e: 1 for e in orbit}
    dec = laurent.decompose(poly, g)
    if dec.get(parts) != 1:
        raise ArithmeticError(f"orbit sum of {parts} is not unitriangular")
    for lam, c in dec.items():
        if lam == parts or c == 0:
            continue
        poly = laurent.add(poly, laurent.scale(_sp_poly(lam, g), -c))
    return poly


# ---------------------------------------------------------------------------
# the separating virtual character psi


def _psi_factor_terms(g: int, sign: int) -> dict[Partition, int]:
    """Decomposition of V(x)V + sign*2g*V into irreducibles."""
    terms: dict[Partition, int] = {(2,): 1, (): 1, (1,): sign * 2 * g}
    if g >= 2:
        terms[(1, 1)] = 1
    return terms


@lru_cache(maxsize=None)
def psi_character(g: int, g2: int) -> VirtualCharacter:
    """Separator character (V^(-2g) + V(x)V) box (V'^(+2g') + V'(x)V').

    Evaluates to t*(t - 2g) * t'*(t' + 2g') at factor traces (t, t'), which
    is positive exactly when the two traces have strictly opposite signs
    inside the Weil box.
    """
    if g < 1 or g2 < 1:
        raise ValueError("factor ranks must be >= 1")
    f1 = _psi_factor_terms(g, -1)
    f2 = _psi_factor_terms(g2, +1)
    chi = box_product(VirtualCharacter((g,), {(p,): c for p, c in f1.items()}),
                      VirtualCharacter((g2,), {(p,): c for p, c in f2.items()}))
    d_chi = chi.total_dimension
    t_chi = character_max(chi)
    meta = AnalyticMetadata(
        d_chi=d_chi,
        delta=chi.trivial_coefficient,
        w_chi=2,
        t_chi=t_chi,
        gamma_chi_bound=d_chi,
        n_chi_bound=max(math.ceil(t_chi), d_chi),
        b_bound=(None, d_chi),
    )
    object.__setattr__(chi, "metadata", meta)
    return chi


def _factor_range(terms: Mapping[Partition, int], g: int) -> tuple[float, float]:
    chi = VirtualCharacter((g,), {(p,): c for p, c in terms.items()})
    return (-_max_on_group(lambda th: -_virtual_values(chi, th), g),
            _max_on_group(lambda th: _virtual_values(chi, th), g))


def _virtual_values(chi: VirtualCharacter, thetas: np.ndarray) -> np.ndarray:
    g = chi.gs[0]
    out = np.zeros(np.atleast_2d(thetas).shape[0])
    for (parts,), coeff in chi.terms.items():
        out = out + coeff * _char_values(parts, g, thetas)
    return out


def _max_on_group(values_fn, g: int, grid: int = T_SEARCH_GRID) -> float:
    """Grid search on [0, pi]^g refined by bounded local ascent."""
    from scipy import optimize

    axis = np.linspace(0.0, math.pi, grid)
    thetas = np.array(list(itertools.product(axis, repeat=g)))
    vals = values_fn(thetas)
    best = int(np.argmax(vals))
    x0 = thetas[best]
    res = optimize.minimize(
        lambda th: -float(values_fn(np.array([th]))[0]),
        x0, method="L-BFGS-B", bounds=[(0.0, math.pi)] * g)
    return max(float(vals[best]), float(-res.fun))


def character_max(chi: VirtualCharacter, grid: int = T_SEARCH_GRID) -> float:
    """t_chi: maximum of the character over the group (lower-bound estimate)."""
    if chi.is_product_group:
        if chi.box_factors is None:
            raise UnsupportedModel(
                "t_chi for non-factorizable product-group characters is not computed")
        (f1, f2) = chi.box_factors
        lo1, hi1 = _factor_range(f1, chi.gs[0])
        lo2, hi2 = _factor_range(f2, chi.gs[1])
        return max(a * b for a in (lo1, hi1) for b in (lo2, hi2))
    return _max_on_group(lambda th: _virtual_values(chi, th), chi.gs[0], grid)


def virtual_metadata(chi: VirtualCharacter, conductor: int | None = None,
                     grid: int = T_SEARCH_GRID) -> AnalyticMetadata:
    """Generic metadata for a virtual character from its term decomposition."""
    d_chi = chi.total_dimension
    t_chi = character_max(chi, grid)
    w_chi = chi.max_degree
    return AnalyticMetadata(
        d_chi=d_chi,
        delta=chi.trivial_coefficient,
        w_chi=w_chi,
        t_chi=t_chi,
        gamma_chi_bound=d_chi,
        n_chi_bound=max(math.ceil(t_chi), d_chi),
        b_bound=(conductor, d_chi),
    )


def weight_metadata(weight: DominantWeight,
                    conductor: int | None = None) -> AnalyticMetadata:
    """Metadata of an honest irreducible: t = gamma = n = d."""
    d = dimension(weight)
    return AnalyticMetadata(
        d_chi=d,
        delta=1 if weight.degree == 0 else 0,
        w_chi=weight.degree,
        t_chi=float(d),
        gamma_chi_bound=d,
        n_chi_bound=d,
        b_bound=(conductor, d),
    )


# ---------------------------------------------------------------------------
# Adams operation and Frobenius-Schur indicators


def adams2(chi: VirtualCharacter,
           order: int = DEFAULT_QUADRATURE_ORDER) -> VirtualCharacter:
    """Square Adams operation: the virtual character theta -> chi(2*theta).

    Equal to Sym^2(chi) - Alt^2(chi); realized through the exact Laurent
    substitution z -> z^2 at rank <= 4 and by quadrature decomposition at
    higher rank.  Metadata follows the doubling transform for irreducible
    inputs with known metadata.
    """
    factor_maps: list[dict[Partition, dict[Partition, int]]] = []
    for pos, g in enumerate(chi.gs):
        needed = sorted({key[pos] for key in chi.terms})
        factor_maps.append({p: _adams2_of_weight(p, g, order) for p in needed})
    terms: dict[TermKey, int] = {}
    for key, coeff in chi.terms.items():
        expanded: list[tuple[TermKey, int]] = [((), coeff)]
        for pos in range(len(chi.gs)):
            expanded = [
                (prefix + (p2,), c * c2)
                for prefix, c in expanded
                for p2, c2 in factor_maps[pos][key[pos]].items()
            ]
        for full_key, c in expanded:
            terms[full_key] = terms.get(full_key, 0) + c
    out = VirtualCharacter(chi.gs, terms)
    if chi.metadata is not None and _is_irreducible(chi):
        object.__setattr__(out, "metadata", adams2_metadata(chi.metadata, out))
    return out


def _is_irreducible(chi: VirtualCharacter) -> bool:
    return len(chi.terms) == 1 and next(iter(chi.terms.values())) == 1


def _adams2_of_weight(parts: Partition, g: int,
                      order: int) -> dict[Partition, int]:
    if g <= laurent.MAX_EXACT_RANK:
        doubled = laurent.power_substitution(_sp_poly(parts, g), 2)
        return laurent.decompose(doubled, g)
    return _decompose_by_quadrature(
        lambda th: _char_values(parts, g, 2.0 * th), g, 2 * sum(parts), order)


def _decompose_by_quadrature(values_fn, g: int, max_degree: int,
                             order: int) -> dict[Partition, int]:
    thetas, wd, norm = _grid(g, order)
    vals = values_fn(thetas)
    out: dict[Partition, int] = {}
    for lam in laurent.partitions_upto(max_degree, g):
        ip = float(np.dot(wd, vals * _char_on_grid(g, lam, order)) / norm)
        c = _round_gate(ip, f"multiplicity of {lam}")
        if c:
            out[lam] = c
    return out


def adams2_metadata(meta: AnalyticMetadata,
                    doubled: VirtualCharacter) -> AnalyticMetadata:
    """Doubling transform: t = d, w doubles, gamma bound 2d, conductor ~ 2B^2."""
    n, _ = meta.b_bound
    return AnalyticMetadata(
        d_chi=doubled.total_dimension,
        delta=doubled.trivial_coefficient,
        w_chi=2 * meta.w_chi,
        t_chi=float(meta.d_chi),
        gamma_chi_bound=2 * meta.d_chi,
        n_chi_bound=2 * meta.d_chi,
        b_bound=(n, 2 * meta.d_chi),
    )


def fs_indicator(weight: DominantWeight,
                 order: int = DEFAULT_QUADRATURE_ORDER) -> int:
    """Frobenius-Schur indicator: Haar integral of chi at squared elements."""
    thetas, wd, norm = _grid(weight.g, order)
    vals = _char_values(weight.parts, weight.g, 2.0 * thetas)
    raw = float(np.dot(wd, vals) / norm)
    return _round_gate(raw, f"FS indicator of {weight.parts}")


# ---------------------------------------------------------------------------
# Gamma-function self test


def duplication_check(s: complex) -> float:
    """Relative deviation of Gamma(2s) from the Legendre duplication product.

    Exercises the Lanczos-backed Gamma evaluation used for metadata
    transforms; values should sit at rounding level away from poles.
    """
    from scipy.special import gamma

    for pole_test in (2 * s, s, s + 0.5):
        z = complex(pole_test)
        if abs(z.imag) < 1e-12 and z.real <= 0 and abs(z.real - round(z.real)) < 1e-12:
            raise PoleInput(f"{s} hits a Gamma pole")
    lhs = gamma(2 * s)
    rhs = gamma(s) * gamma(s + 0.5) * 2 ** (2 * s - 1) / math.sqrt(math.pi)
    return abs(lhs - rhs) / abs(lhs)
