"""
vector_hulls.py – exact positive-hull / convex-hull membership
==============================================================

Rational-vector things (gambles, lotteries, horse lotteries) and the exact
feasibility tests behind the traced ``posi`` and ``chull`` operators.

    posi   ∃ λ ≥ 0, λ ≠ 0 :  Σ λ_i g_i = target
    chull  ∃ λ ≥ 0, Σ λ_i = 1 :  Σ λ_i g_i = target

Two exact deciders share the work: Fourier–Motzkin elimination for up to
``FM_MAX_GENERATORS`` generators, a two-phase simplex with Bland's rule beyond.
All arithmetic is ``fractions.Fraction`` held in numpy object arrays.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, WrongPayload
from .things import Assessment, ThingSet, Universe, bits, parse_rational
from .verdicts import Certificate, Verdict

logger = logging.getLogger(__name__)

FM_MAX_GENERATORS = 6
ZERO = Fraction(0)
ONE = Fraction(1)

# ────────────────────────────────────────────────────────────────
# 0.  Shared utilities
# ────────────────────────────────────────────────────────────────
def as_vector(values: Sequence[object]) -> np.ndarray:
    """Exact rational vector as a 1-d object array."""
    return np.array([parse_rational(v) for v in values], dtype=object)


def _zeros(shape: Tuple[int, ...]) -> np.ndarray:
    return np.full(shape, ZERO, dtype=object)


def _prepare(target: Sequence[object], generators: Sequence[Sequence[object]]) -> Tuple[np.ndarray, np.ndarray]:
    t = as_vector(target)
    unique: List[Tuple[Fraction, ...]] = []
    for g in generators:
        vec = tuple(parse_rational(v) for v in g)
        if len(vec) != len(t):
            raise DimensionMismatch(f"generator of length {len(vec)} against target of length {len(t)}")
        if vec not in unique:
            unique.append(vec)
    G = np.array(unique, dtype=object).reshape(len(unique), len(t))
    return t, G


# ────────────────────────────────────────────────────────────────
# 1.  Fourier–Motzkin
# ────────────────────────────────────────────────────────────────
def _fm_feasible(rows: np.ndarray) -> bool:
    """Decide ``∃x : rows[:, :-1] · x ≤ rows[:, -1]`` by eliminating every variable."""
    n = rows.shape[1] - 1
    for j in range(n):
        if rows.shape[0] == 0:
            return True
        col = rows[:, j]
        pos = np.array([v > 0 for v in col], dtype=bool)
        neg = np.array([v < 0 for v in col], dtype=bool)
        keep = rows[~(pos | neg)]
        if pos.any() and neg.any():
            P = rows[pos] / rows[pos][:, j : j + 1]
            N = rows[neg] / -rows[neg][:, j : j + 1]
            combined = (P[:, None, :] + N[None, :, :]).reshape(-1, n + 1)
            rows = np.vstack([keep, combined]) if keep.shape[0] else combined
        else:
            rows = keep  # unbounded direction: those rows can always be met
        rows = _fm_prune(rows, j + 1)
        if rows is None:
            return False
    return bool(all(r[-1] >= 0 for r in rows))


def _fm_prune(rows: np.ndarray, eliminated: int) -> Optional[np.ndarray]:
    """Drop duplicate and trivially true rows; ``None`` on ``0 ≤ negative``."""
    width = rows.shape[1]
    seen = set()
    kept = []
    for r in rows:
        coeffs = r[eliminated:-1]
        if all(c == 0 for c in coeffs):
            if r[-1] < 0:
                return None
            continue
        scale = max(abs(c) for c in coeffs)
        key = tuple(v / scale for v in r)
        if key not in seen:
            seen.add(key)
            kept.append(key)
    if not kept:
        return np.empty((0, width), dtype=object)
    return np.array(kept, dtype=object).reshape(len(kept), width)


def _fm_member(t: np.ndarray, G: np.ndarray, kind: str) -> bool:
    k, d = G.shape
    eq_rows: List[List[Fraction]] = []
    for j in range(d):
        eq_rows.append(list(G[:, j]) + [t[j]])
    if kind == "chull" or all(v == 0 for v in t):
        eq_rows.append([ONE] * k + [ONE])  # Σλ = 1 (normalises the cone at 0)
    rows: List[List[Fraction]] = []
    for r in eq_rows:
        rows.append(r)
        rows.append([-v for v in r])
    for i in range(k):
        rows.append([-ONE if j == i else ZERO for j in range(k)] + [ZERO])
    return _fm_feasible(np.array(rows, dtype=object).reshape(len(rows), k + 1))


# ────────────────────────────────────────────────────────────────
# 2.  Exact two-phase simplex (Bland's rule)
# ────────────────────────────────────────────────────────────────
def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r, :] = T[r, :] / T[r, c]
    for i in range(T.shape[0]):
        if i != r and T[i, c] != 0:
            T[i, :] = T[i, :] - T[i, c] * T[r, :]


def _bland(T: np.ndarray, basis: List[int], columns: int) -> str:
    m = T.shape[0] - 1
    while True:
        entering = next((j for j in range(columns) if T[m, j] < 0), None)
        if entering is None:
            return "optimal"
        ratios = [(T[i, -1] / T[i, entering], basis[i], i) for i in range(m) if T[i, entering] > 0]
        if not ratios:
            return "unbounded"
        _, _, r = min(ratios)
        _pivot(T, r, entering)
        basis[r] = entering


def simplex_maximize(c: np.ndarray, A: np.ndarray, b: np.ndarray) -> Tuple[str, Optional[Fraction]]:
    """max c·x  s.t.  A x = b, x ≥ 0  →  (status, value).

    status ∈ {"optimal", "infeasible", "unbounded"}; value is ``None`` unless optimal.
    """
    A = np.array(A, dtype=object)
    b = np.array(b, dtype=object)
    m, n = A.shape
    if m == 0:
        return ("unbounded", None) if any(v > 0 for v in c) else ("optimal", ZERO)
    for i in range(m):
        if b[i] < 0:
            A[i, :] = -A[i, :]
            b[i] = -b[i]

    # phase I: artificials a ≥ 0, maximise −Σa
    T = _zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    for i in range(m):
        T[i, n + i] = ONE
    T[:m, -1] = b
    for j in range(n):
        T[m, j] = -sum(A[:, j], ZERO)
    T[m, -1] = -sum(b, ZERO)
    basis = list(range(n, n + m))
    _bland(T, basis, n)
    if T[m, -1] != 0:
        return "infeasible", None

    # drive degenerate artificials out of the basis, dropping redundant rows
    redundant = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i, j] != 0), None)
            if col is None:
                redundant.append(i)
            else:
                _pivot(T, i, col)
                basis[i] = col
    if redundant:
        T = np.delete(T, redundant, axis=0)
        basis = [v for i, v in enumerate(basis) if i not in redundant]
    T = np.delete(T, list(range(n, n + m)), axis=1)

    # phase II
    rows = T.shape[0] - 1
    T[rows, :] = ZERO
    for j in range(n):
        T[rows, j] = -c[j]
    for i, var in enumerate(basis):
        if T[rows, var] != 0:
            T[rows, :] = T[rows, :] - T[rows, var] * T[i, :]
    if _bland(T, basis, n) == "unbounded":
        return "unbounded", None
    return "optimal", T[rows, -1]


def _simplex_member(t: np.ndarray, G: np.ndarray, kind: str) -> bool:
    k, d = G.shape
    GT = G.T
    if kind == "chull":
        A = np.vstack([GT, np.array([[ONE] * k], dtype=object)])
        b = np.concatenate([t, np.array([ONE], dtype=object)])
        status, _ = simplex_maximize(_zeros((k,)), A, b)
        return status != "infeasible"
    if any(v != 0 for v in t):
        status, _ = simplex_maximize(_zeros((k,)), GT, t)
        return status != "infeasible"
    # target 0: max Σλ over Gλ = 0, 0 ≤ λ ≤ 1 (slacks s with λ + s = 1)
    top = np.hstack([GT, _zeros((d, k))])
    eye = np.array([[ONE if i == j else ZERO for j in range(k)] for i in range(k)], dtype=object)
    A = np.vstack([top, np.hstack([eye, eye])])
    b = np.concatenate([_zeros((d,)), np.array([ONE] * k, dtype=object)])
    c = np.concatenate([np.array([ONE] * k, dtype=object), _zeros((k,))])
    status, value = simplex_maximize(c, A, b)
    return status == "optimal" and value is not None and value > 0


# ────────────────────────────────────────────────────────────────
# 3.  Public membership tests
# ────────────────────────────────────────────────────────────────
_METHODS: Dict[str, Callable[[np.ndarray, np.ndarray, str], bool]] = {
    "fourier_motzkin": _fm_member,
    "simplex": _simplex_member,
}


def _member(kind: str, target, generators, method: str) -> bool:
    t, G = _prepare(target, generators)
    if G.shape[0] == 0:
        return False
    if method == "auto":
        method = "fourier_motzkin" if G.shape[0] <= FM_MAX_GENERATORS else "simplex"
    try:
        decide = _METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
    return decide(t, G, kind)


def member_positive_hull(target, generators, method: str = "auto") -> bool:
    """``target ∈ posi(generators)``: a nontrivial nonnegative combination."""
    return _member("posi", target, generators, method)


def member_convex_hull(target, generators, method: str = "auto") -> bool:
    """``target ∈ chull(generators)``."""
    return _member("chull", target, generators, method)


HULL_TESTS: Dict[str, Callable[..., bool]] = {
    "posi": member_positive_hull,
    "chull": member_convex_hull,
}

# ────────────────────────────────────────────────────────────────
# 4.  Assessment presets & horse lotteries
# ────────────────────────────────────────────────────────────────
def _require_vectors(universe: Universe) -> None:
    if universe.payload_kind != "rational_vector":
        raise WrongPayload(f"needs rational_vector things, got {universe.payload_kind}")


def _grid(universe: Universe, i: int) -> np.ndarray:
    vec = np.array(universe.vector(i), dtype=object)
    if universe.grid is None:
        return vec.reshape(1, -1)
    states, prizes = universe.grid
    return vec.reshape(len(states), len(prizes))


def _prizes(universe: Universe) -> Tuple[str, ...]:
    return universe.grid[1] if universe.grid is not None else universe.coordinates


def _degenerate_on(universe: Universe, i: int, prize: str) -> bool:
    prizes = _prizes(universe)
    if prize not in prizes:
        raise WrongPayload(f"unknown prize {prize!r}")
    col = prizes.index(prize)
    return all(row[col] == 1 for row in _grid(universe, i))


PRESETS = ("gambles_default", "gambles_inf_positive", "lottery", "none")


def preset_assessment(
    universe: Universe,
    preset: str,
    positive_prizes: Sequence[str] = (),
    negative_prizes: Sequence[str] = (),
) -> Assessment:
    """A_not / A_des by scanning the catalog against a named predicate.

    • gambles_default       A_not = {f ≤ 0},  A_des = {f ≥ 0, some f(x) > 0}
    • gambles_inf_positive  A_not = {f ≤ 0},  A_des = {inf f > 0}
    • lottery               degenerate lotteries on the named prizes
    • none                  empty assessment
    """
    _require_vectors(universe)
    not_mask = des_mask = 0
    for i in range(universe.size):
        f = universe.vector(i)
        if preset in ("gambles_default", "gambles_inf_positive"):
            if all(v <= 0 for v in f):
                not_mask |= 1 << i
            if preset == "gambles_default":
                if all(v >= 0 for v in f) and any(v > 0 for v in f):
                    des_mask |= 1 << i
            elif min(f) > 0:
                des_mask |= 1 << i
        elif preset == "lottery":
            if any(_degenerate_on(universe, i, r) for r in positive_prizes):
                des_mask |= 1 << i
            if any(_degenerate_on(universe, i, r) for r in negative_prizes):
                not_mask |= 1 << i
        elif preset != "none":
            raise ValueError(f"unknown preset {preset!r}; expected one of {PRESETS}")
    logger.debug("preset %s: A_not=%s A_des=%s", preset, universe.ids_of(not_mask), universe.ids_of(des_mask))
    return Assessment(ThingSet(universe, not_mask), ThingSet(universe, des_mask))


def validate_horse_lottery(universe: Universe) -> Verdict:
    """Every payload nonnegative with each state row summing to one."""
    _require_vectors(universe)
    for i in range(universe.size):
        h = _grid(universe, i)
        if any(v < 0 for v in h.flat):
            return Verdict.violated(
                Certificate("horse_lottery", universe, thing=i, detail="negative entry")
            )
        sums = h.sum(axis=1)
        for row, total in enumerate(sums):
            if total != 1:
                return Verdict.violated(
                    Certificate(
                        "horse_lottery", universe, thing=i, detail=f"row {row} sums to {total}"
                    )
                )
    return Verdict.verified()


def trace_hull(universe: Universe, mask: int, kind: str) -> int:
    """{t ∈ 𝒯 : t ∈ kind(vectors of mask)} as a mask; ∅ ↦ ∅."""
    if mask == 0:
        return 0
    test = HULL_TESTS[kind]
    generators = [universe.vector(i) for i in bits(mask)]
    out = mask
    for t in range(universe.size):
        if not mask >> t & 1 and test(universe.vector(t), generators):
            out |= 1 << t
    return out


__all__ = [
    "FM_MAX_GENERATORS",
    "as_vector",
    "simplex_maximize",
    "member_positive_hull",
    "member_convex_hull",
    "HULL_TESTS",
    "PRESETS",
    "preset_assessment",
    "validate_horse_lottery",
    "trace_hull",
]
