"""The algebraic Einstein system for the block-scaled metric family: build,
solve over the reals, exact elimination for the two-ideal families, folding
to real forms, and brute-force verification against the curvature module."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

import numpy as np

from .curvature import MetricParams, levi_civita_koszul, metric_from_params, \
    ricci_closed_form, ricci_direct
from .families import FamilyData, FamilySpec, Realization, family_data, realize

FORM_KINDS = ("killing", "case2", "case6", "case7")

SOLUTION_TOL = 1e-10
DEDUPE_TOL = 1e-8
BISECT_TOL = 1e-13
GRID_STEP = 1e-4
C_WINDOW = 10.0
FOLD_TOL = 1e-9
RICCI_TOL = 1e-8
# |g| threshold below which a local minimum is polished as a possible
# tangent (double) root that produces no sign change.
TANGENT_PROBE = 1e-2


@dataclass(frozen=True)
class EinsteinSystem:
    """Structured record of the Einstein equations for one family.

    Equations, in the scaling variables x and the Einstein constant c:

    * ``c = -x0/4`` when the abelian block is present (canonical form only);
    * ``(l_i x_i^2 - 1)/4 = c b_i x_i`` for each simple ideal;
    * ``gamma_0 x_0 + sum_i gamma_i x_i = 2 c + trace_rhs`` where
      ``trace_rhs = 2 (gamma_0 + sum gamma_i)`` (1 for the canonical form on
      a non-degenerate-Killing family, 0 for the degenerate-Killing ones).
    """

    data: FamilyData
    form_kind: str
    l: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    gamma: tuple[Fraction, ...]
    gamma0: Optional[Fraction]
    trace_rhs: Fraction

    @property
    def has_k0(self) -> bool:
        return self.gamma0 is not None

    @property
    def s(self) -> int:
        return len(self.l)

    @property
    def n_params(self) -> int:
        return self.s + (1 if self.has_k0 else 0)


@dataclass(frozen=True)
class EinsteinSolution:
    """One Einstein metric: scaling vector, constant, and verification."""

    x: tuple[float, ...]
    c: float
    residual: float
    ricci_verified: str = "not_applicable"  # verified | not_applicable | failed
    provenance: str = "solver"  # solver | printed_catalog | lifted
    detail: Optional[str] = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {"x": [float(v) for v in self.x], "c": float(self.c),
                "residual": float(self.residual),
                "ricci_verified": self.ricci_verified,
                "provenance": self.provenance}


def build_system(data: FamilyData, form_kind: Optional[str] = None) -> EinsteinSystem:
    """Assemble the equation record; the form kind must match the family."""
    if form_kind is None:
        form_kind = data.form_kind
    if form_kind not in FORM_KINDS:
        raise ValueError(f"unknown form kind {form_kind!r}")
    if form_kind != data.form_kind:
        if form_kind == "killing" and not data.killing_nondegenerate:
            raise ValueError("the Killing form is degenerate for this family")
        raise ValueError(
            f"form kind {form_kind!r} is inconsistent with this family "
            f"(expected {data.form_kind!r})")
    total = sum(data.gamma, Fraction(0)) + (data.gamma0 or Fraction(0))
    return EinsteinSystem(data, form_kind, data.l, data.b, data.gamma,
                          data.gamma0, 2 * total)


def system_residual(sys: EinsteinSystem, x, c: float) -> float:
    """Max absolute residual over all equations of the system."""
    x = tuple(float(v) for v in x)
    if len(x) != sys.n_params:
        raise ValueError("parameter vector length mismatch")
    res = []
    xs = x
    if sys.has_k0:
        res.append(abs(c + x[0] / 4.0))
        xs = x[1:]
    for xi, l, b in zip(xs, sys.l, sys.b):
        res.append(abs(0.25 * (float(l) * xi * xi - 1.0) - c * float(b) * xi))
    trace = sum(float(g) * xi for g, xi in zip(sys.gamma, xs))
    if sys.has_k0:
        trace += float(sys.gamma0) * x[0]
    res.append(abs(trace - 2.0 * c - float(sys.trace_rhs)))
    return max(res)


# ---------------------------------------------------------------------------
# Solver: branch enumeration + grid scan + bisection
# ---------------------------------------------------------------------------


def _branch_x(c, l: float, b: float, sign: int):
    """Root x(c) of l x^2 - 4 c b x - 1 = 0 on one sign branch.

    Works on scalars and arrays; returns NaN where the discriminant is
    negative (cannot happen for positive l).
    """
    disc = 4.0 * c * c * b * b + l
    with np.errstate(invalid="ignore"):
        root = np.sqrt(np.where(disc >= 0.0, disc, np.nan))
    return (2.0 * c * b + sign * root) / l


def _branch_vector(sys: EinsteinSystem, signs, c: float) -> Optional[tuple]:
    out = []
    if sys.has_k0:
        out.append(-4.0 * c)
    for l, b, sgn in zip(sys.l, sys.b, signs):
        xi = _branch_x(c, float(l), float(b), sgn)
        if not np.isfinite(xi):
            return None
        out.append(float(xi))
    return tuple(out)


def _trace_residual(sys: EinsteinSystem, signs, c):
    """Residual of the trace equation along one branch, vectorized in c."""
    total = -2.0 * c - float(sys.trace_rhs)
    if sys.has_k0:
        total = total + float(sys.gamma0) * (-4.0 * c)
    for l, b, g, sgn in zip(sys.l, sys.b, sys.gamma, signs):
        total = total + float(g) * _branch_x(c, float(l), float(b), sgn)
    return total


def _bisect(f, a: float, b: float, tol: float) -> float:
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fa < 0.0) != (fm < 0.0):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def _refine_tangent(f, c0: float) -> float:
    """Newton steps on f' (finite differences) toward a stationary point.

    A tangent (double) root has f = f' = 0, so |f| minimization alone only
    localizes it to the noise basin; the stationary-point iteration recovers
    it to near machine precision.
    """
    c = c0
    h = 1e-5  # fixed: shrinking the stencil would sink d2 into float noise
    for _ in range(6):
        fm, f0, fp = f(c - h), f(c), f(c + h)
        d2 = fp - 2.0 * f0 + fm
        if d2 == 0.0:
            break
        step = (fp - fm) * h / (2.0 * d2)
        if abs(step) > 10.0 * h:
            break  # not a tangency; leave the candidate to the residual gate
        c -= step
        if abs(step) < 1e-13:
            break
    return c


def solve(sys: EinsteinSystem, c_window: float = C_WINDOW,
          grid_step: float = GRID_STEP, residual_tol: float = SOLUTION_TOL,
          ) -> list[EinsteinSolution]:
    """All real solutions with every x_i nonzero.

    Strategy: enumerate the 2^s sign branches of the per-ideal quadratic in
    x_i(c) (with x_0 = -4c substituted when the abelian block is present),
    scan c over the window on a uniform grid, isolate sign changes of the
    trace-equation residual and bisect them down; local minima of the
    absolute residual below a probe threshold are polished as candidate
    tangent roots, as are branch-discriminant zeros. Candidates survive only
    if the full system residual passes, then are deduplicated and sorted.
    """
    n_grid = int(round(2.0 * c_window / grid_step))
    c_grid = -c_window + grid_step * np.arange(n_grid + 1)
    found: list[tuple[tuple, float]] = []
    for branch_id in range(2 ** sys.s):
        signs = tuple(1 if (branch_id >> i) & 1 == 0 else -1
                      for i in range(sys.s))
        g = _trace_residual(sys, signs, c_grid)
        scalar = lambda c: float(_trace_residual(sys, signs, c))  # noqa: E731
        candidates: list[float] = []

        def add_sharpened(c0: float) -> None:
            # A root where the residual is tangent to zero is only located
            # to the width of the float-noise basin; pulling it to the
            # nearby stationary point recovers full precision. Simple roots
            # leave the iteration immediately and are kept as found.
            refined = _refine_tangent(scalar, c0)
            candidates.append(refined if abs(refined - c0) <= 1e-7 else c0)

        finite = np.isfinite(g)
        for k in range(n_grid):
            if not (finite[k] and finite[k + 1]):
                continue
            if g[k] == 0.0:
                add_sharpened(float(c_grid[k]))
            elif g[k] * g[k + 1] < 0.0:
                add_sharpened(_bisect(scalar, float(c_grid[k]),
                                      float(c_grid[k + 1]), BISECT_TOL))
        if finite[n_grid] and g[n_grid] == 0.0:
            add_sharpened(float(c_grid[n_grid]))
        absg = np.abs(g)
        for k in range(1, n_grid):
            if not (finite[k - 1] and finite[k] and finite[k + 1]):
                continue
            if absg[k] < TANGENT_PROBE and absg[k] <= absg[k - 1] \
                    and absg[k] <= absg[k + 1]:
                candidates.append(_refine_tangent(scalar, float(c_grid[k])))
        for l, b in zip(sys.l, sys.b):
            # branch boundaries 4 c^2 b^2 + l = 0 (only for negative l)
            if l < 0 and b != 0:
                boundary = math.sqrt(float(-l)) / (2.0 * abs(float(b)))
                candidates.extend([boundary, -boundary])
        for c in candidates:
            c = c + 0.0  # normalize -0.0
            vec = _branch_vector(sys, signs, c)
            if vec is None or min(abs(v) for v in vec) < 1e-9:
                continue  # degenerate metric: outside the family
            res = system_residual(sys, vec, c)
            if res < residual_tol:
                found.append((vec, c))
    found.sort(key=lambda t: (t[1], t[0]))
    solutions: list[EinsteinSolution] = []
    for vec, c in found:
        dup = any(
            max(abs(c - s.c), max(abs(a - bb) for a, bb in zip(vec, s.x))) < DEDUPE_TOL
            for s in solutions)
        if not dup:
            solutions.append(EinsteinSolution(vec, c, system_residual(sys, vec, c)))
    return solutions


# ---------------------------------------------------------------------------
# Exact elimination for the two-ideal canonical-form systems
# ---------------------------------------------------------------------------


def elimination_polynomial(sys: EinsteinSystem, pivot: int = 1) -> list[Fraction]:
    """Exact quartic in the pivot variable for a two-ideal canonical-form
    system, by eliminating c (from the pivot quadratic) and the other
    variable (from the trace equation) into the remaining quadratic.

    Returns descending coefficients, normalized so the leading coefficient
    equals the reference value when one is known (see
    :func:`cubic_reference_coefficients`); the pivot value 1 is always a
    root.
    """
    if sys.form_kind != "killing" or sys.has_k0 or sys.s != 2:
        raise ValueError("elimination needs the two-ideal canonical-form shape")
    if pivot not in (1, 2):
        raise ValueError("pivot must be 1 or 2")
    i, j = (0, 1) if pivot == 1 else (1, 0)
    l1, l2 = sys.l[i], sys.l[j]
    b1, b2 = sys.b[i], sys.b[j]
    g1, g2 = sys.gamma[i], sys.gamma[j]
    rhs = sys.trace_rhs
    # c(X) = (l1 X^2 - 1) / (4 b1 X); x_other = (2 c + rhs - g1 X) / g2.
    # Substituting into (l2 x^2 - 1)/4 = c b2 x and clearing denominators
    # leaves the quartic below (a factor 4 b1 X cancels).
    p = [2 * l1 - 4 * b1 * g1, 4 * b1 * rhs, Fraction(-2)]  # numerator of g2*x_other*4*b1*X
    num_c = [l1, Fraction(0), Fraction(-1)]
    p_sq = _poly_mul(p, p)
    term1 = [l2 * v for v in p_sq]
    term2 = [Fraction(0)] * 2 + [16 * b1 * b1 * g2 * g2, Fraction(0), Fraction(0)]
    term3 = [4 * b2 * g2 * v for v in _poly_mul(num_c, p)]
    quartic = [a - bb - cc for a, bb, cc in zip(term1, term2, term3)]
    ref = cubic_reference_coefficients(sys.data)
    if ref is not None:
        # the quartic's leading coefficients can vanish (the cubic factor
        # degenerates), so scale at the first jointly nonzero position
        cubic = cubic_factor(quartic)
        for r, cc in zip(ref, cubic):
            if r != 0 and cc != 0:
                quartic = [r / cc * v for v in quartic]
                break
    return quartic


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def cubic_factor(quartic: list[Fraction]) -> list[Fraction]:
    """Divide out the root at 1; the remainder must vanish exactly."""
    out = []
    acc = Fraction(0)
    for coeff in quartic[:-1]:
        acc += coeff
        out.append(acc)
    if acc + quartic[-1] != 0:
        raise ValueError("1 is not a root of the quartic")
    return out


def cubic_reference_coefficients(data: FamilyData) -> Optional[tuple[Fraction, ...]]:
    """Known closed-form (A, B, C, D) for the cubic factor of the two-ideal
    quartic, reconstructed from the family parameters; None when no
    closed form is catalogued. Note A + B + C + D is nonzero in general
    (it equals (2n+1)(2m-2n+1) resp. 2(m-n)(2n+1) up to the normalization)."""
    m, n = _two_ideal_params(data)
    if m is None:
        return None
    m, n = Fraction(m), Fraction(n)
    if data.dim_k[0] == m * (2 * m + 1):  # so(2m+1) + sp(2n)
        return (
            2 * (2 * m**3 + (-4 * n + 1) * m**2 + n * (4 * n - 1) * m - 2 * n**3),
            -2 * (6 * m**3 - (12 * n + 1) * m**2 + (8 * n**2 - n - 2) * m
                  - 2 * n**3 + n),
            (2 * m - 1) * (6 * m**2 - (10 * n + 1) * m + 4 * n**2 - n - 1),
            (2 * m - 1) ** 2 * (n - m),
        )
    return (
        4 * m**3 - 4 * (2 * n + 1) * m**2 + (8 * n**2 + 6 * n + 1) * m
        - n * (2 * n + 1) ** 2,
        -12 * m**3 + 4 * (6 * n + 5) * m**2 - (16 * n**2 + 22 * n + 7) * m
        + n * (4 * n**2 + 8 * n + 3),
        2 * (m - 1) * (6 * m**2 - m * (10 * n + 7) + (2 * n + 1) ** 2),
        2 * (m - 1) ** 2 * (2 * n - 2 * m + 1),
    )


def _two_ideal_params(data: FamilyData) -> tuple[Optional[int], Optional[int]]:
    """(m, n) for the orthosymplectic two-ideal families, else (None, None).

    All scalar data must match, not just the dimensions: the exceptional
    families share dimension patterns with small orthosymplectic ones.
    """
    if data.form_kind != "killing" or data.has_k0 or data.s != 2:
        return None, None
    d1, d2 = data.dim_k
    # sp(2n) always sits second: d2 = n(2n+1)
    n = int(round((math.sqrt(1 + 8 * d2) - 1) / 4))
    if d2 != n * (2 * n + 1):
        return None, None
    for m in range(1, 200):
        if (d1 == m * (2 * m + 1)
                and data.l == (Fraction(2 * n, 2 * m - 1),
                               Fraction(2 * m + 1, 2 * n + 2))
                and data.dim_odd == 2 * n * (2 * m + 1)):
            return m, n
        if (d1 == m * (2 * m - 1) and m >= 2
                and data.l == (Fraction(n, m - 1), Fraction(m, n + 1))
                and data.dim_odd == 4 * m * n):
            return m, n
    return None, None


def _poly_derivative(p: list[Fraction]) -> list[Fraction]:
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])]


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    b = _poly_strip(b)
    out = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    for i in range(len(a) - len(b) + 1):
        coef = out[i] / b[0]
        q[i] = coef
        if coef:
            for j, bj in enumerate(b):
                out[i + j] -= coef * bj
    return q, _poly_strip(out[len(a) - len(b) + 1:])


def _poly_strip(p: list[Fraction]) -> list[Fraction]:
    k = 0
    while k < len(p) - 1 and p[k] == 0:
        k += 1
    return p[k:]


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _poly_strip(a), _poly_strip(b)
    while len(b) > 1 or (len(b) == 1 and b[0] != 0):
        a, b = b, _poly_divmod(a, b)[1]
        if not b:
            break
    return [v / a[0] for v in a]


def square_free_part(coeffs: list[Fraction]) -> list[Fraction]:
    """Exact square-free reduction: repeated roots become simple, so the
    numeric root finder recovers them to full precision."""
    p = _poly_strip(list(coeffs))
    if len(p) <= 1:
        return p
    g = _poly_gcd(p, _poly_derivative(p))
    if len(g) == 1:
        return p
    return _poly_divmod(p, g)[0]


def real_roots(coeffs: list[Fraction]) -> list[float]:
    """Real roots (without multiplicity) of a rational polynomial."""
    sf = square_free_part(coeffs)
    arr = np.array([float(v) for v in sf])
    if arr.size <= 1:
        return []
    roots = np.roots(arr)
    out = []
    fl = [float(v) for v in sf]
    dfl = [float(v) for v in _poly_derivative(sf)]
    for r in roots:
        if abs(r.imag) > 1e-9:
            continue
        x = float(r.real)
        for _ in range(3):  # Newton polish against the exact coefficients
            fx = _horner(fl, x)
            dx = _horner(dfl, x)
            if dx == 0.0:
                break
            x -= fx / dx
        out.append(x)
    return sorted(out)


def _horner(p: list[float], x: float) -> float:
    acc = 0.0
    for c in p:
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# Catalogued closed-form solutions
# ---------------------------------------------------------------------------


def known_solutions(spec: FamilySpec) -> list[EinsteinSolution]:
    """Catalogued closed-form (or four-digit approximate) solutions,
    evaluated at the spec's parameters and stamped as such."""
    data = family_data(spec)
    sys = build_system(data)
    sols: list[tuple[tuple, float]] = []
    ones = tuple([1.0] * data.n_params)
    if spec.kind in ("A", "B", "C", "D", "F4", "G3"):
        sols.append((ones, -0.25))
    if spec.kind == "C":
        n = spec.n
        x0 = (4 * n**3 - 20 * n**2 + 33 * n - 16) / (4 * n**3 - 16 * n**2 + 23 * n - 12)
        x1 = (2 * n**2 - 3 * n) / (2 * n**2 - 5 * n + 4)
        sols.append(((x0, x1), -x0 / 4.0))
    if spec.kind == "G3":
        sols.append(((1.1760, 0.8767), -0.1312))  # four printed digits
    if spec.kind == "Ann":
        sols += [(ones, 0.0), (tuple(-v for v in ones), 0.0)]
    if spec.kind == "Dn1n":
        n = spec.n
        den = math.sqrt(2 * n**2 + 2 * n + 1)
        x1 = math.sqrt(2.0) * n / den
        x2 = math.sqrt(2.0) * (n + 1) / den
        c = -math.sqrt(2.0) * (2 * n + 1) / (8 * n * den)
        sols += [(ones, 0.0), (tuple(-v for v in ones), 0.0),
                 ((x1, x2), c), ((-x1, -x2), -c)]
    if spec.kind == "D21a":
        r = math.sqrt(2.0 / 5.0)
        c = -3.0 / 8.0 * r
        sols += [(ones, 0.0), (tuple(-v for v in ones), 0.0),
                 ((r, r, 2 * r), c), ((-r, -r, -2 * r), -c)]
    out = [EinsteinSolution(x, c, system_residual(sys, x, c),
                            provenance="printed_catalog") for x, c in sols]
    out.sort(key=lambda s: (s.c, s.x))
    return out


# ---------------------------------------------------------------------------
# Real-form folding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LiftResult:
    """Outcome of folding a solution onto a real form."""

    liftable: bool
    solution: Optional[EinsteinSolution]
    max_pair_gap: float


def lift_real_form(sol: EinsteinSolution,
                   folding: list[tuple[int, int]]) -> LiftResult:
    """Fold paired coordinates (0-based positions into sol.x) that merge in
    a real form. A solution lifts exactly when each pair carries equal
    values; the folded vector keeps one coordinate per pair."""
    used: set[int] = set()
    for i, j in folding:
        if i == j or not (0 <= i < len(sol.x)) or not (0 <= j < len(sol.x)):
            raise ValueError(f"invalid folding pair ({i}, {j})")
        if i in used or j in used:
            raise ValueError("folding pairs must be disjoint")
        used.update((i, j))
    gap = max((abs(sol.x[i] - sol.x[j]) for i, j in folding), default=0.0)
    if gap > FOLD_TOL:
        return LiftResult(False, None, gap)
    drop = {max(i, j) for i, j in folding}
    folded = tuple(v for k, v in enumerate(sol.x) if k not in drop)
    lifted = replace(sol, x=folded, provenance="lifted", detail=None)
    return LiftResult(True, lifted, gap)


def default_folding(spec: FamilySpec) -> list[tuple[int, int]]:
    """Pairs of isomorphic simple ideals that can merge in a real form.

    The quotient family pairs its two special-linear ideals and the
    three-ideal family pairs its first two; families whose ideals are
    pairwise non-isomorphic fold trivially (no pairs).
    """
    if spec.kind == "Ann":
        return [(0, 1)]
    if spec.kind == "D21a":
        return [(0, 1)]
    return []


# ---------------------------------------------------------------------------
# Brute-force verification
# ---------------------------------------------------------------------------


def verify_solution(real: Realization, sol: EinsteinSolution,
                    tol: float = RICCI_TOL) -> EinsteinSolution:
    """Check ric = c * metric by both Ricci routes; stamp the outcome."""
    params = MetricParams(sol.x)
    metric = metric_from_params(real, params)
    target = sol.c * metric.gram
    scale = metric.scale()
    worst = 0.0
    detail = None
    for route, ric in (
        ("direct", ricci_direct(real.algebra, metric,
                                levi_civita_koszul(real.algebra, metric))),
        ("closed_form", ricci_closed_form(real, params)),
    ):
        dev = np.abs(ric.gram - target)
        route_worst = float(np.max(dev))
        if route_worst >= tol * scale and detail is None:
            i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
            detail = (f"{route} route deviates {route_worst:.3g} at "
                      f"{_block_of(real, int(i))} x {_block_of(real, int(j))}")
        worst = max(worst, route_worst)
    status = "verified" if worst < tol * scale else "failed"
    return replace(sol, ricci_verified=status, detail=detail)


def _block_of(real: Realization, idx: int) -> str:
    for pos, rng in enumerate(real.algebra.decomposition):
        if rng.start <= idx < rng.stop:
            return f"k{pos if real.data.has_k0 else pos + 1}"
    return "odd"


def solve_family(spec: FamilySpec, c_window: float = C_WINDOW,
                 verify: bool = True,
                 residual_tol: float = SOLUTION_TOL) -> list[EinsteinSolution]:
    """Build, solve, and (when a matrix realization exists) verify."""
    sys = build_system(family_data(spec))
    sols = solve(sys, c_window=c_window, residual_tol=residual_tol)
    if verify and spec.realizable:
        real = realize(spec)
        sols = [verify_solution(real, s) for s in sols]
    return sols


def solutions_to_json(spec: FamilySpec, sols: list[EinsteinSolution]) -> dict:
    data = family_data(spec)
    return {
        "family": spec.name,
        "params": {"m": spec.m, "n": spec.n, "alpha": spec.alpha},
        "form": data.form_kind,
        "solutions": [s.to_json() for s in sols],
    }
