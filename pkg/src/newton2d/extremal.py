"""Hamiltonian stationary-point analysis and the closed-form solver.

The pointwise Hamiltonian is H(u) = -1/(1+u^2) - lambda*u with a positive
multiplier lambda (the adjoint is a negative constant and the abnormal
multiplier can be normalized to -1).  Maximizing it over the control set
replaces the drag minimization, which is what the certificate check and
the solver below exploit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .functional import triangle_resistance
from .geometry import (
    Profile,
    ProblemSpec,
    StaircaseParams,
    Variant,
    make_staircase,
    make_triangle,
)
from .oracle import finite_difference_gradient

#: Slope where the second derivative of the Hamiltonian changes sign.
SLOPE_THRESHOLD = math.sqrt(3.0) / 3.0

#: Largest multiplier admitting stationary slopes: max of 2u/(1+u^2)^2.
LAMBDA_MAX = 3.0 * math.sqrt(3.0) / 8.0

#: Width of the inflection band around SLOPE_THRESHOLD in classify_stationary.
CLASSIFY_TOL = 1e-9


class Classification(Enum):
    LOCAL_MAX = "local-max"
    LOCAL_MIN = "local-min"
    INFLECTION = "inflection"


class SolutionStatus(Enum):
    UNIQUE_MINIMIZER = "UniqueMinimizer"
    INFINITE_FAMILY = "InfiniteFamily"
    LOCAL_MINIMIZER_ONLY = "LocalMinimizerOnly"
    NO_SOLUTION = "NoSolution"


def hamiltonian(u: float, lam: float) -> float:
    """H(u) = -1/(1+u^2) - lam*u."""
    return -1.0 / (1.0 + u * u) - lam * u


def hamiltonian_derivatives(u: float, lam: float) -> tuple[float, float, float]:
    """First three derivatives of the Hamiltonian at slope u.

    H'(u)   = 2u/(1+u^2)^2 - lam
    H''(u)  = -2(3u^2-1)/(1+u^2)^3
    H'''(u) = -24u(1-u^2)/(1+u^2)^4

    The second and third derivatives do not depend on lam.
    """
    q = 1.0 + u * u
    d1 = 2.0 * u / q**2 - lam
    d2 = -2.0 * (3.0 * u * u - 1.0) / q**3
    d3 = -24.0 * u * (1.0 - u * u) / q**4
    return d1, d2, d3


def _slope_response(u: float) -> float:
    # g(u) = u/(1+u^2)^2; the first-order condition is g(u) = lam/2
    return u / (1.0 + u * u) ** 2


def stationary_slopes(lam: float) -> tuple[float, ...]:
    """Nonnegative slopes solving the first-order condition u/(1+u^2)^2 = lam/2.

    g(u) = u/(1+u^2)^2 increases on [0, sqrt(3)/3] and decreases beyond, with
    maximum 3*sqrt(3)/16 at the threshold slope.  Hence: no roots for
    lam > LAMBDA_MAX, a double root at the threshold for lam = LAMBDA_MAX,
    and one root on each monotone branch for smaller positive lam.  Roots
    are found by bracketed root finding on each branch; no closed-form
    quartic formula is used.
    """
    if lam <= 0.0:
        raise ValueError(f"lam must be positive, got {lam}")
    half = lam / 2.0
    peak = _slope_response(SLOPE_THRESHOLD)
    if half > peak * (1.0 + 1e-13):
        return ()
    if abs(half - peak) <= peak * 1e-13:
        return (SLOPE_THRESHOLD,)
    low = brentq(
        lambda u: _slope_response(u) - half,
        0.0,
        SLOPE_THRESHOLD,
        xtol=1e-15,
        rtol=8.9e-16,
    )
    hi_bracket = max(2.0 * SLOPE_THRESHOLD, 2.0)
    while _slope_response(hi_bracket) > half:
        hi_bracket *= 2.0
    high = brentq(
        lambda u: _slope_response(u) - half,
        SLOPE_THRESHOLD,
        hi_bracket,
        xtol=1e-15,
        rtol=8.9e-16,
    )
    return (low, high)


def lambda_for_slope(s: float) -> float:
    """Multiplier making s a stationary slope: lam = 2s/(1+s^2)^2."""
    if s <= 0.0:
        raise ValueError(f"slope must be positive, got {s}")
    return 2.0 * s / (1.0 + s * s) ** 2


def classify_stationary(u: float) -> Classification:
    """Trichotomy at a stationary slope via the sign of H''.

    Above the threshold slope H'' < 0 (local maximum of the Hamiltonian),
    below it H'' > 0 (local minimum); within CLASSIFY_TOL of the threshold
    H'' = 0 while H''' = -27*sqrt(3)/16 != 0, so the point is an inflection.
    """
    if abs(u - SLOPE_THRESHOLD) <= CLASSIFY_TOL:
        return Classification.INFLECTION
    return Classification.LOCAL_MAX if u > SLOPE_THRESHOLD else Classification.LOCAL_MIN


@dataclass(frozen=True)
class ExtremalCertificate:
    """Pontryagin-extremal data: normalized multiplier pair and slope analysis."""

    lam: float
    stationary: tuple[float, ...]
    classification: tuple[Classification, ...]
    psi0: float = -1.0

    def __post_init__(self) -> None:
        if not (self.lam > 0.0):
            raise ValueError("lambda must be positive")
        if self.psi0 != -1.0:
            raise ValueError("psi0 is normalized to -1")

    def psi(self, x: float) -> float:
        """Constant adjoint, identically -lambda."""
        return -self.lam


def make_certificate(lam: float) -> ExtremalCertificate:
    slopes = stationary_slopes(lam)
    return ExtremalCertificate(
        lam=lam,
        stationary=slopes,
        classification=tuple(classify_stationary(u) for u in slopes),
    )


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of the grid-scan maximality check for a profile's slopes."""

    passed: bool
    lam: float
    worst_violation: float
    grid_max: float
    scan_bound: float
    segment_values: tuple[float, ...]
    notes: tuple[str, ...] = ()


def check_certificate(
    profile: Profile,
    spec: ProblemSpec,
    lam: float,
    grid_points: int = 100_000,
    tol: float = 1e-9,
) -> CertificateReport:
    """Verify the maximality condition for every segment slope of a profile.

    Each segment slope must attain (within tol) the maximum of the
    Hamiltonian over a scan grid of nonnegative slopes [0, B] with
    B = max(10, 10 H/r).  Beyond the largest stationary slope the
    Hamiltonian decreases monotonically, so the bounded scan is exhaustive
    for the restricted control set.  For the unrestricted variant the
    Hamiltonian is unbounded above as u -> -infinity (that is why no
    unrestricted global minimizer exists), so the same nonnegative scan is
    used and the certificate is only a one-sided/local statement there.

    A passing report for a restricted-variant profile certifies a
    Pontryagin extremal, hence a global minimizer within the admissible
    class.
    """
    if lam <= 0.0:
        raise ValueError(f"lam must be positive, got {lam}")
    bound = max(10.0, 10.0 * spec.H / spec.r)
    grid = np.linspace(0.0, bound, grid_points)
    grid_max = float(np.max(-1.0 / (1.0 + grid * grid) - lam * grid))
    values = tuple(hamiltonian(u, lam) for u in profile.slopes)
    worst = max(grid_max - v for v in values)
    notes = []
    if spec.variant is Variant.UNRESTRICTED:
        notes.append(
            "unrestricted variant: Hamiltonian is unbounded for negative "
            "slopes; scan covers nonnegative slopes only, so a pass is a "
            "local (one-sided) certificate"
        )
    return CertificateReport(
        passed=worst <= tol,
        lam=lam,
        worst_violation=worst,
        grid_max=grid_max,
        scan_bound=bound,
        segment_values=values,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class SolutionReport:
    """Solver outcome: minimizer family, drag value, certificate and notes."""

    variant: Variant
    status: SolutionStatus
    minimal_resistance: float | None
    representative_profiles: tuple[Profile, ...]
    certificate: ExtremalCertificate | None
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.status is SolutionStatus.NO_SOLUTION and (
            self.minimal_resistance is not None
        ):
            raise ValueError("no-solution reports carry no resistance value")
        if self.status is SolutionStatus.INFINITE_FAMILY and (
            len(self.representative_profiles) < 2
        ):
            raise ValueError("infinite-family reports need >= 2 representatives")

    def to_dict(self, spec: ProblemSpec) -> dict:
        from .geometry import profile_to_dict

        return {
            "status": self.status.value,
            "resistance": self.minimal_resistance,
            "lambda": self.certificate.lam if self.certificate else None,
            "profiles": [
                profile_to_dict(p, spec) for p in self.representative_profiles
            ],
            "notes": list(self.notes),
        }


def io_staircase_params(spec: ProblemSpec) -> StaircaseParams:
    """Flat on [0, r-H] then slope 1 up to (r, H); requires H <= r."""
    if spec.H > spec.r:
        raise ValueError("flat-then-rise optimum requires H <= r")
    return StaircaseParams(
        n=1, xi=(0.0, spec.r - spec.H, spec.r, spec.r), mu=(0.0, spec.H)
    )


def fo_staircase_params(spec: ProblemSpec) -> StaircaseParams:
    """Slope 1 on [0, H] then flat up to (r, H); requires H <= r."""
    if spec.H > spec.r:
        raise ValueError("rise-then-flat optimum requires H <= r")
    return StaircaseParams(n=1, xi=(0.0, 0.0, spec.H, spec.r), mu=(0.0, spec.H))


def _two_rise_params(spec: ProblemSpec) -> StaircaseParams:
    # n = 2 member of the minimizing family: equal slope-1 rises, equal flats
    f = (spec.r - spec.H) / 3.0
    w = spec.H / 2.0
    xi = (0.0, f, f + w, 2.0 * f + w, 2.0 * f + 2.0 * w, spec.r)
    mu = (0.0, w, spec.H)
    return StaircaseParams(n=2, xi=xi, mu=mu)


def solve(spec: ProblemSpec) -> SolutionReport:
    """Closed-form solution of the two-dimensional problem.

    Unrestricted: the straight contour is a local minimizer iff
    H/r > sqrt(3)/3, and never a global one; below the threshold there is
    no solution at all.  Restricted: unique straight minimizer for H > r,
    infinitely many slope-{0,1} staircases with drag r - H/2 for H < r,
    and at H = r the staircase family collapses to the straight contour.
    """
    if spec.dimension != 2:
        raise ValueError("closed-form solver covers dimension 2 only")
    r, H = spec.r, spec.H
    ratio = H / r
    if spec.variant is Variant.UNRESTRICTED:
        if ratio <= SLOPE_THRESHOLD:
            return SolutionReport(
                variant=spec.variant,
                status=SolutionStatus.NO_SOLUTION,
                minimal_resistance=None,
                representative_profiles=(),
                certificate=None,
                notes=(
                    "H/r <= sqrt(3)/3: the straight contour is not even a "
                    "local minimizer and the unrestricted problem has no "
                    "solution",
                ),
            )
        return SolutionReport(
            variant=spec.variant,
            status=SolutionStatus.LOCAL_MINIMIZER_ONLY,
            minimal_resistance=triangle_resistance(spec),
            representative_profiles=(make_triangle(spec),),
            certificate=make_certificate(lambda_for_slope(ratio)),
            notes=(
                "local minimizer only: up/down wedges of growing slope drive "
                "the drag to zero, so no unrestricted global minimum exists",
            ),
        )
    # restricted variant
    if H > r:
        return SolutionReport(
            variant=spec.variant,
            status=SolutionStatus.UNIQUE_MINIMIZER,
            minimal_resistance=triangle_resistance(spec),
            representative_profiles=(make_triangle(spec),),
            certificate=make_certificate(lambda_for_slope(ratio)),
        )
    if H == r:
        return SolutionReport(
            variant=spec.variant,
            status=SolutionStatus.UNIQUE_MINIMIZER,
            minimal_resistance=triangle_resistance(spec),
            representative_profiles=(make_triangle(spec),),
            certificate=make_certificate(0.5),
            notes=(
                "H = r: the staircase family's flat budget r - H is zero, so "
                "it collapses to the single straight contour; r - H/2 and "
                "r^3/(r^2+H^2) agree here",
            ),
        )
    reps = (
        make_staircase(spec, io_staircase_params(spec)),
        make_staircase(spec, fo_staircase_params(spec)),
        make_staircase(spec, _two_rise_params(spec)),
    )
    return SolutionReport(
        variant=spec.variant,
        status=SolutionStatus.INFINITE_FAMILY,
        minimal_resistance=r - H / 2.0,
        representative_profiles=reps,
        certificate=make_certificate(0.5),
        notes=(
            "every flat/rise staircase with slope-1 rises of total width H "
            "attains the same minimal drag r - H/2",
        ),
    )


def enumerate_minimizers(
    spec: ProblemSpec, n: int, count: int, rng_seed: int
) -> list[StaircaseParams]:
    """Seeded random members of the slope-{0,1} minimizing staircase family.

    Rise widths are positive and sum to H; flat widths are nonnegative and
    sum to r - H (Dirichlet stick-breaking over each budget).  Every member
    evaluates to r - H/2 and passes the certificate check at lambda = 1/2.
    """
    if spec.variant is not Variant.RESTRICTED:
        raise ValueError("the minimizing staircase family is a restricted-variant object")
    if spec.H > spec.r:
        raise ValueError("the staircase family is empty for H > r")
    if n < 1 or count < 1:
        raise ValueError("n and count must be positive")
    rng = np.random.default_rng(rng_seed)
    flat_budget = spec.r - spec.H
    members: list[StaircaseParams] = []
    for _ in range(count):
        rises = rng.dirichlet(np.ones(n)) * spec.H if n > 1 else np.array([spec.H])
        if flat_budget > 0.0:
            flats = rng.dirichlet(np.ones(n + 1)) * flat_budget
        else:
            flats = np.zeros(n + 1)
        xi = [0.0]
        mu = [0.0]
        x = 0.0
        y = 0.0
        for i in range(n):
            x += float(flats[i])
            xi.append(x)
            x += float(rises[i])
            xi.append(x)
            y += float(rises[i])
            mu.append(y)
        xi.append(spec.r)
        xi[2 * n] = min(xi[2 * n], spec.r)
        mu[n] = spec.H
        members.append(StaircaseParams(n=n, xi=tuple(xi), mu=tuple(mu)))
    return members


@dataclass(frozen=True)
class GradientReport:
    """Reduced gradient of the staircase drag at an interior parameter point."""

    analytic: tuple[float, ...]
    finite_difference: tuple[float, ...]
    analytic_norm: float
    finite_difference_norm: float
    coordinate_names: tuple[str, ...]


def _staircase_value(n: int, xi: np.ndarray, mu: np.ndarray) -> float:
    total = 0.0
    for i in range(n + 1):
        total += xi[2 * i + 1] - xi[2 * i]
    for i in range(n):
        w = xi[2 * i + 2] - xi[2 * i + 1]
        h = mu[i + 1] - mu[i]
        total += w**3 / (w * w + h * h)
    return total


def staircase_gradient_check(
    params: StaircaseParams, spec: ProblemSpec, fd_step: float = 1e-6
) -> GradientReport:
    """Analytic reduced gradient of the staircase drag, with an FD cross-check.

    Free coordinates are the interior breakpoints xi_1..xi_2n and heights
    mu_1..mu_{n-1} (endpoints are fixed by the boundary conditions).  At a
    family point with all rise slopes equal to 1 the gradient vanishes.
    Requires a strictly interior point, otherwise one-sided derivatives
    would be needed.
    """
    if params.xi[-1] != spec.r or params.mu[-1] != spec.H:
        raise ValueError("staircase parameters inconsistent with problem spec")
    xi = np.asarray(params.xi)
    mu = np.asarray(params.mu)
    n = params.n
    if np.any(np.diff(xi) <= 0.0) or np.any(np.diff(mu) <= 0.0):
        raise ValueError("parameters on the boundary of the feasible set")

    w = xi[2::2] - xi[1::2][: n]
    h = np.diff(mu)
    denom = (w * w + h * h) ** 2
    g_w = (w**4 + 3.0 * w * w * h * h) / denom
    g_h = -2.0 * w**3 * h / denom

    names: list[str] = []
    grad: list[float] = []
    for i in range(n):
        names.append(f"xi_{2 * i + 1}")
        grad.append(1.0 - g_w[i])
        names.append(f"xi_{2 * i + 2}")
        grad.append(g_w[i] - 1.0)
    for j in range(1, n):
        names.append(f"mu_{j}")
        grad.append(g_h[j - 1] - g_h[j])

    free_xi = list(range(1, 2 * n + 1))
    free_mu = list(range(1, n))

    def evaluator(v: np.ndarray) -> float:
        xi_v = xi.copy()
        mu_v = mu.copy()
        xi_v[free_xi] = v[: len(free_xi)]
        mu_v[free_mu] = v[len(free_xi):]
        return _staircase_value(n, xi_v, mu_v)

    point = np.concatenate([xi[free_xi], mu[free_mu]])
    # reorder analytic gradient to match [xi_1..xi_2n, mu_1..mu_{n-1}]
    xi_names = [f"xi_{j}" for j in free_xi]
    mu_names = [f"mu_{j}" for j in free_mu]
    wanted = xi_names + mu_names
    reordered = [grad[names.index(nm)] for nm in wanted]

    fd = finite_difference_gradient(evaluator, point, fd_step)
    analytic = np.asarray(reordered)
    return GradientReport(
        analytic=tuple(analytic),
        finite_difference=tuple(fd),
        analytic_norm=float(np.linalg.norm(analytic)),
        finite_difference_norm=float(np.linalg.norm(fd)),
        coordinate_names=tuple(wanted),
    )
