"""Closed-form resistance functionals.

The drag integrand is constant on every segment of a piecewise-linear
contour, so all evaluations here are exact per-segment algebra; no
quadrature is used anywhere.
"""

from __future__ import annotations

from .geometry import Profile, ProblemSpec, StaircaseParams


def resistance_2d(profile: Profile) -> float:
    """Planar drag: sum of dx_i / (1 + u_i^2) over segments."""
    total = 0.0
    pts = profile.breakpoints
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        u = (y1 - y0) / (x1 - x0)
        total += (x1 - x0) / (1.0 + u * u)
    return total


def resistance_3d(profile: Profile) -> float:
    """Axisymmetric drag: sum of (x_{i+1}^2 - x_i^2) / (2 (1 + u_i^2)).

    Evaluation only; no 3-D solver is provided.
    """
    total = 0.0
    pts = profile.breakpoints
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        u = (y1 - y0) / (x1 - x0)
        total += (x1 * x1 - x0 * x0) / (2.0 * (1.0 + u * u))
    return total


def triangle_resistance(spec: ProblemSpec) -> float:
    """Drag of the straight contour y = (H/r) x: r^3 / (r^2 + H^2)."""
    return spec.r**3 / (spec.r**2 + spec.H**2)


def staircase_resistance(params: StaircaseParams, spec: ProblemSpec) -> float:
    """Drag of a flat/rise staircase directly from its (xi, mu) parameters.

    Flats contribute their width; rise i contributes
    w^3 / (w^2 + h^2) with w, h its width and height.  Agrees with
    resistance_2d of the constructed profile to machine precision.
    """
    if params.xi[-1] != spec.r or params.mu[-1] != spec.H:
        raise ValueError("staircase parameters inconsistent with problem spec")
    total = sum(params.flat_widths)
    for w, h in zip(params.rise_widths, params.rise_heights):
        if w > 0.0:
            total += w**3 / (w * w + h * h)
    return total


def branch_resistance_initial_flat(xi: float, spec: ProblemSpec) -> float:
    """Drag of flat-then-rise: R(xi) = xi + (r-xi)^3 / ((r-xi)^2 + H^2).

    Minimized over [0, r-H] at xi = r - H when H <= r.
    """
    if not (0.0 <= xi < spec.r):
        raise ValueError(f"xi = {xi} must lie in [0, r) with r = {spec.r}")
    w = spec.r - xi
    return xi + w**3 / (w * w + spec.H**2)


def branch_resistance_final_flat(xi: float, spec: ProblemSpec) -> float:
    """Drag of rise-then-flat: R(xi) = xi^3 / (xi^2 + H^2) + r - xi.

    Minimized at xi = H when H <= r.
    """
    if not (0.0 < xi <= spec.r):
        raise ValueError(f"xi = {xi} must lie in (0, r] with r = {spec.r}")
    return xi**3 / (xi * xi + spec.H**2) + spec.r - xi


def resistance_difference(xi: float, spec: ProblemSpec) -> float:
    """Triangle drag minus the rise-then-flat branch drag, computed directly.

    Negative for all xi in (0, r) when r < H (the triangle wins); positive
    at xi = H when r > H (the staircase wins).
    """
    if not (0.0 <= xi <= spec.r):
        raise ValueError(f"xi = {xi} must lie in [0, r] with r = {spec.r}")
    r, H = spec.r, spec.H
    final_flat = xi**3 / (xi * xi + H * H) + r - xi
    return triangle_resistance(spec) - final_flat


def resistance_difference_closed_form(xi: float, spec: ProblemSpec) -> float:
    """Closed form of :func:`resistance_difference`:

        H^2 (r - xi) (r xi - H^2) / [(xi^2 + H^2)(r^2 + H^2)]

    Cross-check only; the directly computed difference is authoritative.
    """
    if not (0.0 <= xi <= spec.r):
        raise ValueError(f"xi = {xi} must lie in [0, r] with r = {spec.r}")
    r, H = spec.r, spec.H
    return (
        H * H * (r - xi) * (r * xi - H * H)
        / ((xi * xi + H * H) * (r * r + H * H))
    )
