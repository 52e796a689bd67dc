"""Quadrature realizations of the moment, convolution, and transform checks.

Conventions fixed here once:

* Haar measure on the punctured plane in polar coordinates:
  d(xi)/xi ^ d(xibar)/xibar = -2i dr dtheta / r, so with u = log r every
  integral (1/2i*pi) * integral(xi^k f ...) becomes
  (-1/pi) * double integral of e^(k u) f(e^(u+i theta)) du dtheta.
* Moments: the order-k coefficient of the expansion at infinity is
  (1/2i*pi) integral(xi^k f dmu); at zero it is
  -(1/2i*pi) integral(xi^-k f dmu), k >= 1.
* The singular convolution kernel 1/(1 - xi/t) is integrable in the plane;
  the point xi = t is covered by a smooth partition of unity and a locally
  polar grid centered at t, on which the 1/|xi - t| singularity cancels
  against the area element.
* The ray transform is integral over (0, inf) of f(t) t^(s-1) dt, split
  geometrically around t = 1 with windows chosen by probing the integrand.

Grid sums are accumulated compensated in fixed index order; identical
configurations give identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NotSeparable,
    PreconditionFailed,
    QuadratureFailure,
    SingularEvaluation,
)
from .quadrature import bump, csum, geometric_edges, panel_nodes, periodic_nodes, uniform_edges
from .testfunctions import apply_operator_terms
from .transform import apply_difference_terms, mellin_op
from .syntax import format_operator

ABS_TOL = 1e-10  # default quadrature target


def _cpx(z):
    return [float(np.real(z)), float(np.imag(z))]


@dataclass(frozen=True)
class ResidualReport:
    """Per-grid-point residuals with a verdict against a tolerance."""

    operator: str
    function_id: str
    grid: tuple
    residuals: tuple
    relative: tuple
    tolerance: float
    verdict: bool
    extras: dict = field(default_factory=dict)

    @property
    def max_relative(self):
        return max(self.relative) if self.relative else 0.0

    def to_dict(self):
        return {
            "operator": self.operator,
            "function": self.function_id,
            "grid": [_cpx(z) for z in self.grid],
            "residuals": [float(x) for x in self.residuals],
            "relative_residuals": [float(x) for x in self.relative],
            "tolerance": self.tolerance,
            "verdict": bool(self.verdict),
            **{k: v for k, v in self.extras.items()},
        }


@dataclass(frozen=True)
class MomentTable:
    """Expansion coefficients at both boundary circles for one s value."""

    s: complex
    k_max: int
    zero_side: tuple  # k = 1..k_max
    inf_side: tuple  # k = 0..k_max
    error: float

    def at_zero(self, k):
        return self.zero_side[k - 1]

    def at_inf(self, k):
        return self.inf_side[k]

    def to_dict(self):
        return {
            "s": _cpx(self.s),
            "k_max": self.k_max,
            "zero_side": [_cpx(z) for z in self.zero_side],
            "inf_side": [_cpx(z) for z in self.inf_side],
            "error_estimate": self.error,
        }


# -- Haar-measure integrals -----------------------------------------------------


def _haar_grid(panel_width, order, n_theta, u_lo=-5.2, u_hi=5.2):
    u, wu = panel_nodes(uniform_edges(u_lo, u_hi, panel_width), order)
    theta, wth = periodic_nodes(n_theta)
    xi = np.exp(u[:, None] + 1j * theta[None, :])
    weights = wu[:, None] * wth
    return xi, weights, u


def _haar_integral_once(f, power, s, panel_width, order, n_theta):
    xi, w, u = _haar_grid(panel_width, order, n_theta)
    vals = f(xi, s)
    if power:
        vals = vals * np.exp(power * u)[:, None] * np.exp(1j * power * np.angle(xi))
    return (-1.0 / math.pi) * csum(vals * w)


def haar_integral(f, power, s=0j, tol=ABS_TOL):
    """(1/2i*pi) integral of xi^power * f over the Haar measure, with estimate."""
    flat0, flat_inf = f.decay()
    if not (flat0 and flat_inf):
        raise QuadratureFailure(
            f"{f.name}: no two-sided rapid-decay certificate for a Haar integral"
        )
    coarse = _haar_integral_once(f, power, s, 0.9, 12, 64)
    fine = _haar_integral_once(f, power, s, 0.55, 16, 96)
    est = abs(fine - coarse)
    if est > max(tol, 1e-8 * abs(fine)):
        raise QuadratureFailure(
            f"Haar integral estimate {est:.3e} above tolerance {tol:.3e}"
        )
    return fine, est


def haar_moment(f, k, side, s=0j, tol=ABS_TOL):
    """Order-k expansion coefficient of the convolution at one boundary."""
    if side in ("infinity", "inf"):
        if k < 0:
            raise ValueError("k must be >= 0 on the infinity side")
        value, est = haar_integral(f, k, s, tol)
        return value, est
    if side in ("zero", "0"):
        if k < 1:
            raise ValueError("k must be >= 1 on the zero side")
        value, est = haar_integral(f, -k, s, tol)
        return -value, est
    raise ValueError(f"unknown side {side!r}")


def moment_table(f, k_max, s=0j, tol=ABS_TOL):
    zero = []
    inf_side = []
    err = 0.0
    for k in range(1, k_max + 1):
        v, e = haar_moment(f, k, "zero", s, tol)
        zero.append(v)
        err = max(err, e)
    for k in range(0, k_max + 1):
        v, e = haar_moment(f, k, "infinity", s, tol)
        inf_side.append(v)
        err = max(err, e)
    return MomentTable(complex(s), k_max, tuple(zero), tuple(inf_side), err)


def stokes_identity_check(f, k, s=0j, tol=1e-6, quad_tol=ABS_TOL, scale_floor=0.0):
    """Compare the moment of the holomorphic derivative against -k times
    the plain moment (integration by parts; both sides by quadrature).

    ``scale_floor`` guards the relative residual when both sides vanish,
    e.g. for an angular mode that does not couple to order k.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    lhs, e1 = haar_integral(f.wirtinger_t(), k + 1, s, quad_tol)
    base, e2 = haar_integral(f, k, s, quad_tol)
    rhs = -k * base
    scale = max(abs(base), abs(lhs), scale_floor, 1e-300)
    residual = abs(lhs - rhs)
    rel = residual / scale
    return ResidualReport(
        operator=f"moment transport order {k}",
        function_id=f.name,
        grid=(complex(s),),
        residuals=(residual,),
        relative=(rel,),
        tolerance=tol,
        verdict=rel <= tol,
        extras={"lhs": _cpx(lhs), "rhs": _cpx(rhs), "quad_error": max(e1, e2)},
    )


# -- the singular convolution ------------------------------------------------------


_CONV_LEVELS = (
    (0.7, 12, 128, 8, 10, 72),
    (0.45, 16, 192, 12, 12, 108),
    (0.3, 20, 288, 16, 16, 160),
    (0.22, 24, 448, 20, 18, 224),
)


def _convolution_once(f, t, s, extra_power, level, mode="inf"):
    panel_w, order, n_theta, near_panels, near_order, n_phi = level
    h = 0.5 * abs(t)
    u_lo = min(-5.2, math.log(abs(t)) - 1.5)
    u_hi = max(5.2, math.log(2.5 * abs(t)))
    # far part: polar grid at the origin, kernel masked near xi = t
    u, wu = panel_nodes(uniform_edges(u_lo, u_hi, panel_w), order)
    theta, wth = periodic_nodes(n_theta)
    xi = np.exp(u[:, None] + 1j * theta[None, :])
    mask = 1.0 - bump((np.abs(xi - t) / h - 0.5) * 2.0)
    kern = 1.0 / (1.0 - xi / t) if mode == "inf" else xi / (xi - t)
    vals = f(xi, s) * mask * kern
    if extra_power:
        vals = vals * xi ** extra_power
    far = (-1.0 / math.pi) * csum(vals * (wu[:, None] * wth))
    # near part: polar grid centered at t; the kernel singularity cancels
    # against the area element, leaving a smooth integrand
    rho, wr = panel_nodes(np.linspace(0.0, h, near_panels + 1), near_order)
    phi, wp = periodic_nodes(n_phi)
    xi_n = t + rho[:, None] * np.exp(1j * phi[None, :])
    chi = bump((rho / h - 0.5) * 2.0)[:, None]
    vals_n = f(xi_n, s) * chi * np.exp(-1j * phi)[None, :] / np.abs(xi_n) ** 2
    power = extra_power if mode == "inf" else extra_power + 1
    if power:
        vals_n = vals_n * xi_n ** power
    prefactor = t / math.pi if mode == "inf" else -1.0 / math.pi
    near = prefactor * csum(vals_n * (wr[:, None] * wp))
    return far + near


def _convolution_integral(f, t, s, extra_power, tol, rel_tol=1e-7, mode="inf"):
    values = []
    for level in _CONV_LEVELS:
        values.append(_convolution_once(f, t, s, extra_power, level, mode))
        if len(values) > 1:
            est = abs(values[-1] - values[-2])
            if est <= max(tol, rel_tol * abs(values[-1])):
                return values[-1], est
    raise QuadratureFailure(
        f"convolution quadrature did not settle below {tol:.3e} "
        f"(last increment {est:.3e})"
    )


def cauchy_convolve(f, t, s=0j, tol=1e-9):
    """Value of the kernel convolution (1/2i*pi) int f(xi,s)/(1-xi/t) dmu."""
    if t == 0:
        raise SingularEvaluation("the convolution kernel is centered on t != 0")
    flat0, flat_inf = f.decay()
    if not (flat0 and flat_inf):
        raise QuadratureFailure(f"{f.name}: no rapid-decay certificate")
    value, _est = _convolution_integral(f, complex(t), s, 0, tol)
    return value


def convolution_remainder(f, t, s=0j, n=0, side="infinity", tol=1e-9):
    """Exact tail after n expansion terms, as a single well-conditioned
    integral: at infinity the remainder is
    t^-(n+1) (1/2i*pi) int xi^(n+1) f / (1 - xi/t) dmu, and symmetrically
    with negative powers at zero."""
    t = complex(t)
    if t == 0:
        raise SingularEvaluation("remainders are evaluated away from 0")
    # the raw integral is O(1); relative accuracy carries through the
    # division by t^(n+1), which is what the ratio checks need
    if side in ("infinity", "inf"):
        value, est = _convolution_integral(f, t, s, n + 1, tol, rel_tol=3e-6)
        return value / t ** (n + 1), est / abs(t) ** (n + 1)
    value, est = _convolution_integral(f, t, s, -(n + 1), tol, rel_tol=3e-6, mode="zero")
    return -value * t ** (n + 1), est * abs(t) ** (n + 1)


def asymptotic_remainder_check(f, n, radii, side="infinity", s=0j, tol=1e-9):
    """Verify that tails after n terms scale like radius^-(n+1) across
    consecutive radius doublings (within half an octave either way)."""
    radii = tuple(sorted(float(r) for r in radii))
    if side in ("infinity", "inf") and radii[0] <= 1.0:
        raise ValueError("infinity-side radii must lie outside the unit circle")
    rems = []
    for r in radii:
        t = r if side in ("infinity", "inf") else 1.0 / r
        value, _ = convolution_remainder(f, t, s, n, side, tol)
        rems.append(abs(value))
    ratios = []
    offsets = []
    for lo, hi, a, b in zip(radii[:-1], radii[1:], rems[:-1], rems[1:]):
        doubling = math.log2(hi / lo)
        if b == 0.0:
            ratios.append(math.inf if a else 1.0)
            offsets.append(0.0 if a == b == 0.0 else math.inf)
            continue
        ratio = a / b
        ratios.append(ratio)
        offsets.append(abs(math.log2(ratio) / doubling - (n + 1)))
    verdict = all(off <= 0.5 for off in offsets)
    return ResidualReport(
        operator=f"remainder order after {n} terms ({side} side)",
        function_id=f.name,
        grid=tuple(complex(r) for r in radii),
        residuals=tuple(rems),
        relative=tuple(offsets),
        tolerance=0.5,
        verdict=verdict,
        extras={"ratios": [float(x) for x in ratios]},
    )


# -- commutation of the expansion map with the operators ---------------------------


def epsilon_commutation_check(f, s, k_max, tol=1e-6, quad_tol=ABS_TOL):
    """Moment-table transport checks for the two displayed operators.

    (a) Euler case: the table of (t d/dt - s - 1) f must equal the table of
        f transported coefficient-wise by (n - s - 1) at actual exponent n,
        i.e. by (-k - s - 1) at infinity and (k - s - 1) at zero.
    (b) Shift-cycle case: the table of f(t, s+1)/t - f(t, s) must equal the
        index-shifted table with s -> s+1; the zero-side order-1 coefficient
        overflows into the constant term at infinity with a minus sign.
    """
    if not f.separable:
        raise NotSeparable(f"{f.name} does not expose its s-dependence")
    s = complex(s)
    table = moment_table(f, k_max + 1, s, quad_tol)
    table_up = moment_table(f, k_max + 1, s + 1, quad_tol)

    residuals = []
    relative = []
    labels = []

    ftheta = f.euler()
    table_theta = moment_table(ftheta, k_max, s, quad_tol)
    # residuals are judged against the table scale: entries that vanish
    # (mismatched angular modes) would otherwise divide noise by noise
    scale_0 = max(max(abs(v) for v in table.inf_side + table.zero_side), 1e-300)
    for k in range(0, k_max + 1):
        lhs = table_theta.at_inf(k) - (s + 1) * table.at_inf(k)
        rhs = (-k - s - 1) * table.at_inf(k)
        residuals.append(abs(lhs - rhs))
        relative.append(abs(lhs - rhs) / (scale_0 * (abs(s) + k + 1)))
        labels.append(f"euler:inf:{k}")
    for k in range(1, k_max + 1):
        lhs = table_theta.at_zero(k) - (s + 1) * table.at_zero(k)
        rhs = (k - s - 1) * table.at_zero(k)
        residuals.append(abs(lhs - rhs))
        relative.append(abs(lhs - rhs) / (scale_0 * (abs(s) + k + 1)))
        labels.append(f"euler:zero:{k}")

    h = f.shift_s(1).times_t(-1) + f.scale(-1)
    table_h = moment_table(h, k_max, s, quad_tol)
    mags = [abs(v) for v in table.inf_side + table.zero_side + table_up.inf_side]
    scale_h = max(max(mags), 1e-300)
    for k in range(0, k_max + 1):
        lhs = table_h.at_inf(k)
        if k == 0:
            rhs = -table_up.at_zero(1) - table.at_inf(0)
        else:
            rhs = table_up.at_inf(k - 1) - table.at_inf(k)
        residuals.append(abs(lhs - rhs))
        relative.append(abs(lhs - rhs) / scale_h)
        labels.append(f"cycle:inf:{k}")
    for k in range(1, k_max + 1):
        lhs = table_h.at_zero(k)
        rhs = table_up.at_zero(k + 1) - table.at_zero(k)
        residuals.append(abs(lhs - rhs))
        relative.append(abs(lhs - rhs) / scale_h)
        labels.append(f"cycle:zero:{k}")

    verdict = all(r <= tol for r in relative)
    return ResidualReport(
        operator="expansion-map commutation (euler and shift-cycle)",
        function_id=f.name,
        grid=(s,),
        residuals=tuple(residuals),
        relative=tuple(relative),
        tolerance=tol,
        verdict=verdict,
        extras={"checks": labels, "k_max": k_max},
    )


# -- the ray transform -----------------------------------------------------------


def _ray_window(f, re_s, tol):
    k = np.arange(-84.0, 85.0)
    probes = np.exp2(k)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        weight = np.abs(f(probes.astype(complex), 0j)) * probes ** (re_s)
    weight = np.nan_to_num(weight, nan=0.0, posinf=0.0, neginf=0.0)
    active = np.nonzero(weight > tol * 1e-4)[0]
    if active.size == 0:
        return None
    return 2.0 ** (k[active[0]] - 2), 2.0 ** (k[active[-1]] + 2)


def ray_mellin(f, s, tol=ABS_TOL):
    """Adaptive transform along the positive ray: integral of f(t) t^(s-1) dt.

    Returns (value, error estimate); raises QuadratureFailure when the
    estimate exceeds the tolerance.
    """
    s = complex(s)
    window = _ray_window(f, s.real, tol)
    if window is None:
        return 0j, 0.0
    lo, hi = window
    edges = np.concatenate([
        geometric_edges(lo, 1.0, 2.0) if lo < 1.0 else [lo],
        geometric_edges(max(lo, 1.0), hi, 2.0)[1:] if hi > 1.0 else [],
    ])
    edges = np.unique(edges)

    def integrate(order):
        x, w = panel_nodes(edges, order)
        xc = x.astype(complex)
        vals = f(xc, s) * xc ** (s - 1)
        return csum(vals * w)

    fine = integrate(24)
    coarse = integrate(16)
    est = abs(fine - coarse)
    if est > max(tol, 1e-8 * abs(fine)):
        raise QuadratureFailure(
            f"ray transform estimate {est:.3e} above tolerance {tol:.3e} at s={s}"
        )
    return fine, est


def annihilation_guard(P, f, t_samples=None, tol=1e-8):
    """Numeric check that P annihilates f pointwise on a sample grid."""
    if t_samples is None:
        t_samples = np.exp(np.linspace(math.log(0.25), math.log(4.0), 12))
    ts = np.asarray(t_samples, dtype=complex)
    parts = [g(ts, 0j) for g in apply_operator_terms(P, f)]
    total = np.sum(parts, axis=0)
    scale = np.max(np.abs(parts), axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    worst = float(np.max(np.abs(total) / scale))
    if worst > tol:
        raise PreconditionFailed(
            f"operator does not annihilate {f.name}: relative residual {worst:.3e}"
        )
    return worst


def verify_commutation(P, f, s_grid, tol=1e-8, guard_tol=1e-8, quad_tol=ABS_TOL):
    """End-to-end commutation check: P annihilates f on the ray, so the
    transform image of P must annihilate the ray transform of f."""
    annihilation_guard(P, f, tol=guard_tol)
    Q = mellin_op(P)
    cache = {}

    def F(z):
        if z not in cache:
            cache[z] = ray_mellin(f, z, quad_tol)[0]
        return cache[z]

    residuals = []
    relative = []
    for s in s_grid:
        parts = apply_difference_terms(Q, F, complex(s))
        total = abs(sum(parts))
        scale = max(max(abs(p) for p in parts), 1e-300)
        residuals.append(total)
        relative.append(total / scale)
    verdict = all(r <= tol for r in relative)
    return ResidualReport(
        operator=format_operator(P),
        function_id=f.name,
        grid=tuple(complex(s) for s in s_grid),
        residuals=tuple(residuals),
        relative=tuple(relative),
        tolerance=tol,
        verdict=verdict,
        extras={"difference_operator": format_operator(Q)},
    )


# -- parameter-disc expansions ------------------------------------------------------


@dataclass(frozen=True)
class ExpansionResult:
    """Contour-extracted disc coefficients and their certified bounds."""

    center: complex
    radius: float
    alpha_max: int
    t_grid: tuple
    coefficients: tuple  # coefficients[alpha][i] over the t grid
    sup_on_circle: float
    bound_ok: bool
    bound_margin: float
    normal_sums: tuple  # partial sums of ||u_alpha|| rho^alpha at rho = R/2
    reconstruction_residual: float
    reconstruction_ok: bool
    derivative_coefficients: tuple | None = None

    def to_dict(self):
        return {
            "center": _cpx(self.center),
            "radius": self.radius,
            "alpha_max": self.alpha_max,
            "t_grid": [_cpx(t) for t in self.t_grid],
            "coefficient_sup": [
                max(abs(v) for v in row) for row in self.coefficients
            ],
            "sup_on_circle": self.sup_on_circle,
            "bound_ok": bool(self.bound_ok),
            "bound_margin": self.bound_margin,
            "normal_sum": self.normal_sums[-1] if self.normal_sums else 0.0,
            "reconstruction_residual": self.reconstruction_residual,
            "reconstruction_ok": bool(self.reconstruction_ok),
        }


def parameter_expansion(
    f2,
    center=0j,
    radius=0.5,
    alpha_max=12,
    t_grid=(1.0, 2.0, 3.0, 4.0),
    n_nodes=256,
    recon_tol=1e-8,
    dfdt=None,
):
    """Disc coefficients u_alpha(t) of T -> f2(t, T) by contour quadrature.

    The uniform circle rule is spectrally accurate here; coefficients obey
    the circle bound sup_t |u_alpha| <= sup_circle |f2| / radius^alpha, the
    partial sums of ||u_alpha|| (R/2)^alpha converge, and the truncated
    series reconstructs f2 on the half-radius circle.
    """
    t_grid = tuple(complex(t) for t in t_grid)
    ts = np.asarray(t_grid, dtype=complex)
    phis, _ = periodic_nodes(n_nodes)
    ring = center + radius * np.exp(1j * phis)
    samples = np.array([np.asarray(f2(ts, xi), dtype=complex) for xi in ring])
    sup_circle = float(np.max(np.abs(samples)))

    coeffs = []
    for alpha in range(alpha_max + 1):
        w = np.exp(-1j * alpha * phis) / (n_nodes * radius ** alpha)
        coeffs.append(tuple(complex(z) for z in (w[:, None] * samples).sum(axis=0)))

    sup_alpha = [max(abs(v) for v in row) for row in coeffs]
    margin = max(
        (sup_alpha[a] * radius ** a) / max(sup_circle, 1e-300)
        for a in range(alpha_max + 1)
    )
    bound_ok = margin <= 1.0 + 1e-6

    rho = radius / 2.0
    sums = []
    acc = 0.0
    for a in range(alpha_max + 1):
        acc += sup_alpha[a] * rho ** a
        sums.append(acc)

    # reconstruction on the half-radius circle
    recon_phis, _ = periodic_nodes(16)
    worst = 0.0
    for psi in recon_phis:
        T = center + rho * np.exp(1j * psi)
        series = np.zeros_like(ts)
        for a in range(alpha_max, -1, -1):
            series = series * (T - center) + np.asarray(coeffs[a])
        exact = np.asarray(f2(ts, T), dtype=complex)
        worst = max(worst, float(np.max(np.abs(series - exact))))
    recon_rel = worst / max(sup_circle, 1e-300)

    deriv = None
    if dfdt is not None:
        dsamples = np.array([np.asarray(dfdt(ts, xi), dtype=complex) for xi in ring])
        deriv = []
        for alpha in range(alpha_max + 1):
            w = np.exp(-1j * alpha * phis) / (n_nodes * radius ** alpha)
            deriv.append(tuple(complex(z) for z in (w[:, None] * dsamples).sum(axis=0)))
        deriv = tuple(deriv)

    return ExpansionResult(
        center=complex(center),
        radius=float(radius),
        alpha_max=alpha_max,
        t_grid=t_grid,
        coefficients=tuple(coeffs),
        sup_on_circle=sup_circle,
        bound_ok=bound_ok,
        bound_margin=float(margin),
        normal_sums=tuple(sums),
        reconstruction_residual=recon_rel,
        reconstruction_ok=recon_rel <= recon_tol,
        derivative_coefficients=deriv,
    )
