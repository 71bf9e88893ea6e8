"""
Synthesis of frequency response functions from SDOF parameters or a modal model.

All frequencies are angular (rad/s) internally.  A receptance curve relates
displacement response to force; mobility and accelerance follow by pointwise
iw and -w^2 factors.  With structural (hysteretic) damping the receptance of
a single mode traces an exact circle in the complex plane, which is what the
Nyquist extraction stage relies on.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import KindMismatchError, PoleError, ValidationError

RECEPTANCE = "receptance"
MOBILITY = "mobility"
ACCELERANCE = "accelerance"
_KINDS = (RECEPTANCE, MOBILITY, ACCELERANCE)


@dataclass(frozen=True)
class SdofStructural:
    """Single mass on a spring with hysteretic loss stiffness.

    stiffness k (N/m), mass m (kg) and structural_damping h (N/m): the
    receptance is 1 / (k - w^2 m + i h), loss factor eta = h / k.
    """

    stiffness: float
    mass: float
    structural_damping: float = 0.0

    def __post_init__(self):
        if self.stiffness <= 0:
            raise ValidationError("stiffness must be > 0, got %r" % (self.stiffness,))
        if self.mass <= 0:
            raise ValidationError("mass must be > 0, got %r" % (self.mass,))
        if self.structural_damping < 0:
            raise ValidationError(
                "structural_damping must be >= 0, got %r" % (self.structural_damping,)
            )

    @property
    def natural_frequency(self):
        return float(np.sqrt(self.stiffness / self.mass))

    @property
    def loss_factor(self):
        return self.structural_damping / self.stiffness


@dataclass(frozen=True)
class SdofViscous:
    """Single mass on a spring with a viscous dashpot (c in N s/m)."""

    stiffness: float
    mass: float
    viscous_damping: float = 0.0

    def __post_init__(self):
        if self.stiffness <= 0:
            raise ValidationError("stiffness must be > 0, got %r" % (self.stiffness,))
        if self.mass <= 0:
            raise ValidationError("mass must be > 0, got %r" % (self.mass,))
        if self.viscous_damping < 0:
            raise ValidationError(
                "viscous_damping must be >= 0, got %r" % (self.viscous_damping,)
            )

    @property
    def natural_frequency(self):
        return float(np.sqrt(self.stiffness / self.mass))


class ModalModel:
    """
    Modal model of a linear structure: natural frequencies, loss factors and
    a mode-shape matrix, from which any receptance of the structure follows.

    :param natural_frequencies: array of w_r in rad/s, ascending, all > 0.
    :param loss_factors: array of eta_r >= 0, same length.
    :param mode_shapes: (n_dof, n_modes) matrix, column r is mode r.  Real
        shapes are the proportionally damped default; complex shapes are
        accepted and flagged in ``has_complex_shapes``.
    :param dof_labels: optional list of labels, one per DOF row.

    Shapes are assumed mass-normalized, so the complex eigenvalue of mode r
    is lambda_r = w_r^2 (1 + i eta_r) and the receptance between DOFs j and k
    is the sum over modes of phi_jr phi_kr / (lambda_r - w^2).
    """

    def __init__(self, natural_frequencies, loss_factors, mode_shapes, dof_labels=None):
        freqs = np.atleast_1d(np.asarray(natural_frequencies, dtype=float))
        etas = np.atleast_1d(np.asarray(loss_factors, dtype=float))
        shapes = np.atleast_2d(np.asarray(mode_shapes))
        if freqs.ndim != 1 or etas.shape != freqs.shape:
            raise ValidationError("natural_frequencies and loss_factors must be 1-D and matching")
        if np.any(freqs <= 0):
            raise ValidationError("natural frequencies must be > 0")
        if np.any(etas < 0):
            raise ValidationError("loss factors must be >= 0")
        if np.any(np.diff(freqs) < 0):
            raise ValidationError("modes must be ordered by ascending natural frequency")
        if shapes.shape[1] != freqs.size:
            raise ValidationError(
                "mode_shapes must have one column per mode: got %s for %d modes"
                % (shapes.shape, freqs.size)
            )
        self.natural_frequencies = freqs
        self.loss_factors = etas
        self.has_complex_shapes = bool(np.iscomplexobj(shapes) and np.any(shapes.imag != 0))
        self.mode_shapes = shapes.astype(complex) if self.has_complex_shapes else shapes.real.astype(float)
        if dof_labels is not None and len(dof_labels) != shapes.shape[0]:
            raise ValidationError("dof_labels must match the number of DOF rows")
        self.dof_labels = list(dof_labels) if dof_labels is not None else None

    @property
    def n_modes(self):
        return self.natural_frequencies.size

    @property
    def n_dof(self):
        return self.mode_shapes.shape[0]

    @property
    def eigenvalues(self):
        """Complex lambda_r = w_r^2 (1 + i eta_r)."""
        return self.natural_frequencies**2 * (1.0 + 1j * self.loss_factors)


@dataclass
class FrfCurve:
    """A complex spectrum over a strictly increasing frequency grid (rad/s)."""

    grid: np.ndarray
    values: np.ndarray
    kind: str = RECEPTANCE
    dof_pair: tuple = (0, 0)
    provenance: str = "regenerated"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.kind not in _KINDS:
            raise ValidationError("kind must be one of %s, got %r" % (_KINDS, self.kind))
        if self.grid.ndim != 1 or self.grid.size != self.values.size:
            raise ValidationError("grid and values must be 1-D and the same length")
        if self.grid.size and (self.grid[0] < 0 or np.any(np.diff(self.grid) <= 0)):
            raise ValidationError("grid must be strictly increasing and non-negative")
        if not np.all(np.isfinite(self.values)):
            bad = np.flatnonzero(~np.isfinite(self.values))
            raise ValidationError("non-finite FRF values at grid indices %s" % bad[:10].tolist())

    def __len__(self):
        return self.grid.size

    @property
    def grid_hz(self):
        return self.grid / (2.0 * np.pi)

    def band(self, omega_lo, omega_hi):
        """Slice of the curve with omega_lo <= w <= omega_hi (same arrays, no copy of metadata)."""
        sel = (self.grid >= omega_lo) & (self.grid <= omega_hi)
        return FrfCurve(self.grid[sel], self.values[sel], self.kind, self.dof_pair,
                        self.provenance, dict(self.metadata))


def default_grid(omega_max, n_points=801, omega_min=0.0):
    """Linearly spaced frequency grid; 801 points unless asked otherwise."""
    if not omega_max > omega_min >= 0:
        raise ValidationError("need omega_max > omega_min >= 0")
    if n_points < 2:
        raise ValidationError("grid needs at least 2 points")
    return np.linspace(omega_min, omega_max, int(n_points))


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise ValidationError("frequency grid must be a non-empty 1-D array")
    if grid[0] < 0 or np.any(np.diff(grid) <= 0):
        raise ValidationError("frequency grid must be strictly increasing and non-negative")
    return grid


def _check_poles(denominator, what):
    hit = np.flatnonzero(denominator == 0)
    if hit.size:
        raise PoleError(
            "%s has an undamped pole exactly on the grid at indices %s"
            % (what, hit.tolist()),
            indices=hit,
        )


def sdof_receptance_structural(params, grid):
    """
    Receptance of a structurally damped SDOF system: 1 / (k - w^2 m + i h).

    At w = 0 the curve starts at (k - i h) / (k^2 + h^2); over any grid it
    lies on the circle centred at (0, -1/(2h)) with radius 1/(2h).
    """
    grid = _check_grid(grid)
    den = params.stiffness - grid**2 * params.mass + 1j * params.structural_damping
    _check_poles(den, "structural SDOF receptance")
    return FrfCurve(grid, 1.0 / den, RECEPTANCE, (0, 0), "regenerated",
                    {"model": "sdof_structural"})


def sdof_receptance_viscous(params, grid):
    """Receptance of a viscously damped SDOF system: 1 / (k - w^2 m + i w c)."""
    grid = _check_grid(grid)
    den = params.stiffness - grid**2 * params.mass + 1j * grid * params.viscous_damping
    _check_poles(den, "viscous SDOF receptance")
    return FrfCurve(grid, 1.0 / den, RECEPTANCE, (0, 0), "regenerated",
                    {"model": "sdof_viscous"})


def mdof_receptance(model, j, k, grid, provenance="regenerated"):
    """
    Receptance between response DOF j and excitation DOF k of a modal model:
    the sum over modes of phi_jr phi_kr / (lambda_r - w^2).

    Reciprocity holds by construction: (j, k) and (k, j) give the same curve.
    """
    grid = _check_grid(grid)
    n_dof = model.n_dof
    if not (0 <= j < n_dof and 0 <= k < n_dof):
        raise ValidationError(
            "DOF pair (%d, %d) out of range for a %d-DOF model" % (j, k, n_dof)
        )
    lam = model.eigenvalues
    values = np.zeros(grid.shape, dtype=complex)
    w2 = grid**2
    for r in range(model.n_modes):
        den = lam[r] - w2
        _check_poles(den, "mode %d (undamped)" % r)
        values += model.mode_shapes[j, r] * model.mode_shapes[k, r] / den
    meta = {"model": "modal", "n_modes": model.n_modes,
            "shape_normalization": "mass", "complex_shapes": model.has_complex_shapes}
    return FrfCurve(grid, values, RECEPTANCE, (j, k), provenance, meta)


def synthesize_unmeasured(model, measured_pairs, target_pair, grid):
    """
    Synthesize the FRF of a DOF pair that was never measured.

    Same arithmetic as :func:`mdof_receptance`; the returned curve is tagged
    ``provenance="synthesized"`` so downstream reports can tell it apart from
    regenerated measured curves.
    """
    measured = {tuple(p) for p in measured_pairs}
    target = tuple(target_pair)
    if target in measured:
        raise ValidationError("target pair %s is already in the measured set" % (target,))
    return mdof_receptance(model, target[0], target[1], grid, provenance="synthesized")


def to_mobility(curve):
    """Mobility from receptance: pointwise i w multiplication, 0 at w = 0."""
    if curve.kind != RECEPTANCE:
        raise KindMismatchError("to_mobility needs a receptance curve, got %s" % curve.kind)
    return FrfCurve(curve.grid, 1j * curve.grid * curve.values, MOBILITY,
                    curve.dof_pair, curve.provenance, dict(curve.metadata))


def to_accelerance(curve):
    """Accelerance from receptance (-w^2 factor) or from mobility (i w factor)."""
    if curve.kind == RECEPTANCE:
        values = -(curve.grid**2) * curve.values
    elif curve.kind == MOBILITY:
        values = 1j * curve.grid * curve.values
    else:
        raise KindMismatchError("to_accelerance needs receptance or mobility, got %s" % curve.kind)
    return FrfCurve(curve.grid, values, ACCELERANCE,
                    curve.dof_pair, curve.provenance, dict(curve.metadata))


def to_receptance(curve):
    """
    Receptance from mobility or accelerance by dividing the i w factors out.

    The grid must not contain w = 0: both mobility and accelerance vanish
    there and the division is undefined.
    """
    if curve.kind == RECEPTANCE:
        return curve
    if curve.grid.size and curve.grid[0] == 0.0:
        raise ValidationError("cannot divide out i*w at w = 0; slice the DC bin off first")
    if curve.kind == MOBILITY:
        values = curve.values / (1j * curve.grid)
    elif curve.kind == ACCELERANCE:
        values = curve.values / -(curve.grid**2)
    else:
        raise KindMismatchError("unknown curve kind %r" % curve.kind)
    return FrfCurve(curve.grid, values, RECEPTANCE,
                    curve.dof_pair, curve.provenance, dict(curve.metadata))


def display_projections(curve):
    """
    The four classical FRF displays as real series over the grid:
    ``amplitude`` |a|, ``phase`` arg(a) in (-pi, pi], ``real`` and ``imaginary``.
    """
    return {
        "amplitude": np.abs(curve.values),
        "phase": np.angle(curve.values),
        "real": curve.values.real.copy(),
        "imaginary": curve.values.imag.copy(),
    }
