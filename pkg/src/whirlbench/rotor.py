"""
Small MDOF rotor models with gyroscopic coupling.

The equation of motion is M q'' + (C + Omega G) q' + K q = 0 with a
skew-symmetric gyroscopic matrix G scaled by the spin speed Omega.  As Omega
grows each lateral mode pair splits into a forward whirl (orbit in the spin
sense, frequency rising) and a backward whirl (counter-orbit, frequency
falling); sweeping Omega and collecting the frequencies gives the Campbell
diagram.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, ValidationError
from .frf import RECEPTANCE, FrfCurve, _check_grid

FORWARD = "forward"
BACKWARD = "backward"
PLANAR = "planar"

# orbit-area test threshold, relative to |v_y|^2 + |v_z|^2
_PLANAR_TOL = 1e-8

RPM_TO_RAD_S = 2.0 * np.pi / 60.0


def rpm_to_rad_s(rpm):
    return np.asarray(rpm, dtype=float) * RPM_TO_RAD_S


def rad_s_to_rpm(omega):
    return np.asarray(omega, dtype=float) / RPM_TO_RAD_S


def _check_square(name, mat, n):
    mat = np.asarray(mat, dtype=float)
    if mat.shape != (n, n):
        raise ValidationError("%s must be %dx%d, got %s" % (name, n, n, mat.shape))
    return mat


@dataclass
class RotorSystem:
    """
    Mass, damping, stiffness and gyroscopic matrices of a rotor plus its spin
    speed (rad/s).  ``whirl_pairs`` lists index pairs of orthogonal lateral
    DOFs at the same node, used to classify orbit direction.
    """

    mass_matrix: np.ndarray
    damping_matrix: np.ndarray
    stiffness_matrix: np.ndarray
    gyroscopic_matrix: np.ndarray
    spin_speed: float = 0.0
    dof_labels: list = field(default_factory=list)
    whirl_pairs: list = field(default_factory=list)

    def __post_init__(self):
        M = np.asarray(self.mass_matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValidationError("mass_matrix must be square, got %s" % (M.shape,))
        n = M.shape[0]
        C = _check_square("damping_matrix", self.damping_matrix, n)
        K = _check_square("stiffness_matrix", self.stiffness_matrix, n)
        G = _check_square("gyroscopic_matrix", self.gyroscopic_matrix, n)
        if not np.allclose(M, M.T, rtol=0, atol=1e-12 * max(1.0, np.abs(M).max())):
            raise ValidationError("mass_matrix must be symmetric")
        try:
            np.linalg.cholesky(M)
        except np.linalg.LinAlgError:
            raise ValidationError("mass_matrix must be positive definite") from None
        if not np.allclose(K, K.T, rtol=0, atol=1e-12 * max(1.0, np.abs(K).max())):
            raise ValidationError("stiffness_matrix must be symmetric")
        if np.any(np.linalg.eigvalsh(K) < -1e-9 * max(1.0, np.abs(K).max())):
            raise ValidationError("stiffness_matrix must be positive semi-definite")
        if not np.array_equal(G, -G.T):
            raise ValidationError("gyroscopic_matrix must be exactly skew-symmetric")
        if self.spin_speed < 0:
            raise ValidationError("spin_speed must be >= 0 (rad/s)")
        self.mass_matrix, self.damping_matrix = M, C
        self.stiffness_matrix, self.gyroscopic_matrix = K, G
        if not self.dof_labels:
            self.dof_labels = [("dof%d" % i, "") for i in range(n)]
        if len(self.dof_labels) != n:
            raise ValidationError("dof_labels must have one entry per DOF")
        self.whirl_pairs = [tuple(p) for p in self.whirl_pairs]
        for p in self.whirl_pairs:
            if len(p) != 2 or not all(0 <= i < n for i in p) or p[0] == p[1]:
                raise ValidationError("whirl_pairs entries must be distinct DOF indices, got %s" % (p,))

    @property
    def n_dof(self):
        return self.mass_matrix.shape[0]

    def with_spin_speed(self, spin_speed):
        return RotorSystem(self.mass_matrix, self.damping_matrix, self.stiffness_matrix,
                           self.gyroscopic_matrix, float(spin_speed),
                           list(self.dof_labels), list(self.whirl_pairs))


@dataclass
class WhirlMode:
    """One conjugate eigenpair of the rotor, positive-frequency representative."""

    eigenvalue: complex
    frequency: float          # |Im(eigenvalue)|, rad/s
    damping_ratio: float
    direction: str            # forward / backward / planar
    eigenvector: np.ndarray   # complex displacement partition


@dataclass
class CampbellDiagram:
    """Whirl frequencies (rad/s) traced over a spin-speed grid (rad/s)."""

    spin_speeds: np.ndarray
    branches: list  # list of dicts: {"direction": str, "frequencies": ndarray}

    def as_rows(self):
        """Rows (speed_rpm, branch_id, direction, freq_hz) for CSV export."""
        rows = []
        rpm = rad_s_to_rpm(self.spin_speeds)
        for b, branch in enumerate(self.branches):
            for s in range(self.spin_speeds.size):
                rows.append((float(rpm[s]), b, branch["direction"],
                             float(branch["frequencies"][s] / (2.0 * np.pi))))
        return rows


# Default model: steel shaft, pinned at both ends, one centred disk.  The
# four DOFs are the disk's two lateral translations (y, z) and two tilts
# (about y, about z).  By midspan symmetry translation and tilt decouple, so
# K and M are diagonal; the gyroscopic moment couples only the tilt pair.
_DEFAULTS = {
    "shaft_diameter": 0.010,    # m
    "shaft_length": 0.610,      # m
    "youngs_modulus": 200e9,    # Pa
    "density": 7850.0,          # kg/m^3
    "disk_mass": 0.8,           # kg
    "polar_inertia": 1e-3,      # kg m^2
    "diametral_inertia": 5e-4,  # kg m^2 (thin disk: half the polar inertia)
    "damping": 0.0,             # viscous, N s/m on every DOF
    "spin_speed": 0.0,          # rad/s
}


def build_default_rotor(overrides=None):
    """
    4-DOF rotor: 10 mm diameter, 610 mm long steel shaft pinned at both ends
    carrying a centred disk (0.8 kg, polar inertia 1e-3 kg m^2).

    DOF order: y, z translations then tilt_y, tilt_z rotations at the disk.
    Midspan bending stiffness 48 EI / L^3 (translation) and 12 EI / L
    (tilt); 17/35 of the shaft mass rides along with the disk translation.
    Recognized override keys are the ``_DEFAULTS`` names; all must be
    positive except ``damping`` and ``spin_speed`` which may be zero.
    """
    params = dict(_DEFAULTS)
    if overrides:
        for key, value in overrides.items():
            if key not in params:
                raise ValidationError(
                    "unrecognized override %r (known keys: %s)" % (key, sorted(params)))
            zero_ok = key in ("damping", "spin_speed")
            if not np.isscalar(value) or value < 0 or (value == 0 and not zero_ok):
                raise ValidationError("override %r must be a positive number, got %r" % (key, value))
            params[key] = float(value)

    d, length = params["shaft_diameter"], params["shaft_length"]
    area_moment = np.pi * d**4 / 64.0
    ei = params["youngs_modulus"] * area_moment
    k_trans = 48.0 * ei / length**3
    k_tilt = 12.0 * ei / length
    shaft_mass = params["density"] * np.pi * (d / 2.0) ** 2 * length
    m_eff = params["disk_mass"] + (17.0 / 35.0) * shaft_mass
    i_d, i_p = params["diametral_inertia"], params["polar_inertia"]

    M = np.diag([m_eff, m_eff, i_d, i_d])
    K = np.diag([k_trans, k_trans, k_tilt, k_tilt])
    C = params["damping"] * np.eye(4)
    G = np.zeros((4, 4))
    G[2, 3] = i_p
    G[3, 2] = -i_p
    labels = [("disk", "y"), ("disk", "z"), ("disk", "tilt_y"), ("disk", "tilt_z")]
    return RotorSystem(M, C, K, G, params["spin_speed"], labels,
                       whirl_pairs=[(0, 1), (2, 3)])


def classify_whirl(eigenvector, dof_pair, planar_tol=_PLANAR_TOL):
    """
    Orbit sense of a mode at one lateral DOF pair (y, z).

    The physical orbit is (Re(v_y e^{iwt}), Re(v_z e^{iwt})); its signed area
    is proportional to Im(v_y conj(v_z)).  Positive area means the orbit runs
    in the spin sense (forward), negative against it (backward); below
    ``planar_tol`` relative to |v_y|^2 + |v_z|^2 the orbit is a line.
    """
    v = np.asarray(eigenvector, dtype=complex)
    if not np.any(v != 0):
        raise ValidationError("cannot classify a zero eigenvector")
    vy, vz = v[dof_pair[0]], v[dof_pair[1]]
    scale = abs(vy) ** 2 + abs(vz) ** 2
    area = float(np.imag(vy * np.conj(vz)))
    if scale == 0.0 or abs(area) < planar_tol * scale:
        return PLANAR
    return FORWARD if area > 0 else BACKWARD


def whirl_eigen(system):
    """
    Whirl modes of the rotor at its spin speed.

    Solves the quadratic eigenproblem (M s^2 + (C + Omega G) s + K) v = 0 by
    the first-order companion form and keeps one representative per conjugate
    pair (positive imaginary part).  Modes come back sorted by frequency,
    each classified via the strongest whirl pair of its eigenvector.
    """
    n = system.n_dof
    M, K = system.mass_matrix, system.stiffness_matrix
    Ceff = system.damping_matrix + system.spin_speed * system.gyroscopic_matrix
    try:
        minv_k = np.linalg.solve(M, K)
        minv_c = np.linalg.solve(M, Ceff)
    except np.linalg.LinAlgError as exc:
        raise NumericError("mass matrix is singular: %s" % exc) from None
    companion = np.block([
        [np.zeros((n, n)), np.eye(n)],
        [-minv_k, -minv_c],
    ])
    try:
        values, vectors = np.linalg.eig(companion)
    except np.linalg.LinAlgError as exc:
        raise NumericError("companion eigen solve failed to converge: %s" % exc) from None

    pairs = system.whirl_pairs or [(0, 1)] if n >= 2 else []
    modes = []
    for idx in np.argsort(values.imag):
        lam = values[idx]
        if lam.imag < 0:
            continue  # conjugate partner carries the same information
        if lam.imag == 0 and any(np.isclose(lam.real, m.eigenvalue.real) and m.frequency == 0
                                 for m in modes):
            continue  # real pairs: keep one representative too
        v = vectors[:n, idx]
        v = v / np.linalg.norm(v)
        freq = abs(lam.imag)
        damping = -lam.real / abs(lam) if lam != 0 else 0.0
        if pairs:
            best = max(pairs, key=lambda p: abs(v[p[0]]) ** 2 + abs(v[p[1]]) ** 2)
            direction = classify_whirl(v, best)
        else:
            direction = PLANAR
        modes.append(WhirlMode(complex(lam), float(freq), float(damping), direction, v))
    modes.sort(key=lambda m: m.frequency)
    return modes


def campbell(system, speeds):
    """
    Campbell diagram data: whirl frequencies traced over a spin-speed list.

    ``speeds`` must be non-empty, non-negative and strictly increasing
    (rad/s).  Branches are continued from one speed to the next by nearest
    frequency; ties are broken by eigenvector correlation.  Each branch is
    tagged with the direction it settles into at the highest speed, where
    forward/backward are unambiguous.
    """
    speeds = np.atleast_1d(np.asarray(speeds, dtype=float))
    if speeds.size == 0:
        raise ValidationError("speed list must be non-empty")
    if np.any(speeds < 0) or np.any(np.diff(speeds) <= 0):
        raise ValidationError("speeds must be non-negative and strictly increasing")

    per_speed = [whirl_eigen(system.with_spin_speed(s)) for s in speeds]
    n_branch = len(per_speed[0])
    freqs = np.zeros((n_branch, speeds.size))
    freqs[:, 0] = [m.frequency for m in per_speed[0]]
    last_vectors = [m.eigenvector for m in per_speed[0]]
    last_direction = [m.direction for m in per_speed[0]]

    for s in range(1, speeds.size):
        modes = per_speed[s]
        if len(modes) != n_branch:
            raise NumericError(
                "mode count changed from %d to %d at speed index %d; cannot continue branches"
                % (n_branch, len(modes), s))
        taken = set()
        order = np.argsort(-freqs[:, s - 1])  # settle fast-moving high branches first
        for b in order:
            candidates = [i for i in range(n_branch) if i not in taken]
            gaps = np.array([abs(modes[i].frequency - freqs[b, s - 1]) for i in candidates])
            best = np.flatnonzero(gaps <= gaps.min() * (1 + 1e-9))
            if best.size > 1:
                # equidistant candidates: pick by eigenvector correlation
                corr = [abs(np.vdot(last_vectors[b], modes[candidates[i]].eigenvector))
                        for i in best]
                pick = candidates[best[int(np.argmax(corr))]]
            else:
                pick = candidates[int(best[0])]
            taken.add(pick)
            freqs[b, s] = modes[pick].frequency
            last_vectors[b] = modes[pick].eigenvector
            last_direction[b] = modes[pick].direction

    branches = [{"direction": last_direction[b], "frequencies": freqs[b]}
                for b in range(n_branch)]
    return CampbellDiagram(speeds, branches)


def rotor_receptance(system, j, k, grid, loss_factor=0.0):
    """
    Exact receptance of the spinning rotor between DOFs j and k, by direct
    inversion of K (1 + i eta) - w^2 M + i w (C + Omega G) on each grid point.

    This is the "measured" FRF of the rotor: with spin it carries both the
    forward and the backward whirl resonance of each coupled mode pair.
    """
    grid = _check_grid(grid)
    n = system.n_dof
    if not (0 <= j < n and 0 <= k < n):
        raise ValidationError("DOF pair (%d, %d) out of range for %d DOFs" % (j, k, n))
    if loss_factor < 0:
        raise ValidationError("loss_factor must be >= 0")
    K = system.stiffness_matrix * (1.0 + 1j * loss_factor)
    M = system.mass_matrix
    Ceff = system.damping_matrix + system.spin_speed * system.gyroscopic_matrix
    unit = np.zeros(n)
    unit[k] = 1.0
    values = np.empty(grid.size, dtype=complex)
    for i, w in enumerate(grid):
        dyn = K - w * w * M + 1j * w * Ceff
        try:
            values[i] = np.linalg.solve(dyn, unit)[j]
        except np.linalg.LinAlgError:
            raise NumericError(
                "dynamic stiffness is singular at grid index %d (w = %g rad/s); "
                "add damping or a loss factor" % (i, w)) from None
    meta = {"model": "rotor_direct", "spin_speed": system.spin_speed,
            "loss_factor": loss_factor}
    return FrfCurve(grid, values, RECEPTANCE, (j, k), "regenerated", meta)
