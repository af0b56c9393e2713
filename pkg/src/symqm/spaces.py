"""Real-manifold view of a finite-dimensional complex Hilbert space.

A complex vector ``psi`` of length ``n`` is identified with the real vector
``(q, p)`` of length ``2n`` where ``q_k = sqrt(2*hbar) * Re(psi_k)`` and
``p_k = sqrt(2*hbar) * Im(psi_k)``.  Under this scaling the bilinear form

    Omega(v, w) = 2 * hbar * Im <v|w>

(with the inner product conjugate-linear in its first argument) coincides
with the canonical flat form ``x^T J y`` on the real coordinates, where
``J = [[0, I], [-I, 0]]``.  The sign of Omega is fixed so that the
Hamiltonian vector field of an expectation-value function ``<A>`` is
``-(i/hbar) * A psi``; see :mod:`symqm.brackets`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, NormalizationError

__all__ = [
    "SymplecticSpace",
    "StatePoint",
    "TangentVector",
    "to_real_coords",
    "from_real_coords",
    "hermitian_inner",
    "symplectic_form",
    "norm",
]

NORMALIZATION_TOL = 1e-12


def _as_complex_vector(v) -> np.ndarray:
    """Coerce a StatePoint, TangentVector or array-like to a 1-d complex array."""
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"expected a vector, got shape {arr.shape}")
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SymplecticSpace:
    """Flat phase space underlying an ``n``-dimensional complex Hilbert space.

    Parameters
    ----------
    complex_dim : int
        Complex dimension ``n``; the real dimension is ``2n``.
    hbar : float
        Action scale, default 1 (natural units).

    Notes
    -----
    ``convention_sign`` is fixed at construction to ``+1``: with the inner
    product conjugate-linear in the first argument this is the unique sign
    for which ``Omega(-(i/hbar) A psi, Y) = d<A>(Y)`` holds for every
    Hermitian ``A``.
    """

    complex_dim: int
    hbar: float = 1.0
    convention_sign: int = field(default=1, init=False)

    def __post_init__(self):
        if int(self.complex_dim) < 1:
            raise ValueError("complex_dim must be a positive integer")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        object.__setattr__(self, "complex_dim", int(self.complex_dim))
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    @property
    def coord_scale(self) -> float:
        """Scale factor ``sqrt(2*hbar)`` between complex parts and real coordinates."""
        return float(np.sqrt(2.0 * self.hbar))

    def canonical_form_matrix(self) -> np.ndarray:
        """The ``2n x 2n`` matrix ``J = [[0, I], [-I, 0]]`` of the canonical form."""
        n = self.complex_dim
        j = np.zeros((2 * n, 2 * n))
        j[:n, n:] = np.eye(n)
        j[n:, :n] = -np.eye(n)
        return j

    def check_dim(self, v: np.ndarray, what: str = "vector") -> None:
        if v.shape[0] != self.complex_dim:
            raise DimensionMismatchError(
                f"{what} has length {v.shape[0]}, space has complex_dim {self.complex_dim}"
            )


@dataclass(frozen=True)
class StatePoint:
    """A point of the phase space: a length-``n`` complex amplitude vector.

    When constructed with ``normalized=True`` the norm is validated to lie
    within ``1e-12`` of one.
    """

    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        arr = _as_complex_vector(self.amplitudes).copy()
        object.__setattr__(self, "amplitudes", _readonly(arr))
        if self.normalized:
            deviation = abs(float(np.linalg.norm(arr)) - 1.0)
            if deviation > NORMALIZATION_TOL:
                raise NormalizationError(
                    f"state flagged normalized deviates from unit norm by {deviation:.3e}"
                )

    @classmethod
    def unit(cls, amplitudes) -> "StatePoint":
        """Normalize ``amplitudes`` and return the resulting state."""
        arr = _as_complex_vector(amplitudes)
        nrm = float(np.linalg.norm(arr))
        if nrm == 0.0:
            raise NormalizationError("cannot normalize the zero vector")
        return cls(arr / nrm, normalized=True)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True)
class TangentVector:
    """A tangent vector at a phase-space point, stored as a complex vector."""

    components: np.ndarray

    def __post_init__(self):
        arr = _as_complex_vector(self.components).copy()
        object.__setattr__(self, "components", _readonly(arr))

    @property
    def dim(self) -> int:
        return self.components.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)


def to_real_coords(psi, space: SymplecticSpace) -> np.ndarray:
    """Translate a complex vector into canonical real coordinates.

    Returns the length-``2n`` vector ``(q, p)`` with
    ``q_k = sqrt(2*hbar) Re(psi_k)`` and ``p_k = sqrt(2*hbar) Im(psi_k)``.
    """
    v = _as_complex_vector(psi)
    space.check_dim(v)
    s = space.coord_scale
    return np.concatenate([s * v.real, s * v.imag])


def from_real_coords(x, space: SymplecticSpace) -> np.ndarray:
    """Inverse of :func:`to_real_coords`.

    The round trip is exact whenever ``sqrt(2*hbar)`` is a power of two
    (e.g. ``hbar`` = 0.5 or 2); for other values of ``hbar`` each component
    round-trips to within one unit in the last place, which is the best any
    value-faithful scaling can do.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != space.real_dim:
        raise DimensionMismatchError(
            f"expected a real vector of length {space.real_dim}, got shape {arr.shape}"
        )
    n = space.complex_dim
    s = space.coord_scale
    return arr[:n] / s + 1j * (arr[n:] / s)


def hermitian_inner(v, w) -> complex:
    """Hermitian inner product, conjugate-linear in the first argument."""
    a = _as_complex_vector(v)
    b = _as_complex_vector(w)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return complex(np.vdot(a, b))


def symplectic_form(v, w, space: SymplecticSpace) -> float:
    """Evaluate ``Omega(v, w) = 2 * hbar * Im <v|w>``.

    Antisymmetric and non-degenerate; equals the canonical form
    ``x^T J y`` of the real coordinates of ``v`` and ``w``.
    """
    a = _as_complex_vector(v)
    space.check_dim(a)
    return space.convention_sign * 2.0 * space.hbar * hermitian_inner(a, w).imag


def norm(v) -> float:
    """Euclidean norm ``sqrt(<v|v>)``; zero iff ``v`` is the zero vector."""
    return float(np.linalg.norm(_as_complex_vector(v)))
