"""Typed records shared across the laboratory.

Scalar records (spectral points, law constants, census and residual reports)
are frozen and, on Python 3.10+, slotted. Records that carry ``numpy``
arrays are frozen with identity equality, since element-wise ``==`` on arrays
has no single truth value.

Each record validates its invariants in ``__post_init__`` and raises
:class:`ModelValidationError` when they fail.

Note on ``slots``:
    ``dataclasses.dataclass`` only accepts ``slots`` on Python 3.10+, so it is
    applied conditionally; on 3.9 the records stay frozen without
    ``__slots__``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, Type, TypeVar

import numpy as np

T = TypeVar("T")

_SLOTS_SUPPORTED = sys.version_info >= (3, 10)


def _frozen_model(cls: Type[T]) -> Type[T]:
    """Apply frozen (and, where supported, slotted) dataclass semantics."""
    if _SLOTS_SUPPORTED:
        return dataclass(frozen=True, slots=True)(cls)
    return dataclass(frozen=True)(cls)


def _array_model(cls: Type[T]) -> Type[T]:
    """Frozen dataclass with identity equality, for array-carrying records."""
    return dataclass(frozen=True, eq=False)(cls)


class ModelValidationError(ValueError):
    """Raised when a record violates one of its invariants."""


# ---------------------------------------------------------------- spectral


@_frozen_model
class SpectralPoint:
    """A point ``z = E + i*eta`` of the upper half-plane.

    Attributes:
        E: Real energy.
        eta: Imaginary part, strictly positive.
    """

    E: float
    eta: float

    def __post_init__(self) -> None:
        if not self.eta > 0 or not math.isfinite(self.eta) or not math.isfinite(self.E):
            raise ModelValidationError(
                f"SpectralPoint needs finite E and eta > 0 (got E={self.E}, eta={self.eta})."
            )

    @classmethod
    def from_complex(cls, z: complex) -> "SpectralPoint":
        """Build a point from a complex number."""
        return cls(E=float(z.real), eta=float(z.imag))

    @classmethod
    def of(cls, z: Any) -> "SpectralPoint":
        """Pass points through; convert anything complex-like."""
        return z if isinstance(z, cls) else cls.from_complex(complex(z))

    @property
    def z(self) -> complex:
        """The point as a Python complex."""
        return complex(self.E, self.eta)

    @property
    def kappa(self) -> float:
        """Distance of ``E`` to the nearer spectral edge ``+-2``."""
        return min(abs(self.E - 2.0), abs(self.E + 2.0))

    def __str__(self) -> str:
        return f"{self.E!r}+{self.eta!r}i"


@_frozen_model
class LawParams:
    """Constants fixed for an analysis.

    Attributes:
        d: Degree, at least 3.
        a: Spectral-domain constant.
        c: Small constant, ``0 < c < a < 1``.
        ell: Tree depth / resampling radius, at least 1.
    """

    d: int
    a: float
    c: float
    ell: int

    def __post_init__(self) -> None:
        if self.d < 3:
            raise ModelValidationError(f"Degree must be at least 3 (got {self.d}).")
        if not 0 < self.c < self.a < 1:
            raise ModelValidationError(
                f"Constants must satisfy 0 < c < a < 1 (got c={self.c}, a={self.a})."
            )
        if self.ell < 1:
            raise ModelValidationError(
                f"Depth ell must be at least 1 (got {self.ell})."
            )


@_frozen_model
class ErrorParams:
    """Error parameters of the a priori Green's function bound.

    Attributes:
        eps_prime: ``eps'`` with the configured log power.
        eps: ``eps' / sqrt(kappa + eta + eps')``.
        log_power: The configured power of ``log N``.
        eps_prime_asymptotic: ``eps'`` with the asymptotic power.
        eps_asymptotic: ``eps`` with the asymptotic power.
    """

    eps_prime: float
    eps: float
    log_power: float
    eps_prime_asymptotic: float
    eps_asymptotic: float


# ---------------------------------------------------------------- graphs


@_frozen_model
class OmegaBarReport:
    """Census of the typical-graph event.

    Attributes:
        radius: Radius ``R`` used for the balls.
        excess_cap: ``omega_d``.
        bad_vertex_count: Vertices whose radius-R ball is not a tree.
        max_excess: Largest excess over all radius-R balls.
        threshold: ``N^c``, the allowed number of bad vertices.
        holds: Both conditions satisfied.
    """

    radius: int
    excess_cap: int
    bad_vertex_count: int
    max_excess: int
    threshold: float
    holds: bool

    def __post_init__(self) -> None:
        expected = (
            self.bad_vertex_count <= self.threshold
            and self.max_excess <= self.excess_cap
        )
        if expected != self.holds:
            raise ModelValidationError(
                "OmegaBarReport verdict disagrees with its counts."
            )


# ---------------------------------------------------------------- greens


@_frozen_model
class TreeWeight:
    """Boundary weight ``Delta(z)`` attached to truncated tree leaves.

    Attributes:
        delta: Complex weight, finite.
    """

    delta: complex

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta.real) and math.isfinite(self.delta.imag)):
            raise ModelValidationError(
                f"Tree weight must be finite (got {self.delta!r})."
            )


@_frozen_model
class ScResiduals:
    """Self-consistent equation quantities for one graph and one ``z``.

    Attributes:
        q: ``Q(z; G)``.
        y_of_q: ``Y_ell(Q)``.
        x_of_q: ``X_ell(Q)``.
        q_minus_y: ``Q - Y_ell(Q)``.
        m_minus_x: ``m - X_ell(Q)``.
        phi: Control parameter ``N^c Im m / (N eta)``.
    """

    q: complex
    y_of_q: complex
    x_of_q: complex
    q_minus_y: complex
    m_minus_x: complex
    phi: float

    def __post_init__(self) -> None:
        if self.q_minus_y != self.q - self.y_of_q:
            raise ModelValidationError("q_minus_y must equal q - y_of_q exactly.")
        if not self.phi >= 0:
            raise ModelValidationError(f"phi must be non-negative (got {self.phi}).")


# ---------------------------------------------------------------- resampling


@_frozen_model
class ResamplingData:
    """Boundary edges of a ball and their sampled partner edges.

    Attributes:
        center: Ball center ``o``.
        ell: Ball radius.
        boundary: Oriented boundary edges ``(l_alpha, a_alpha)``.
        partners: Oriented partner edges ``(b_alpha, c_alpha)``.
    """

    center: int
    ell: int
    boundary: Tuple[Tuple[int, int], ...]
    partners: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        if len(self.boundary) != len(self.partners):
            raise ModelValidationError(
                f"{len(self.boundary)} boundary edges but {len(self.partners)} partners."
            )

    @property
    def mu(self) -> int:
        """Number of boundary edges."""
        return len(self.boundary)

    def switched(self, applied) -> "ResamplingData":
        """Data after switching the ``applied`` indices.

        A switched pair ``((l, a), (b, c))`` becomes ``((l, c), (b, a))``;
        switching it again restores the edges ``{l, a}`` and ``{b, c}``.
        """
        done = set(applied)
        boundary = []
        partners = []
        for k, ((l, a), (b, c)) in enumerate(zip(self.boundary, self.partners)):
            if k in done:
                boundary.append((l, c))
                partners.append((b, a))
            else:
                boundary.append((l, a))
                partners.append((b, c))
        return ResamplingData(
            center=self.center,
            ell=self.ell,
            boundary=tuple(boundary),
            partners=tuple(partners),
        )


@_frozen_model
class AdmissibleSet:
    """Switchability flags ``I_alpha`` and the admissible index set.

    Attributes:
        flags: Per-alpha indicator.
        indices: Ascending ``alpha`` with ``I_alpha = 1``.
    """

    flags: Tuple[bool, ...]
    indices: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.indices != tuple(k for k, f in enumerate(self.flags) if f):
            raise ModelValidationError("Admissible indices disagree with the flags.")

    @classmethod
    def from_flags(cls, flags) -> "AdmissibleSet":
        """Build the set from a flag sequence."""
        flags = tuple(bool(f) for f in flags)
        return cls(flags=flags, indices=tuple(k for k, f in enumerate(flags) if f))


# ---------------------------------------------------------------- experiments


@_array_model
class SpectrumRecord:
    """Full spectrum of ``H`` for one sampled graph.

    Attributes:
        n: Vertex count.
        d: Degree.
        seed: Provenance seed (``None`` for fixtures).
        eigenvalues: Descending ``lambda_1 >= ... >= lambda_N``.
    """

    n: int
    d: int
    seed: Optional[int]
    eigenvalues: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        lam = self.eigenvalues
        if lam.shape != (self.n,):
            raise ModelValidationError(
                f"Expected {self.n} eigenvalues, got {lam.shape}."
            )
        top = self.d / math.sqrt(self.d - 1)
        if abs(lam[0] - top) > 1e-9:
            raise ModelValidationError(
                f"lambda_1 = {lam[0]!r} differs from d/sqrt(d-1) = {top!r}."
            )
        if np.any(np.diff(lam) > 0):
            raise ModelValidationError(
                "Eigenvalues must be sorted in descending order."
            )
        if np.any(np.abs(lam) > lam[0] + 1e-9):
            raise ModelValidationError("An eigenvalue exceeds lambda_1 in modulus.")


@_array_model
class RigidityProfile:
    """Normalized deviations ``|lambda_i - gamma_i| N^{2/3} min(i, N-i+1)^{1/3}``.

    Attributes:
        indices: 1-based eigenvalue indices ``2..N``.
        r: Deviation per index.
        max_r: Largest deviation.
        argmax_i: Index attaining it.
    """

    indices: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)
    max_r: float = 0.0
    argmax_i: int = 2

    def __post_init__(self) -> None:
        if np.any(self.r < 0):
            raise ModelValidationError("Rigidity deviations must be non-negative.")
        if self.r.size and self.max_r != float(self.r.max()):
            raise ModelValidationError("max_r must equal the largest stored deviation.")


@_array_model
class ScalingFit:
    """Least-squares fit of a log statistic against ``log N``.

    Attributes:
        sizes: Graph sizes.
        means: Per-size statistic mean.
        stds: Per-size statistic standard deviation.
        values: The fitted per-size values (e.g. stds or medians).
        loglog_slope: Fitted exponent.
        slope_stderr: Standard error of the exponent.
        intercept: Fitted log-intercept.
    """

    sizes: Tuple[int, ...]
    means: np.ndarray = field(repr=False)
    stds: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    loglog_slope: float = math.nan
    slope_stderr: float = math.nan
    intercept: float = math.nan

    def __post_init__(self) -> None:
        if not math.isfinite(self.slope_stderr):
            raise ModelValidationError("Scaling fit standard error must be finite.")

    def as_dict(self) -> Dict[str, Any]:
        """Plain mapping for JSON/YAML output."""
        return {
            "sizes": list(self.sizes),
            "means": [float(x) for x in self.means],
            "stds": [float(x) for x in self.stds],
            "values": [float(x) for x in self.values],
            "loglog_slope": self.loglog_slope,
            "slope_stderr": self.slope_stderr,
            "intercept": self.intercept,
        }


# ---------------------------------------------------------------- runs

#: Subcommands that sample graphs of size ``n``.
SAMPLING_SUBCOMMANDS = frozenset(
    {"sample", "spectrum", "greens", "resample", "woodbury-check", "moments"}
)

#: Subcommands that sweep the ``sizes`` list.
SCAN_SUBCOMMANDS = frozenset({"rigidity", "edge-scan", "stieltjes-scan"})

#: Every subcommand the dispatcher knows.
SUBCOMMANDS = SAMPLING_SUBCOMMANDS | SCAN_SUBCOMMANDS | {"gamma", "report"}

#: File formats of result files.
RESULT_FORMATS = ("csv", "json")


def _graph_size_problem(n: int, d: int) -> Optional[str]:
    if (n * d) % 2:
        return f"n*d must be even (n={n}, d={d}): handshake parity violated."
    if d >= n:
        return f"Degree must be smaller than n (got d={d}, n={n})."
    return None


@_frozen_model
class RunConfig:
    """Validated configuration of one CLI run.

    The record is written verbatim into every output file it produces, so a
    file together with its seed is enough to regenerate it.

    Attributes:
        subcommand: One of :data:`SUBCOMMANDS`.
        n: Vertex count.
        d: Degree.
        ell: Tree depth / resampling radius.
        c: Small constant ``c``.
        a: Spectral-domain constant ``a``.
        omega_d: Excess cap of the census.
        z: Spectral parameters.
        samples: Samples per size.
        seed: Run seed.
        output: Output path, ``None`` for stdout.
        format: ``"csv"`` or ``"json"``.
        workers: Worker processes.
        sizes: Graph sizes of scans; ``(n,)`` when not given.
    """

    subcommand: str
    n: int
    d: int
    ell: int
    c: float
    a: float
    omega_d: int
    z: Tuple[complex, ...]
    samples: int
    seed: int
    output: Optional[str]
    format: str
    workers: int
    sizes: Tuple[int, ...]

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ModelValidationError(
                f"Unknown subcommand {self.subcommand!r}; "
                f"expected one of {sorted(SUBCOMMANDS)}."
            )
        if self.format not in RESULT_FORMATS:
            raise ModelValidationError(
                f"Format must be csv or json (got {self.format!r})."
            )
        if self.samples < 1 or self.workers < 1:
            raise ModelValidationError("samples and workers must be at least 1.")
        if self.omega_d < 0:
            raise ModelValidationError(
                f"omega_d must be non-negative (got {self.omega_d})."
            )
        if self.subcommand == "report":
            return
        self.law_params()
        if self.subcommand == "gamma" and self.n < 3:
            raise ModelValidationError(
                f"Classical locations need n >= 3 (got {self.n})."
            )
        if self.subcommand in SAMPLING_SUBCOMMANDS:
            problem = _graph_size_problem(self.n, self.d)
            if problem:
                raise ModelValidationError(problem)
        if self.subcommand in SCAN_SUBCOMMANDS or self.subcommand == "moments":
            if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
                raise ModelValidationError(
                    f"Sizes must be strictly ascending: {self.sizes}."
                )
            for n in self.sizes:
                problem = _graph_size_problem(n, self.d)
                if problem:
                    raise ModelValidationError(problem)
        if self.subcommand in {"greens", "stieltjes-scan", "moments"}:
            if not self.z:
                raise ModelValidationError(
                    f"{self.subcommand} needs at least one --z point."
                )
            for point in self.z:
                SpectralPoint.from_complex(point)

    def law_params(self) -> LawParams:
        """The constants ``(d, a, c, ell)`` as :class:`LawParams`."""
        return LawParams(d=self.d, a=self.a, c=self.c, ell=self.ell)

    def as_dict(self) -> Dict[str, Any]:
        """Provenance mapping written into output headers.

        The output path and the worker count do not change results and are
        left out, so a rerun into another file is byte-identical.
        """
        return {
            "subcommand": self.subcommand,
            "n": self.n,
            "d": self.d,
            "ell": self.ell,
            "c": self.c,
            "a": self.a,
            "omega_d": self.omega_d,
            "z": list(self.z),
            "samples": self.samples,
            "seed": self.seed,
            "format": self.format,
            "sizes": list(self.sizes),
        }


__all__ = [
    "AdmissibleSet",
    "ErrorParams",
    "LawParams",
    "ModelValidationError",
    "OmegaBarReport",
    "RESULT_FORMATS",
    "ResamplingData",
    "RigidityProfile",
    "RunConfig",
    "SAMPLING_SUBCOMMANDS",
    "SCAN_SUBCOMMANDS",
    "SUBCOMMANDS",
    "ScResiduals",
    "ScalingFit",
    "SpectralPoint",
    "SpectrumRecord",
    "TreeWeight",
]
