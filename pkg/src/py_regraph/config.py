"""Shared numeric defaults for the laboratory.

Attributes:
    DEFAULT_MAX_PAIRING_ATTEMPTS: Rejection budget of the pairing sampler. A
        run that exhausts it signals pathological ``(n, d)`` parameters.
    DEFAULT_OMEGA_D: Excess cap used by the census when none is configured.
    DEFAULT_C: Small constant ``c`` governing radii and the census threshold.
    DEFAULT_A: Spectral-domain constant ``a`` (must exceed ``c``).
    DEFAULT_ELL: Resampling radius / tree depth ``ell``.
    DEFAULT_LOG_POWER: Exponent replacing the asymptotic ``(log N)^100`` factor
        in the error parameters.
    ASYMPTOTIC_LOG_POWER: The exponent as it appears in the asymptotic bound,
        reported next to the configured one.
    IDENTITY_TOL: Tolerance for exact algebraic identities.
    QUANTILE_XTOL: Absolute tolerance of the classical-location bisection.
    QUAD_EPSABS: Absolute tolerance handed to the adaptive quadrature.
    MAX_SCHUR_BLOCK: Largest vertex set accepted by the Schur-complement minor.
    DEFAULT_R_FRAC: Exponent ``r`` of the ``N^{-r}`` term in the error parameters.
    DEFAULT_QUANTILE: Quantile of ``|m - m_d|`` reported by the Stieltjes scan.
    EDGE_WINDOW_KAPPA_SHIFT: ``kappa = N^{-2/3 + shift}`` in the edge-window test.
    EDGE_WINDOW_ETA_POWER: ``eta = N^{power} / (N sqrt(kappa))`` in that test.
    MIN_FIT_SIZES: Fewest graph sizes a log-log fit accepts.
    EDGE_SLOPE_BAND: Accepted log-log slope of the extreme-eigenvalue spread.
    RIGIDITY_GROWTH_MAX: Largest accepted growth exponent of the median ``max_r``.
    RIGIDITY_STDERR_MAX: Largest accepted standard error of that exponent.
    STIELTJES_SPREAD_MAX: Largest accepted max/min ratio of normalized quantiles.
    EDGE_WINDOW_CLEAR_MIN: Smallest accepted fraction of samples with a clear window.
    MOMENT_SLOPE_TOL: Largest accepted ``|slope|`` of the log moment ratio.
    REVERSAL_RATE_MIN: Smallest accepted share of switches undone by switching back.
    EXCHANGE_NULL_P_MIN: Sign-test p-value a uniform partner sampler must exceed.
    EXCHANGE_CONTROL_P_MAX: Sign-test p-value a biased partner sampler must undercut.
    WOODBURY_MONOTONE_MIN: Smallest accepted share of strictly decreasing series.
    WOODBURY_DECAY_MAX: Largest accepted median geometric decay of the series.
"""

DEFAULT_MAX_PAIRING_ATTEMPTS = 100_000
DEFAULT_OMEGA_D = 1
DEFAULT_C = 0.4
DEFAULT_A = 0.5
DEFAULT_ELL = 1
DEFAULT_LOG_POWER = 1.0
ASYMPTOTIC_LOG_POWER = 100.0
IDENTITY_TOL = 1e-10
QUANTILE_XTOL = 1e-12
QUAD_EPSABS = 1e-12
MAX_SCHUR_BLOCK = 16
DEFAULT_R_FRAC = 0.5
DEFAULT_QUANTILE = 0.9
EDGE_WINDOW_KAPPA_SHIFT = 0.2
EDGE_WINDOW_ETA_POWER = 0.15
MIN_FIT_SIZES = 2
EDGE_SLOPE_BAND = (-0.80, -0.55)
RIGIDITY_GROWTH_MAX = 0.15
RIGIDITY_STDERR_MAX = 0.1
STIELTJES_SPREAD_MAX = 3.0
EDGE_WINDOW_CLEAR_MIN = 0.99
MOMENT_SLOPE_TOL = 0.2
REVERSAL_RATE_MIN = 0.95
EXCHANGE_NULL_P_MIN = 0.01
EXCHANGE_CONTROL_P_MAX = 0.001
WOODBURY_MONOTONE_MIN = 0.99
WOODBURY_DECAY_MAX = 0.5

__all__ = [
    "ASYMPTOTIC_LOG_POWER",
    "DEFAULT_A",
    "DEFAULT_C",
    "DEFAULT_ELL",
    "DEFAULT_LOG_POWER",
    "DEFAULT_MAX_PAIRING_ATTEMPTS",
    "DEFAULT_OMEGA_D",
    "DEFAULT_QUANTILE",
    "DEFAULT_R_FRAC",
    "EDGE_SLOPE_BAND",
    "EDGE_WINDOW_CLEAR_MIN",
    "EDGE_WINDOW_ETA_POWER",
    "EDGE_WINDOW_KAPPA_SHIFT",
    "EXCHANGE_CONTROL_P_MAX",
    "EXCHANGE_NULL_P_MIN",
    "IDENTITY_TOL",
    "MAX_SCHUR_BLOCK",
    "MIN_FIT_SIZES",
    "MOMENT_SLOPE_TOL",
    "QUAD_EPSABS",
    "QUANTILE_XTOL",
    "REVERSAL_RATE_MIN",
    "RIGIDITY_GROWTH_MAX",
    "RIGIDITY_STDERR_MAX",
    "STIELTJES_SPREAD_MAX",
    "WOODBURY_DECAY_MAX",
    "WOODBURY_MONOTONE_MIN",
]
