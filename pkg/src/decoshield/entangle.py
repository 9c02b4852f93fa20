"""Two-qubit entanglement protection through independent damping channels.

An input alpha|00> + beta|11> sent through one generalized-damping channel
per qubit stays in the X-state family: nonzero entries on the diagonal and
the (|00>, |11>) anti-diagonal only. The functions here track those entries
in closed form through weak measurement, damping and reversal, evaluate the
concurrence before and after protection, and give the measurement strengths
that maximize it. Everything has a generic Kraus-pipeline route alongside
for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import GadParams, apply_on_qubit, gad_channel
from .weakmeas import (
    MIN_POSTSELECT_PROB,
    PostSelectionError,
    WeakMeasurement,
    apply_postselected,
)

NORM_ATOL = 1e-12
# unit coefficients are products of channel weights; they vanish only at
# exact parameter boundaries, so a tiny floor suffices to detect that
_DEGENERATE_FLOOR = 1e-30


@dataclass(frozen=True)
class EntangledInput:
    """Amplitudes of alpha|00> + beta|11>, normalized to one."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")

    @classmethod
    def from_alpha_sq(cls, alpha_sq: float) -> EntangledInput:
        if not 0.0 <= alpha_sq <= 1.0:
            raise ValueError(f"alpha_sq must lie in [0, 1], got {alpha_sq}")
        return cls(math.sqrt(alpha_sq), math.sqrt(1.0 - alpha_sq))

    def ket(self) -> np.ndarray:
        vec = np.zeros(4, dtype=complex)
        vec[0] = self.alpha
        vec[3] = self.beta
        return vec

    def density(self) -> np.ndarray:
        vec = self.ket()
        return np.outer(vec, vec.conj())


@dataclass(frozen=True)
class XStateCoefficients:
    """X-state entries and their per-component split.

    a, b, c, d are the diagonal weights on |00>, |01>, |10>, |11> at the
    current pipeline stage; e is the coherence between |00> and |11>. The
    split fields carry what each input component contributes before any
    measurement scaling: x0 from the |00> piece (weight |alpha|^2), x1 from
    the |11> piece (weight |beta|^2), so that after a pre-measurement of
    total strength m the diagonal reads x = x0 + x1 m^2 (with m = m1 m2).
    """

    a: float
    b: float
    c: float
    d: float
    e: complex
    a0: float
    a1: float
    b0: float
    b1: float
    c0: float
    c1: float
    d0: float
    d1: float

    @property
    def trace(self) -> float:
        return self.a + self.b + self.c + self.d

    def matrix(self) -> np.ndarray:
        """Assemble the 4x4 X-state (unnormalized when trace != 1)."""
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0] = self.a
        rho[1, 1] = self.b
        rho[2, 2] = self.c
        rho[3, 3] = self.d
        rho[0, 3] = self.e
        rho[3, 0] = np.conj(self.e)
        return rho


@dataclass(frozen=True)
class ConcurrenceReport:
    """Concurrence before/after protection and the optimizing parameters.

    lambda1, lambda2 and lambda2_max are raw concurrence arguments and may
    be negative; the concurrence itself is max(0, value). degenerate is
    None in the generic case, "no-entanglement" for product inputs and
    "projective-limit" when a channel parameter sits on a boundary that
    pushes the optimal strengths to zero.
    """

    lambda1: float
    lambda2: float
    lambda2_max: float
    m_opt: float
    n1_opt: float
    n2_opt: float
    h: float
    alpha_sq_opt: float
    success_prob: float
    degenerate: str | None = None


def population_transfer(ch: GadParams) -> np.ndarray:
    """Row-stochastic matrix T[i, j]: population moved from |i><i| to |j><j|."""
    p, r = ch.p, ch.r
    return np.array([[1.0 - r + p * r, (1.0 - p) * r], [p * r, 1.0 - p * r]])


def component_coefficients(
    ch1: GadParams, ch2: GadParams
) -> tuple[tuple[float, float, float, float], tuple[float, float, float, float]]:
    """Unit-input diagonal weights (a, b, c, d) produced by the channel pair.

    First tuple: image of |00><00|. Second: image of |11><11|.
    """
    t1 = population_transfer(ch1)
    t2 = population_transfer(ch2)
    lo = (
        float(t1[0, 0] * t2[0, 0]),
        float(t1[0, 0] * t2[0, 1]),
        float(t1[0, 1] * t2[0, 0]),
        float(t1[0, 1] * t2[0, 1]),
    )
    hi = (
        float(t1[1, 0] * t2[1, 0]),
        float(t1[1, 0] * t2[1, 1]),
        float(t1[1, 1] * t2[1, 0]),
        float(t1[1, 1] * t2[1, 1]),
    )
    return lo, hi


def measured_coefficients(
    inp: EntangledInput, ch1: GadParams, ch2: GadParams, m1: float, m2: float
) -> XStateCoefficients:
    """X-state coefficients after pre-measurement (m1, m2) and the channels.

    The pre-measurement scales the |11> component by m1 m2 before the
    channels act; the reversal is not applied here.
    """
    if m1 < 0.0 or m2 < 0.0:
        raise ValueError(f"strengths must be non-negative, got m1={m1}, m2={m2}")
    (a0u, b0u, c0u, d0u), (a1u, b1u, c1u, d1u) = component_coefficients(ch1, ch2)
    wa = abs(inp.alpha) ** 2
    wb = abs(inp.beta) ** 2
    mm = (m1 * m2) ** 2
    a0, b0, c0, d0 = a0u * wa, b0u * wa, c0u * wa, d0u * wa
    a1, b1, c1, d1 = a1u * wb, b1u * wb, c1u * wb, d1u * wb
    keep = math.sqrt((1.0 - ch1.r) * (1.0 - ch2.r))
    e = inp.alpha * np.conj(inp.beta) * m1 * m2 * keep
    return XStateCoefficients(
        a=a0 + a1 * mm,
        b=b0 + b1 * mm,
        c=c0 + c1 * mm,
        d=d0 + d1 * mm,
        e=complex(e),
        a0=a0,
        a1=a1,
        b0=b0,
        b1=b1,
        c0=c0,
        c1=c1,
        d0=d0,
        d1=d1,
    )


def channel_degraded_state(
    inp: EntangledInput, ch1: GadParams, ch2: GadParams
) -> XStateCoefficients:
    """X-state coefficients after the bare channels, no measurements.

    The trace is one; b and c are the single-excitation leak weights that
    ruin the concurrence.
    """
    return measured_coefficients(inp, ch1, ch2, 1.0, 1.0)


def protected_state(
    inp: EntangledInput,
    ch1: GadParams,
    ch2: GadParams,
    m1: float,
    m2: float,
    n1: float,
    n2: float,
) -> tuple[XStateCoefficients, float]:
    """Coefficients after pre-measurement (m1, m2) and channels, plus the
    success probability once the reversal (n1, n2) is post-selected.

    The returned coefficients are the pre-reversal ones; the reversal only
    rescales rows, which reversed_state and concurrence_lambda2 handle.
    Zero strengths are allowed (projective limits); negatives are not.
    """
    for name, val in (("m1", m1), ("m2", m2), ("n1", n1), ("n2", n2)):
        if val < 0.0:
            raise ValueError(f"{name} must be non-negative, got {val}")
    coeffs = measured_coefficients(inp, ch1, ch2, m1, m2)
    prob = _reversed_trace(coeffs, n1, n2)
    for strength in (m1, m2, n1, n2):
        # strengths above one get rescaled into physical operators, which
        # costs probability quadratically; smaller ones cost nothing extra
        if strength > 1.0:
            prob /= strength * strength
    if prob < MIN_POSTSELECT_PROB:
        raise PostSelectionError(f"success probability {prob} below cutoff")
    return coeffs, prob


def _reversed_trace(coeffs: XStateCoefficients, n1: float, n2: float) -> float:
    return (
        n1 * n1 * n2 * n2 * coeffs.a
        + n1 * n1 * coeffs.b
        + n2 * n2 * coeffs.c
        + coeffs.d
    )


def reversed_state(
    coeffs: XStateCoefficients, n1: float, n2: float
) -> tuple[np.ndarray, float]:
    """Final normalized 4x4 state after the reversal, with its raw trace."""
    raw = _reversed_trace(coeffs, n1, n2)
    if raw < MIN_POSTSELECT_PROB:
        raise PostSelectionError(f"reversal retains trace {raw}, below cutoff")
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = n1 * n1 * n2 * n2 * coeffs.a
    rho[1, 1] = n1 * n1 * coeffs.b
    rho[2, 2] = n2 * n2 * coeffs.c
    rho[3, 3] = coeffs.d
    rho[0, 3] = n1 * n2 * coeffs.e
    rho[3, 0] = np.conj(rho[0, 3])
    return rho / raw, raw


def concurrence_lambda1(coeffs: XStateCoefficients) -> float:
    """Concurrence argument 2(|e| - sqrt(bc)) of a trace-one X state.

    Negative values mean the state is separable (the caller clips at zero).
    """
    return 2.0 * (abs(coeffs.e) - math.sqrt(coeffs.b * coeffs.c))


def concurrence_lambda2(coeffs: XStateCoefficients, n1: float, n2: float) -> float:
    """Concurrence argument of the reversed state, any overall scaling.

    Equals 2 n1 n2 (|e| - sqrt(bc)) divided by the reversed trace, so it
    reduces to the unprotected value at unit strengths.
    """
    raw = _reversed_trace(coeffs, n1, n2)
    if raw < MIN_POSTSELECT_PROB:
        raise PostSelectionError(f"reversal retains trace {raw}, below cutoff")
    return 2.0 * n1 * n2 * (abs(coeffs.e) - math.sqrt(coeffs.b * coeffs.c)) / raw


def optimal_reversal(coeffs: XStateCoefficients) -> tuple[float, float]:
    """Reversal strengths (CD/AB)^(1/4), (BD/AC)^(1/4) maximizing the
    concurrence of the reversed state at fixed pre-measurement."""
    a, b, c, d = coeffs.a, coeffs.b, coeffs.c, coeffs.d
    if a * b <= 0.0 or a * c <= 0.0:
        raise ValueError("degenerate coefficients, reversal optimum undefined")
    n1 = (c * d / (a * b)) ** 0.25
    n2 = (b * d / (a * c)) ** 0.25
    return n1, n2


def lambda2_max(ch1: GadParams, ch2: GadParams) -> float:
    """Best attainable concurrence argument, independent of the input weights.

    May be negative when the channels are too hot and strong for any
    strength choice to keep entanglement.
    """
    p1, r1 = ch1.p, ch1.r
    p2, r2 = ch2.p, ch2.r
    keep = math.sqrt((1.0 - r1) * (1.0 - r2))
    leak1 = r1 * math.sqrt(p1 * (1.0 - p1) * (1.0 - r2 * p2) * (1.0 - r2 + r2 * p2))
    leak2 = r2 * math.sqrt(p2 * (1.0 - p2) * (1.0 - r1 * p1) * (1.0 - r1 + r1 * p1))
    den1 = r1 * math.sqrt(p1 * (1.0 - p1)) + math.sqrt(
        (1.0 - r1 * p1) * (1.0 - r1 + r1 * p1)
    )
    den2 = r2 * math.sqrt(p2 * (1.0 - p2)) + math.sqrt(
        (1.0 - r2 * p2) * (1.0 - r2 + r2 * p2)
    )
    return (keep - leak1 - leak2) / (den1 * den2)


def pipeline_state(
    inp: EntangledInput,
    ch1: GadParams,
    ch2: GadParams,
    m1: float,
    m2: float,
    n1: float,
    n2: float,
) -> tuple[np.ndarray, float]:
    """Generic route: local pre-measurements, one Kraus channel per qubit,
    local reversals. Returns the final state and joint success probability."""
    state, prob_pre = apply_postselected(WeakMeasurement.pre(m1, m2), inp.density())
    state = apply_on_qubit(gad_channel(ch1), state, 0)
    state = apply_on_qubit(gad_channel(ch2), state, 1)
    state, prob_post = apply_postselected(WeakMeasurement.post(n1, n2), state)
    return state, prob_pre * prob_post


def optimal_parameters(
    inp: EntangledInput, ch1: GadParams, ch2: GadParams
) -> ConcurrenceReport:
    """Strengths maximizing the protected concurrence, and its value.

    The pre-measurement freedom sits entirely in m = m1 (m2 stays 1, only
    the product matters); the optimum is m = sqrt(h) |alpha| / |beta| with
    h^2 = b0 c0 / (b1 c1) on unit coefficients. The attained concurrence
    argument lambda2_max does not depend on the input weights; the success
    probability does, peaking at |alpha|^2 = 1/(1 + h).
    """
    base = channel_degraded_state(inp, ch1, ch2)
    lam1 = concurrence_lambda1(base)
    lam2_bar = lambda2_max(ch1, ch2)
    lo, hi = component_coefficients(ch1, ch2)
    bc0 = lo[1] * lo[2]
    bc1 = hi[1] * hi[2]

    if abs(inp.alpha) == 0.0 or abs(inp.beta) == 0.0:
        # local filtering cannot create entanglement from a product state
        h = math.sqrt(bc0 / bc1) if bc1 > _DEGENERATE_FLOOR else math.inf
        m_opt = 0.0 if abs(inp.alpha) == 0.0 else math.inf
        return ConcurrenceReport(
            lambda1=lam1,
            lambda2=0.0,
            lambda2_max=lam2_bar,
            m_opt=m_opt,
            n1_opt=0.0,
            n2_opt=0.0,
            h=h,
            alpha_sq_opt=1.0 / (1.0 + h),
            success_prob=0.0,
            degenerate="no-entanglement",
        )

    if bc0 <= _DEGENERATE_FLOOR or bc1 <= _DEGENERATE_FLOOR:
        # a boundary parameter (p or r at 0/1) zeroes a leak product; the
        # optimum runs off to vanishing strengths with vanishing probability
        h = 0.0 if bc0 <= _DEGENERATE_FLOOR else math.inf
        return ConcurrenceReport(
            lambda1=lam1,
            lambda2=lam2_bar,
            lambda2_max=lam2_bar,
            m_opt=0.0,
            n1_opt=0.0,
            n2_opt=0.0,
            h=h,
            alpha_sq_opt=1.0 / (1.0 + h),
            success_prob=0.0,
            degenerate="projective-limit",
        )

    h = math.sqrt(bc0 / bc1)
    m_opt = math.sqrt(h) * abs(inp.alpha) / abs(inp.beta)
    coeffs = measured_coefficients(inp, ch1, ch2, m_opt, 1.0)
    n1, n2 = optimal_reversal(coeffs)
    lam2 = concurrence_lambda2(coeffs, n1, n2)
    _, success = protected_state(inp, ch1, ch2, m_opt, 1.0, n1, n2)
    return ConcurrenceReport(
        lambda1=lam1,
        lambda2=lam2,
        lambda2_max=lam2_bar,
        m_opt=m_opt,
        n1_opt=n1,
        n2_opt=n2,
        h=h,
        alpha_sq_opt=1.0 / (1.0 + h),
        success_prob=success,
    )
