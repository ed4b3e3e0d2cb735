"""Invariants and metrics of ordered and 1-periodic point sequences.

Finite ordered sequences in R^n are encoded by cyclic distance matrices
(CDM), optionally with a determinant-sign row made continuous by simplex
strengths (CDS).  1-periodic sequences in R x R^(n-1) are compared by
extending motifs to the least common multiple size and minimizing over the
cyclic or dihedral group acting on the motif order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numcore import INF, norm_exponent
from .simplexwise import LAMBDA, simplex_sign, strength

#: cap for the least-common-multiple motif extension
LCM_CAP = 100_000


def cdm(points):
    """Cyclic distance matrix: CDM_ij = |p_j - p_(i+j)| (indices mod m)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    m = len(pts)
    if m < 2:
        raise ValueError("need at least 2 points")
    out = np.empty((m - 1, m))
    for i in range(1, m):
        out[i - 1] = np.linalg.norm(pts - np.roll(pts, -i, axis=0), axis=1)
    return out


def sign_row(points):
    """Determinant signs of the n successive difference vectors per index."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    m, n = pts.shape
    if n not in (2, 3):
        raise ValueError("sign rows are defined for n in {2, 3}")
    signs = np.empty(m)
    for i in range(m):
        idx = [(i + j) % m for j in range(n + 1)]
        signs[i] = simplex_sign(pts[idx])
    return signs


def strengths_row(points):
    """Strengths of the simplices on p_i .. p_(i+n) (indices mod m)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    m, n = pts.shape
    out = np.empty(m)
    for i in range(m):
        idx = [(i + j) % m for j in range(n + 1)]
        out[i] = strength(pts[idx])
    return out


def cds(points):
    """Cyclic distances with signs: CDM plus the sign row (m x m matrix)."""
    return np.vstack([cdm(points), sign_row(points)])


def _mcd_from_cdms(A, B, q):
    qn = norm_exponent(q)
    diff = np.abs(A - B)
    m = A.shape[1]
    if qn is INF:
        return float(diff.max())
    return float((diff**qn).sum() ** (1.0 / qn) / (m * (m - 1)) ** (1.0 / qn))


def mcd(S, T, q=INF):
    """Metric based on cyclic distances: normalized L_q of CDM difference."""
    A, B = cdm(S), cdm(T)
    if A.shape != B.shape:
        raise ValueError("shape mismatch")
    return _mcd_from_cdms(A, B, q)


def _signed_strengths(points):
    return sign_row(points) * strengths_row(points)


def mcs(S, T, q=INF):
    """Metric on cyclic distances with signs.

    max of MCD_q and (2/lambda_n) * max_i |sign_i sigma_i(S) - sign_i sigma_i(T)|.
    """
    pts_s = np.atleast_2d(np.asarray(S, dtype=float))
    n = pts_s.shape[1]
    lam = LAMBDA[n]
    base = mcd(S, T, q)
    gap = np.abs(_signed_strengths(S) - _signed_strengths(T)).max()
    return float(max(base, 2.0 / lam * gap))


@dataclass(frozen=True)
class OnePeriodicSequence:
    """Motif of points in [0, l) x R^(n-1) repeated with period l in time."""

    period: float
    motif: np.ndarray

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("period must be positive")
        motif = np.atleast_2d(np.asarray(self.motif, dtype=float))
        times = motif[:, 0] % self.period
        motif = motif.copy()
        motif[:, 0] = times
        order = np.argsort(times)
        motif = motif[order]
        if (np.diff(motif[:, 0]) <= 0).any():
            raise ValueError("time projections must be distinct")
        object.__setattr__(self, "motif", motif)

    @property
    def m(self):
        return len(self.motif)

    @property
    def value_dim(self):
        return self.motif.shape[1] - 1


def time_shift(S):
    """Gaps (d_1, ..., d_m) between successive time projections; sums to l."""
    t = S.motif[:, 0]
    return np.concatenate([np.diff(t), [S.motif[0, 0] + S.period - t[-1]]])


def _extend(S, copies):
    """Concatenate ``copies`` shifted copies of the motif (period multiplies)."""
    blocks = []
    for c in range(copies):
        block = S.motif.copy()
        block[:, 0] += c * S.period
        blocks.append(block)
    return OnePeriodicSequence(S.period * copies, np.vstack(blocks))


def _candidate_orders(m, group):
    """Motif orders with traversal direction for the cyclic/dihedral group."""
    base = list(range(m))
    orders = [(base[j:] + base[:j], 1) for j in range(m)]
    if group == "dihedral":
        rev = base[::-1]
        orders += [(rev[j:] + rev[:j], -1) for j in range(m)]
    elif group != "cyclic":
        raise ValueError("group must be 'cyclic' or 'dihedral'")
    return orders


def _ts_of_order(times, order, period, direction=1):
    """Time-shift vector of the re-ordered motif.

    Gaps are measured along the traversal direction, so a reversed order
    yields the reversed gap vector of the forward sequence.
    """
    t = np.asarray([times[i] for i in order], dtype=float)
    m = len(t)
    if m == 1:
        return np.array([period])
    gaps = np.empty(m)
    for i in range(m):
        d = direction * (t[(i + 1) % m] - t[i])
        gaps[i] = d % period
    return gaps


def seq_metric(S, Q, q=INF, group="cyclic", equivalence="isometry"):
    """Metric between 1-periodic sequences.

    Motifs are extended to the least common multiple of their sizes; the
    result is the minimum over the cyclic (or dihedral) group of the larger
    of the time-shift distance and the projected-motif CDM (isometry) or
    CDS-based (rigid) metric.
    """
    qn = norm_exponent(q)
    m = math.lcm(S.m, Q.m)
    if m > LCM_CAP:
        raise ValueError(f"lcm motif size {m} exceeds cap {LCM_CAP}")
    S_ext = _extend(S, m // S.m)
    Q_ext = _extend(Q, m // Q.m)

    ts_s = time_shift(S_ext)
    vals_s = S_ext.motif[:, 1:]
    use_values = S.value_dim >= 1
    if use_values:
        cdm_s = cdm(vals_s)
        if equivalence == "rigid":
            ss_s = _signed_strengths(vals_s)
            lam = LAMBDA[S.value_dim]

    def dt(ts_q):
        diff = np.abs(ts_s - ts_q)
        if qn is INF:
            return float(diff.max())
        return float((diff**qn).sum() ** (1.0 / qn) / m ** (1.0 / qn))

    times_q = Q_ext.motif[:, 0]
    vals_q = Q_ext.motif[:, 1:]
    best = math.inf
    for order, direction in _candidate_orders(m, group):
        d = dt(_ts_of_order(times_q, order, Q_ext.period, direction))
        if use_values and d < best:
            vq = vals_q[order]
            d = max(d, _mcd_from_cdms(cdm_s, cdm(vq), qn))
            if equivalence == "rigid" and d < best:
                gap = np.abs(ss_s - _signed_strengths(vq)).max()
                d = max(d, 2.0 / lam * gap)
        best = min(best, d)
    return best
