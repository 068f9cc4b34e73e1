"""Mutual information of equiprobable complex constellations in Gaussian noise.

For a unit-energy, zero-mean alphabet {a_1 .. a_M} observed as
y = sqrt(rho) a + n with n ~ CN(0, 1), the per-symbol mutual information is

    I(rho) = log2 M - (1/M) sum_l E_n[ log2 sum_m exp(-|n + sqrt(rho) d_lm|^2
                                                      + |n|^2) ],

with d_lm = a_l - a_m. The expectation over the complex Gaussian noise is a
2-D integral with weight exp(-|n|^2)/pi, evaluated by Gauss-Hermite product
quadrature over the real and imaginary parts: the integrand is smooth, so a
32-node rule is already at spectral accuracy. I is strictly increasing and
concave in rho and saturates at log2 M; its inverse (needed by the threshold
conversion) is computed by bracketed bisection.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .model import ModelError, RateUnachievableError


@dataclass(frozen=True)
class Alphabet:
    """Equiprobable complex symbol set with E[x] = 0 and E[|x|^2] = 1."""

    symbols: np.ndarray
    name: str = ""

    def __post_init__(self):
        sym = np.asarray(self.symbols, dtype=np.complex128).reshape(-1)
        if sym.size < 2:
            raise ModelError("an alphabet needs at least two symbols")
        if not np.all(np.isfinite(sym)):
            raise ModelError("alphabet contains non-finite symbols")
        if abs(np.mean(sym)) > 1e-12:
            raise ModelError(f"alphabet mean {np.mean(sym):.3e} is not zero")
        if abs(np.mean(np.abs(sym) ** 2) - 1.0) > 1e-12:
            raise ModelError("alphabet average energy is not one")
        d = np.abs(sym[:, None] - sym[None, :]) + np.eye(sym.size)
        if np.min(d) <= 1e-12:
            raise ModelError("alphabet symbols are not pairwise distinct")
        sym.flags.writeable = False
        object.__setattr__(self, "symbols", sym)

    @property
    def M(self) -> int:
        return self.symbols.size


def _normalized(points, name: str, warn_above: float = 1e-9) -> Alphabet:
    sym = np.asarray(points, dtype=np.complex128).reshape(-1)
    centered = sym - np.mean(sym)
    energy = math.sqrt(float(np.mean(np.abs(centered) ** 2)))
    if energy == 0.0:
        raise ModelError("degenerate alphabet: all symbols identical")
    adjusted = centered / energy
    shift = float(np.max(np.abs(adjusted - sym)))
    if shift > warn_above:
        warnings.warn(
            f"alphabet '{name}' renormalized to zero mean / unit energy "
            f"(max symbol adjustment {shift:.3e})",
            stacklevel=3,
        )
    return Alphabet(symbols=adjusted, name=name)


def bpsk() -> Alphabet:
    return Alphabet(np.array([1.0, -1.0], dtype=complex), name="bpsk")


def qpsk() -> Alphabet:
    pts = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / math.sqrt(2.0)
    return Alphabet(pts, name="qpsk")


def psk8() -> Alphabet:
    pts = np.exp(2j * np.pi * np.arange(8) / 8.0)
    return Alphabet(pts, name="8psk")


def qam16() -> Alphabet:
    levels = np.array([-3.0, -1.0, 1.0, 3.0])
    pts = (levels[:, None] + 1j * levels[None, :]).ravel() / math.sqrt(10.0)
    return Alphabet(pts, name="16qam")


BUILTIN_ALPHABETS = {
    "bpsk": bpsk,
    "qpsk": qpsk,
    "8psk": psk8,
    "16qam": qam16,
}


def load_alphabet(source) -> Alphabet:
    """Alphabet from a built-in name, a list of [re, im] pairs, or a JSON file
    containing such a list. Loaded symbol sets are normalized to zero mean and
    unit energy, with a warning when the adjustment exceeds 1e-9."""
    if isinstance(source, str):
        key = source.lower()
        if key in BUILTIN_ALPHABETS:
            return BUILTIN_ALPHABETS[key]()
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return load_alphabet(data)
    pairs = list(source)
    try:
        pts = [complex(float(re), float(im)) for re, im in pairs]
    except (TypeError, ValueError) as exc:
        raise ModelError(f"alphabet entries must be [re, im] pairs: {exc}") from exc
    return _normalized(pts, name="custom")


class MiEvaluator:
    """Precomputed quadrature tables for one alphabet; immutable and
    safe to share across threads. Instances are callable: ev(rho) -> bits."""

    def __init__(self, alphabet: Alphabet, nodes: int = 32):
        if nodes < 2:
            raise ModelError("need at least 2 quadrature nodes per axis")
        self.alphabet = alphabet
        self.nodes = nodes
        x, w = hermgauss(nodes)
        sym = alphabet.symbols
        d = sym[:, None] - sym[None, :]                   # (M, M)
        self._d_abs2 = np.abs(d) ** 2
        # Re(conj(theta) d) on the node grid, theta = x[q1] + i x[q2].
        self._cross = (
            x[None, None, :, None] * d.real[:, :, None, None]
            + x[None, None, None, :] * d.imag[:, :, None, None]
        )
        self._wgrid = w[:, None] * w[None, :]             # (Q, Q)
        self._norm = float(np.sum(self._wgrid)) / math.pi  # == 1 up to rounding

    @property
    def max_rate(self) -> float:
        return math.log2(self.alphabet.M)

    def quadrature_unit_mass(self) -> float:
        """Quadrature value of the noise-density integral (exactly 1)."""
        return self._norm

    def __call__(self, rho: float) -> float:
        return self.rate(rho)

    def rate(self, rho: float) -> float:
        if not (rho >= 0.0 and math.isfinite(rho)):
            raise ModelError(f"rho must be finite and non-negative: {rho}")
        if rho == 0.0:
            return 0.0
        m = self.alphabet.M
        # exponent of exp(-|theta + sqrt(rho) d|^2 + |theta|^2); the m = l term
        # is exactly 0, so the inner sum is >= 1 and saturation underflows
        # harmlessly.
        expo = -rho * self._d_abs2[:, :, None, None] - 2.0 * math.sqrt(rho) * self._cross
        inner = np.log2(np.sum(np.exp(expo), axis=1))     # (M, Q, Q)
        avg = float(np.einsum("lqr,qr->", inner, self._wgrid)) / (m * math.pi)
        return math.log2(m) - avg

    def inverse(self, rate: float, tol: float = 1e-8) -> float:
        """rho with rate(rho) = rate to within tol bits, by bisection.

        The upper bracket is doubled from 1 until the rate is exceeded; I
        saturates below log2 M only asymptotically, so rates too close to
        capacity are rejected as unachievable within numeric range.
        """
        if rate < 0.0:
            raise ModelError(f"rate must be non-negative: {rate}")
        if rate >= self.max_rate:
            raise RateUnachievableError(
                f"rate {rate} unachievable: alphabet capacity is {self.max_rate}"
            )
        if rate == 0.0:
            return 0.0
        hi = 1.0
        while self.rate(hi) <= rate:
            hi *= 2.0
            if hi > 1e9:
                raise RateUnachievableError(
                    f"rate {rate} not reachable within numeric range"
                )
        lo = 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.rate(mid) < rate:
                lo = mid
            else:
                hi = mid
            if abs(self.rate(hi) - rate) <= tol and (hi - lo) <= 1e-12 * max(1.0, hi):
                break
        return hi


def mutual_info(ev: MiEvaluator, rho: float) -> float:
    return ev.rate(rho)


def mutual_info_inverse(ev: MiEvaluator, rate: float) -> float:
    return ev.inverse(rate)


def mutual_info_mc(alphabet: Alphabet, rho: float, draws: int, seed: int = 0) -> float:
    """Monte Carlo estimate of I(rho): sample-average of the log-likelihood
    ratio over noise draws. Independent of the quadrature path; used as the
    test oracle for the quadrature evaluator."""
    if rho < 0.0:
        raise ModelError(f"rho must be non-negative: {rho}")
    rng = np.random.default_rng(seed)
    sym = alphabet.symbols
    m = sym.size
    total = 0.0
    chunk = 1 << 16
    done = 0
    while done < draws:
        n = min(chunk, draws - done)
        noise = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
        labels = rng.integers(0, m, size=n)
        d = sym[labels, None] - sym[None, :]              # (n, M)
        expo = -rho * np.abs(d) ** 2 - 2.0 * math.sqrt(rho) * (
            noise.real[:, None] * d.real + noise.imag[:, None] * d.imag
        )
        total += float(np.sum(np.log2(np.sum(np.exp(expo), axis=1))))
        done += n
    return math.log2(m) - total / draws
