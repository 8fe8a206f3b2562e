"""Truncated Fourier expansions of Siegel modular forms, exact arithmetic,
the Siegel operator, derivative polynomials and numerical evaluation.

A FourierExpansion stores an exact coefficient for *every* enumerated index
of trace <= max_trace, so "known zero" and "beyond truncation" stay distinct.
Derivative prefactors (pi*i)^d are carried symbolically as an integer power
and only materialized at evaluation time.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from . import indices as idx

SERIALIZATION_VERSION = 1


class IncompatibleExpansionError(ValueError):
    """Genus or weight mismatch in expansion arithmetic."""


class TruncationError(KeyError):
    """Coefficient requested beyond the truncation bound."""


class DomainError(ValueError):
    """Evaluation point outside the Siegel upper half-space."""


@dataclass(frozen=True)
class SiegelPoint:
    """A point of the Siegel upper half-space: tau symmetric, Im tau > 0.

    Exact symmetry is enforced by symmetrizing on construction; the smallest
    eigenvalue of Im(tau) is kept for tail bounds.
    """

    g: int
    tau: tuple

    def __post_init__(self):
        m = np.array(self.tau, dtype=complex)
        if m.shape != (self.g, self.g):
            raise DomainError("tau must be a g x g matrix")
        if not np.allclose(m, m.T, rtol=0, atol=1e-12 * (1 + np.abs(m).max())):
            raise DomainError("tau must be symmetric")
        sym = tuple(tuple(0.5 * (m[p][q] + m[q][p]) for q in range(self.g))
                    for p in range(self.g))
        object.__setattr__(self, "tau", sym)
        if self.im_min_eig <= 0:
            raise DomainError("Im(tau) must be positive definite")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.tau, dtype=complex)

    @property
    def im_min_eig(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix.imag).min())

    @classmethod
    def scalar(cls, g: int, z: complex) -> "SiegelPoint":
        return cls(g=g, tau=tuple(tuple(z if p == q else 0.0 for q in range(g))
                                  for p in range(g)))

    def direct_sum(self, other: "SiegelPoint") -> "SiegelPoint":
        a, b = self.matrix, other.matrix
        g = self.g + other.g
        m = np.zeros((g, g), dtype=complex)
        m[: self.g, : self.g] = a
        m[self.g :, self.g :] = b
        return SiegelPoint(g=g, tau=tuple(map(tuple, m)))


@dataclass(frozen=True)
class EvalResult:
    """Numerical value of a truncated expansion plus a heuristic tail bound.

    The tail estimate is exp(-pi*lambda_min*(max_trace+2)) scaled by the
    total coefficient mass on the truncation boundary; it is reported, not
    asserted.
    """

    value: complex
    tail_estimate: float
    prefactor_power: int = 0

    @property
    def prefactor(self) -> complex:
        return (1j * math.pi) ** self.prefactor_power

    @property
    def value_with_prefactor(self) -> complex:
        return self.value * self.prefactor


class FourierExpansion:
    """Exact truncated Fourier expansion: genus, weight, trace bound, and a
    total coefficient map over the enumerated index set."""

    def __init__(self, g: int, weight: int, max_trace: int, coeffs: dict,
                 prefactor_power: int = 0):
        if max_trace < 0 or max_trace % 2 != 0:
            raise ValueError("max_trace must be a non-negative even integer")
        self.g = g
        self.weight = weight
        self.max_trace = max_trace
        self.prefactor_power = prefactor_power
        norm = {}
        for key, val in coeffs.items():
            s = idx.validate_index(key)
            if idx.trace(s) > max_trace:
                raise ValueError("coefficient index beyond max_trace")
            norm[s] = val
        self._coeffs = MappingProxyType(norm)

    @property
    def coeffs(self):
        return self._coeffs

    def coefficient(self, key):
        """Exact coefficient at the index; absent keys within the truncation
        are zero, beyond it they raise TruncationError."""
        s = idx.validate_index(key)
        if idx.trace(s) > self.max_trace:
            raise TruncationError(f"index has trace {idx.trace(s)} beyond "
                                  f"truncation {self.max_trace}")
        return self._coeffs.get(s, 0)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self._coeffs.values())

    def support(self):
        return sorted((s for s, v in self._coeffs.items() if v != 0),
                      key=lambda s: (idx.trace(s), idx.upper_triangle(s)))

    # -- arithmetic -------------------------------------------------------

    def _check_compatible(self, other):
        if self.g != other.g or self.weight != other.weight \
                or self.prefactor_power != other.prefactor_power:
            raise IncompatibleExpansionError(
                "expansions differ in genus, weight or prefactor")

    def __add__(self, other):
        self._check_compatible(other)
        mt = min(self.max_trace, other.max_trace)
        keys = {s for s in self._coeffs if idx.trace(s) <= mt}
        keys |= {s for s in other._coeffs if idx.trace(s) <= mt}
        return FourierExpansion(
            self.g, self.weight, mt,
            {s: self._coeffs.get(s, 0) + other._coeffs.get(s, 0) for s in keys},
            self.prefactor_power)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return FourierExpansion(
            self.g, self.weight, self.max_trace,
            {s: c * v for s, v in self._coeffs.items()}, self.prefactor_power)

    def __eq__(self, other):
        if not isinstance(other, FourierExpansion):
            return NotImplemented
        if (self.g, self.weight, self.max_trace, self.prefactor_power) != \
                (other.g, other.weight, other.max_trace, other.prefactor_power):
            return False
        keys = set(self._coeffs) | set(other._coeffs)
        return all(self._coeffs.get(s, 0) == other._coeffs.get(s, 0)
                   for s in keys)

    def __hash__(self):
        return hash((self.g, self.weight, self.max_trace))

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        entries = []
        for s in sorted(self._coeffs,
                        key=lambda s: (idx.trace(s), idx.upper_triangle(s))):
            a = self._coeffs[s]
            if not isinstance(a, int):
                raise ValueError("only integer coefficients serialize")
            entries.append({"S": idx.upper_triangle(s), "a": str(a)})
        return {
            "format": "fourier-expansion",
            "version": SERIALIZATION_VERSION,
            "genus": self.g,
            "weight": self.weight,
            "max_trace": self.max_trace,
            "prefactor_power": self.prefactor_power,
            "entries": entries,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FourierExpansion":
        if doc.get("format") != "fourier-expansion" or \
                doc.get("version") != SERIALIZATION_VERSION:
            raise ValueError("not a supported fourier-expansion document")
        g = int(doc["genus"])
        coeffs = {}
        for ent in doc["entries"]:
            s = idx.from_upper_triangle(g, ent["S"])
            coeffs[s] = int(ent["a"])
        return cls(g=g, weight=int(doc["weight"]),
                   max_trace=int(doc["max_trace"]), coeffs=coeffs,
                   prefactor_power=int(doc.get("prefactor_power", 0)))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"),
                          sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "FourierExpansion":
        return cls.from_json(json.loads(text))


def zero_expansion(g: int, weight: int, max_trace: int) -> FourierExpansion:
    return FourierExpansion(g, weight, max_trace,
                            {s: 0 for s in idx.enumerate_indices(g, max_trace)})


def siegel_operator(f: FourierExpansion) -> FourierExpansion:
    """Drop one genus: the new coefficient at S1 is the old one at S1 + [0].

    Weight and truncation are preserved.
    """
    if f.g < 2:
        raise IncompatibleExpansionError("siegel operator needs genus >= 2")
    g = f.g - 1
    coeffs = {}
    for s, v in f.coeffs.items():
        if any(s[g][q] != 0 for q in range(g + 1)):
            continue
        minor = tuple(tuple(s[p][q] for q in range(g)) for p in range(g))
        coeffs[minor] = v
    return FourierExpansion(g, f.weight, f.max_trace, coeffs,
                            f.prefactor_power)


class DerivativePolynomial:
    """A polynomial in the entries x_pq (p <= q) of a symmetric g x g matrix,
    used as a constant-coefficient derivative operator on expansions.

    terms maps a monomial (a sorted tuple of ((p, q), exponent) pairs, 0-based
    positions) to an exact rational coefficient.
    """

    def __init__(self, g: int, terms: dict):
        self.g = g
        clean = {}
        for mono, coef in terms.items():
            mono = tuple(sorted(((int(p), int(q)), int(e)) for (p, q), e in mono))
            for (p, q), e in mono:
                if not (0 <= p <= q < g) or e < 1:
                    raise ValueError("bad monomial variable")
            coef = Fraction(coef)
            if coef:
                clean[mono] = clean.get(mono, Fraction(0)) + coef
        self.terms = {m: c for m, c in clean.items() if c}

    @property
    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e for _, e in mono) for mono in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e for _, e in m) for m in self.terms}
        return len(degs) <= 1

    @classmethod
    def constant(cls, g: int, c=1) -> "DerivativePolynomial":
        return cls(g, {(): Fraction(c)})

    @classmethod
    def variable(cls, g: int, p: int, q: int) -> "DerivativePolynomial":
        p, q = min(p, q), max(p, q)
        return cls(g, {(((p, q), 1),): Fraction(1)})

    def evaluate_at(self, entries) -> Fraction:
        """Value of the polynomial at a concrete symmetric integer matrix."""
        s = idx.as_entries(entries)
        total = Fraction(0)
        for mono, coef in self.terms.items():
            val = coef
            for (p, q), e in mono:
                val *= Fraction(s[p][q]) ** e
            total += val
        return total

    def __add__(self, other):
        if self.g != other.g:
            raise ValueError("genus mismatch")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return DerivativePolynomial(self.g, terms)

    def scale(self, c):
        return DerivativePolynomial(
            self.g, {m: Fraction(c) * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if self.g != other.g:
            raise ValueError("genus mismatch")
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                merged = {}
                for (pq, e) in m1 + m2:
                    merged[pq] = merged.get(pq, 0) + e
                mono = tuple(sorted(merged.items()))
                terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
        return DerivativePolynomial(self.g, terms)


def apply_derivative(f: FourierExpansion,
                     n: DerivativePolynomial) -> FourierExpansion:
    """Multiply each coefficient a(X) by N({x_pq}); the (pi*i)^deg(N)
    prefactor is tracked on the result, not applied numerically."""
    if n.g != f.g:
        raise IncompatibleExpansionError("derivative genus mismatch")
    coeffs = {}
    for s, a in f.coeffs.items():
        val = n.evaluate_at(s) * a
        if val.denominator == 1:
            val = int(val)
        coeffs[s] = val
    return FourierExpansion(f.g, f.weight, f.max_trace, coeffs,
                            f.prefactor_power + n.degree)


def _phase_trace(s, tau) -> complex:
    """sum_{p,q} S_pq tau_pq for a stored index and a tau matrix."""
    g = len(s)
    total = 0
    for p in range(g):
        total += s[p][p] * tau[p][p]
        for q in range(p + 1, g):
            total += 2 * s[p][q] * tau[p][q]
    return total


def evaluate(f: FourierExpansion, point: SiegelPoint,
             precision: int = None) -> EvalResult:
    """sum over stored indices of a(S) exp(pi*i*tr(S tau)).

    The symbolic prefactor is *not* folded in; it is reported on the result.
    With `precision` set, the sum runs in mpmath at that many decimal digits.
    """
    if point.g != f.g:
        raise IncompatibleExpansionError("point genus mismatch")
    lam = point.im_min_eig
    boundary = sum(abs(v) for s, v in f.coeffs.items()
                   if idx.trace(s) == f.max_trace)
    tail = math.exp(-math.pi * lam * (f.max_trace + 2)) * float(boundary)
    tau = point.tau
    if precision is not None:
        import mpmath as mp
        with mp.workdps(precision):
            total = mp.mpc(0)
            pii = mp.pi * 1j
            for s, a in f.coeffs.items():
                if a == 0:
                    continue
                ph = _phase_trace(s, tau)
                total += (mp.mpf(a.numerator) / a.denominator
                          if isinstance(a, Fraction) else mp.mpf(a)) \
                    * mp.exp(pii * mp.mpc(ph))
            return EvalResult(value=total, tail_estimate=tail,
                              prefactor_power=f.prefactor_power)
    total = 0j
    for s, a in f.coeffs.items():
        if a == 0:
            continue
        total += float(a) * cmath.exp(1j * math.pi * _phase_trace(s, tau))
    return EvalResult(value=total, tail_estimate=tail,
                      prefactor_power=f.prefactor_power)


@dataclass(frozen=True)
class LimitReport:
    """Convergence of F(tau (+) i t) toward (Phi F)(tau) as t grows."""

    t_values: tuple
    deviations: tuple
    limit: complex
    tolerance: float
    passed: bool


def siegel_limit_check(f: FourierExpansion, point: SiegelPoint, t_values,
                       tolerance: float = 1e-12,
                       precision: int = None) -> LimitReport:
    """Evaluate F at tau (+) i*t for increasing t and compare with the
    Fourier-side Siegel operator."""
    if point.g != f.g - 1:
        raise IncompatibleExpansionError("point genus must be f.g - 1")
    phi = siegel_operator(f)
    target = evaluate(phi, point, precision=precision).value
    devs = []
    for t in t_values:
        if t <= 0:
            raise DomainError("t values must be positive")
        corner = SiegelPoint.scalar(1, 1j * t)
        val = evaluate(f, point.direct_sum(corner), precision=precision).value
        devs.append(abs(val - target))
    passed = bool(devs and float(devs[-1]) <= tolerance)
    return LimitReport(t_values=tuple(t_values),
                       deviations=tuple(float(d) for d in devs),
                       limit=complex(target), tolerance=tolerance,
                       passed=passed)
