"""First-order degeneration of period matrices and the tangency coefficients.

A one-parameter family of genus-(g+1) period matrices degenerating to a
genus-g one is modeled to first order in the pencil parameter t: the genus-g
block moves along tau + t*sigma, the border is an Abel-Jacobi difference plus
t*s, and the corner carries (1/(2*pi*i)) log t.  The module computes the two
coefficients A and B of the resulting t-expansion of a modular form and
verifies the tangent-direction identity and the lambda*mu scaling law.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import indices as idx
from .expansion import (DerivativePolynomial, DomainError, FourierExpansion,
                        IncompatibleExpansionError, SiegelPoint,
                        apply_derivative, evaluate)

TWO_PI_I = 2j * math.pi


def _as_complex(val) -> complex:
    """Accept a plain number or an [re, im] pair."""
    if isinstance(val, (list, tuple)):
        re, im = val
        return complex(float(re), float(im))
    return complex(val)


def _pair(z: complex):
    return [z.real, z.imag]


@dataclass(frozen=True)
class DegenerationData:
    """Inputs of the first-order period-matrix formula.

    v_a and v_b hold the values of the normalized differentials at the two
    glued points; aj is the Abel-Jacobi difference of the points; s, c1, c2
    are free holomorphic data that do not affect A.  lambda_ and mu are the
    nonzero local-coordinate rescalings at the two points.
    """

    g: int
    tau: SiegelPoint
    v_a: tuple
    v_b: tuple
    aj: tuple = None
    s: tuple = None
    c1: complex = 0j
    c2: complex = 0j
    lambda_: complex = 1 + 0j
    mu: complex = 1 + 0j

    def __post_init__(self):
        if self.tau.g != self.g:
            raise DomainError("tau genus mismatch")
        for name in ("v_a", "v_b", "aj", "s"):
            vec = getattr(self, name)
            if vec is None:
                vec = (0j,) * self.g
            if len(vec) != self.g:
                raise ValueError(f"{name} must have length g")
            object.__setattr__(self, name, tuple(complex(z) for z in vec))
        object.__setattr__(self, "c1", complex(self.c1))
        object.__setattr__(self, "c2", complex(self.c2))
        object.__setattr__(self, "lambda_", complex(self.lambda_))
        object.__setattr__(self, "mu", complex(self.mu))
        if self.lambda_ == 0 or self.mu == 0:
            raise ValueError("lambda and mu must be nonzero")

    @classmethod
    def from_json(cls, doc: dict) -> "DegenerationData":
        g = int(doc["genus"])
        tau = SiegelPoint(g, tuple(
            tuple(_as_complex(doc["tau"][p][q]) for q in range(g))
            for p in range(g)))
        def vec(name, default=None):
            if name not in doc:
                return default
            return tuple(_as_complex(z) for z in doc[name])
        return cls(
            g=g, tau=tau,
            v_a=vec("v_a"), v_b=vec("v_b"), aj=vec("aj"), s=vec("s"),
            c1=_as_complex(doc.get("c1", 0)), c2=_as_complex(doc.get("c2", 0)),
            lambda_=_as_complex(doc.get("lambda", 1)),
            mu=_as_complex(doc.get("mu", 1)),
        )

    def to_json(self) -> dict:
        return {
            "genus": self.g,
            "tau": [[_pair(self.tau.tau[p][q]) for q in range(self.g)]
                    for p in range(self.g)],
            "v_a": [_pair(z) for z in self.v_a],
            "v_b": [_pair(z) for z in self.v_b],
            "aj": [_pair(z) for z in self.aj],
            "s": [_pair(z) for z in self.s],
            "c1": _pair(self.c1),
            "c2": _pair(self.c2),
            "lambda": _pair(self.lambda_),
            "mu": _pair(self.mu),
        }


def sigma_matrix(v_a, v_b) -> np.ndarray:
    """sigma_pq = 2*pi*i * (v_a[p] v_b[q] + v_a[q] v_b[p]); symmetric and
    bilinear, so rescaling the inputs by (lambda, mu) rescales sigma by
    lambda*mu."""
    a = np.asarray(v_a, dtype=complex)
    b = np.asarray(v_b, dtype=complex)
    if a.ndim != 1 or a.shape != b.shape:
        raise ValueError("v_a and v_b must be equal-length vectors")
    return TWO_PI_I * (np.outer(a, b) + np.outer(b, a))


def period_matrix_first_order(data: DegenerationData, t: complex) -> np.ndarray:
    """The (g+1) x (g+1) period matrix of the degenerating family, first
    order in t, with the O(t^2) corrections omitted.

    The corner is (1/(2*pi*i)) (Log t + c1 + c2 t) with the principal branch
    of Log; t = 0 is the degenerate fiber and is rejected.
    """
    t = complex(t)
    if t == 0:
        raise DomainError("t = 0 is the degenerate fiber; the corner diverges")
    if abs(t) >= 1:
        raise DomainError("|t| must be < 1")
    g = data.g
    sigma = sigma_matrix(data.lambda_ * np.asarray(data.v_a),
                         data.mu * np.asarray(data.v_b))
    out = np.zeros((g + 1, g + 1), dtype=complex)
    out[:g, :g] = data.tau.matrix + t * sigma
    border = np.asarray(data.aj) + t * np.asarray(data.s)
    out[:g, g] = border
    out[g, :g] = border
    out[g, g] = (cmath.log(t) + data.c1 + data.c2 * t) / TWO_PI_I
    return out


def _phase_block(s, tau, g: int) -> complex:
    """sum over p, q < g of s_pq tau_pq (diagonal once, off-diagonal twice)."""
    total = 0j
    for p in range(g):
        total += s[p][p] * complex(tau[p][p])
        for q in range(p + 1, g):
            total += 2 * s[p][q] * complex(tau[p][q])
    return total


def coefficient_A(f: FourierExpansion, n: DerivativePolynomial,
                  tau: SiegelPoint, sigma) -> complex:
    """A = sum over stored indices S of
    a(S) N(S) (pi*i sum S_pq sigma_pq) exp(pi*i sum S_pq tau_pq).

    This is the exact t-derivative at 0 of the truncated evaluation of N(F)
    along tau + t*sigma; no (pi*i)^deg(N) prefactor is folded in, matching
    the bare values returned by evaluate."""
    if n.g != f.g or tau.g != f.g:
        raise IncompatibleExpansionError("genus mismatch")
    sig = np.asarray(sigma, dtype=complex)
    if sig.shape != (f.g, f.g):
        raise ValueError("sigma must be a g x g matrix")
    tm = tau.matrix
    total = 0j
    for s, a in f.coeffs.items():
        if a == 0:
            continue
        nv = n.evaluate_at(s)
        if nv == 0:
            continue
        phase_sigma = _phase_block(s, sig, f.g)
        phase_tau = _phase_block(s, tm, f.g)
        total += float(a) * float(nv) * (1j * math.pi * phase_sigma) \
            * cmath.exp(1j * math.pi * phase_tau)
    return total


def coefficient_B(f_next: FourierExpansion, n_next: DerivativePolynomial,
                  tau: SiegelPoint, aj) -> complex:
    """B = sum over stored genus-(g+1) indices X with corner entry 2 of
    a(X) N(X) exp(2*pi*i sum_p X_{p,g+1} aj_p) exp(pi*i sum_{p,q<=g} X_pq tau_pq).

    Reads neither lambda nor mu, so it is invariant under their rescaling."""
    g = f_next.g - 1
    if n_next.g != f_next.g or tau.g != g:
        raise IncompatibleExpansionError("genus mismatch")
    ajv = [complex(z) for z in aj]
    if len(ajv) != g:
        raise ValueError("aj must have length g")
    tm = tau.matrix
    total = 0j
    for s, a in f_next.coeffs.items():
        if a == 0 or s[g][g] != 2:
            continue
        nv = n_next.evaluate_at(s)
        if nv == 0:
            continue
        border_phase = sum(s[p][g] * ajv[p] for p in range(g))
        total += float(a) * float(nv) \
            * cmath.exp(TWO_PI_I * border_phase) \
            * cmath.exp(1j * math.pi * _phase_block(s, tm, g))
    return total


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one numerical identity check."""

    name: str
    passed: bool
    abs_error: float
    rel_error: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "tolerance": self.tolerance,
            "details": self.details,
        }


def _directional_derivative(f: FourierExpansion, tau: SiegelPoint, sigma,
                            step: float, precision=None) -> complex:
    """Central difference in t of evaluate(f, tau + t*sigma) at t = 0, with
    one Richardson extrapolation step."""
    tm = tau.matrix
    sig = np.asarray(sigma, dtype=complex)

    def at(t: float) -> complex:
        point = SiegelPoint(f.g, tuple(map(tuple, tm + t * sig)))
        return complex(evaluate(f, point, precision=precision).value)

    def central(h: float) -> complex:
        return (at(h) - at(-h)) / (2 * h)

    d1 = central(step)
    d2 = central(step / 2)
    return (4 * d2 - d1) / 3


def derivative_identity_check(f: FourierExpansion, n: DerivativePolynomial,
                              tau: SiegelPoint, sigma,
                              tolerance: float = 1e-6, step: float = 1e-4,
                              precision=None) -> CheckReport:
    """Verify that A equals the t-derivative at 0 of N(F)(tau + t*sigma).

    The right-hand side is a finite difference of the truncated evaluation,
    so sigma is confirmed to be a tangent direction of the form up to the
    stated tolerance."""
    lhs = coefficient_A(f, n, tau, sigma)
    rhs = _directional_derivative(apply_derivative(f, n), tau, sigma, step,
                                  precision=precision)
    abs_err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_err = abs_err / scale if scale > 0 else 0.0
    return CheckReport(
        name="derivative-identity", passed=rel_err <= tolerance,
        abs_error=abs_err, rel_error=rel_err, tolerance=tolerance,
        details={"A": _pair(lhs), "finite_difference": _pair(rhs),
                 "step": step})


DEFAULT_SCALING_PAIRS = ((1, 1), (2, 1), (1, 3), (-1, 2))


def scaling_law_check(f: FourierExpansion, n: DerivativePolynomial,
                      tau: SiegelPoint, v_a, v_b,
                      pairs=DEFAULT_SCALING_PAIRS,
                      tolerance: float = 1e-9) -> CheckReport:
    """A computed from sigma(lambda v_a, mu v_b) factors as D * lambda * mu
    with D independent of the pair; also recomputes B-irrelevant data: the
    ratios A/(lambda mu) must agree across the sample."""
    ratios = []
    values = {}
    for lam, mu in pairs:
        lam, mu = complex(lam), complex(mu)
        if lam == 0 or mu == 0:
            raise ValueError("lambda and mu must be nonzero")
        sig = sigma_matrix(lam * np.asarray(v_a, dtype=complex),
                           mu * np.asarray(v_b, dtype=complex))
        a_val = coefficient_A(f, n, tau, sig)
        ratios.append(a_val / (lam * mu))
        values[(lam, mu)] = a_val
    d = ratios[0]
    scale = max(abs(r) for r in ratios)
    spread = max(abs(r - d) for r in ratios)
    rel = spread / scale if scale > 0 else 0.0
    return CheckReport(
        name="scaling-law", passed=rel <= tolerance,
        abs_error=spread, rel_error=rel, tolerance=tolerance,
        details={"D": _pair(d),
                 "pairs": [[_pair(complex(l)), _pair(complex(m))]
                           for l, m in pairs],
                 "A_values": [_pair(values[(complex(l), complex(m))])
                              for l, m in pairs]})


def corner_exponential_check(data: DegenerationData, t: complex,
                             tolerance: float = 1e-9) -> CheckReport:
    """exp(2*pi*i T_{g+1,g+1}) must equal t exp(c1) (1 + c2 t) modulo t^2;
    with the first-order corner it equals t exp(c1) exp(c2 t) exactly."""
    t = complex(t)
    pm = period_matrix_first_order(data, t)
    lhs = cmath.exp(TWO_PI_I * pm[data.g, data.g])
    gamma1 = cmath.exp(data.c1)
    rhs = t * gamma1 * (1 + data.c2 * t)
    abs_err = abs(lhs - rhs)
    # the omitted t^2 terms bound the allowed discrepancy
    budget = abs(t) ** 2 * max(1.0, abs(gamma1)) \
        * max(1.0, abs(data.c2)) ** 2 + tolerance
    rel = abs_err / max(abs(lhs), abs(rhs), 1e-300)
    return CheckReport(
        name="corner-exponential", passed=abs_err <= budget,
        abs_error=abs_err, rel_error=rel, tolerance=budget,
        details={"t": _pair(t), "lhs": _pair(lhs), "rhs": _pair(rhs)})


def degeneration_limit_check(f_next: FourierExpansion, f: FourierExpansion,
                             data: DegenerationData, t_values=(1e-3, 1e-4, 1e-5),
                             tolerance: float = 1e-2) -> CheckReport:
    """The t -> 0+ limit of f_next at the degenerating period matrix must be
    f at tau: the constant term of the t-expansion survives alone."""
    if f_next.g != data.g + 1 or f.g != data.g:
        raise IncompatibleExpansionError("genus mismatch")
    target = complex(evaluate(f, data.tau).value)
    devs = []
    for t in t_values:
        if not (isinstance(t, (int, float)) and t > 0):
            raise DomainError("t values must be positive reals")
        pm = period_matrix_first_order(data, t)
        point = SiegelPoint(data.g + 1, tuple(map(tuple, pm)))
        devs.append(abs(complex(evaluate(f_next, point).value) - target))
    scale = max(abs(target), 1.0)
    rel = devs[-1] / scale
    return CheckReport(
        name="degeneration-limit", passed=rel <= tolerance,
        abs_error=devs[-1], rel_error=rel, tolerance=tolerance,
        details={"t_values": list(t_values), "deviations": devs,
                 "limit": _pair(target)})


def fay_check(data: DegenerationData, f: FourierExpansion,
              f_next: FourierExpansion = None,
              n: DerivativePolynomial = None,
              derivative_tolerance: float = 1e-5) -> dict:
    """Run the full battery of degeneration checks against one data set.

    f is a genus-g expansion; f_next, when given, must be a genus-(g+1)
    expansion whose Siegel-operator image is f (used for the limit check and
    the B invariance)."""
    g = data.g
    if n is None:
        n = DerivativePolynomial.constant(g)
    sigma = sigma_matrix(data.lambda_ * np.asarray(data.v_a),
                         data.mu * np.asarray(data.v_b))
    checks = [
        corner_exponential_check(data, 1e-3),
        derivative_identity_check(f, n, data.tau, sigma,
                                  tolerance=derivative_tolerance),
        scaling_law_check(f, n, data.tau, data.v_a, data.v_b),
    ]
    a_val = coefficient_A(f, n, data.tau, sigma)
    report = {
        "genus": g,
        "A": _pair(a_val),
        "lambda": _pair(data.lambda_),
        "mu": _pair(data.mu),
    }
    if f_next is not None:
        n_next = DerivativePolynomial.constant(g + 1)
        b_val = coefficient_B(f_next, n_next, data.tau, data.aj)
        gamma1 = cmath.exp(data.c1)
        report["B"] = _pair(b_val)
        report["t_coefficient"] = _pair(a_val + gamma1 * b_val)
        checks.append(degeneration_limit_check(f_next, f, data))
    report["checks"] = [c.to_json() for c in checks]
    report["status"] = "pass" if all(c.passed for c in checks) else "fail"
    return report
