"""Exact geometry of product-of-round-sphere metric families.

A family is a product of unit round spheres, each carrying a scale function
a_i(t) (the factor metric is a_i(t) * g_unit).  Curvature invariants, sigma_2,
volume and the normalized comparison functional all come out as exact rational
functions or series in the deformation parameter t.

Block formulas used throughout (factor of dimension m, scale a):

    Ric   = (m-1)/a * g            (per factor, against the scaled metric)
    R     = sum_i m_i (m_i - 1) / a_i
    |Ric|^2 = sum_i m_i (m_i - 1)^2 / a_i^2
    Vol   = prod_i a_i^(m_i/2) * Vol(S^m_i(1))
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (
    PiScalar,
    Polynomial,
    RatFun,
    Rational,
    Series,
    format_rational,
    parse_rational,
    rational_sqrt,
    series_expand,
    series_pow,
)

__all__ = [
    "SphereFactor",
    "SphereProductFamily",
    "ParallelTTTensor",
    "EinsteinData",
    "EinsteinOperatorResult",
    "StabilityVerdict",
    "NotEinsteinError",
    "NonSquareScaleError",
    "DegenerateSigma2Error",
    "unit_sphere_volume",
    "ricci_invariants_path",
    "sigma2_path",
    "volume_path",
    "h_functional_path",
    "einstein_check",
    "einstein_operator_parallel",
    "stability_probe",
    "second_variation_closed_form",
    "counterexample_family",
    "family_from_dict",
    "family_to_dict",
]


class NotEinsteinError(ValueError):
    """Raised when an operation requires an Einstein background."""


class NonSquareScaleError(ValueError):
    """Raised when an exact volume needs a fractional power of a scale."""


class DegenerateSigma2Error(ZeroDivisionError):
    """Raised when sigma_2 of the background vanishes and a normalized ratio
    is requested.  Carries the unnormalized series (in units of the background
    volume times the background volume to the 4/n) as ``unnormalized``."""

    def __init__(self, msg: str, unnormalized: Series):
        super().__init__(msg)
        self.unnormalized = unnormalized


def unit_sphere_volume(m: int) -> PiScalar:
    """Volume of the unit round sphere S^m as an exact (rational) * pi^k.

    Vol(S^m) = 2 pi^((m+1)/2) / Gamma((m+1)/2); the half-integer Gamma values
    cancel the half-power of pi, so the result is rational * pi^ceil(m/2).
    """
    if m < 1:
        raise ValueError("sphere dimension must be >= 1")
    if m % 2:  # m = 2k-1: 2 pi^k / (k-1)!
        k = (m + 1) // 2
        fact = 1
        for j in range(1, k):
            fact *= j
        return PiScalar.pi_power(k, Fraction(2, fact))
    k = m // 2  # m = 2k: 2 * 4^k * k! / (2k)! * pi^k
    kfact = 1
    for j in range(1, k + 1):
        kfact *= j
    fact2k = 1
    for j in range(1, 2 * k + 1):
        fact2k *= j
    return PiScalar.pi_power(k, Fraction(2 * 4**k * kfact, fact2k))


@dataclass(frozen=True)
class SphereFactor:
    """One factor: a unit round sphere S^dim scaled by a(t)."""

    dim: int
    scale: RatFun

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("factor dimension must be >= 2")
        scale = self.scale if isinstance(self.scale, RatFun) else RatFun(self.scale)
        object.__setattr__(self, "scale", scale)
        if scale.den(0) == 0 or scale(0) <= 0:
            raise ValueError("factor scale must be positive at t=0")

    @property
    def scale_at_zero(self) -> Fraction:
        return self.scale(0)


class SphereProductFamily:
    """An ordered product of scaled round spheres, the metric family g_t."""

    def __init__(self, factors: Sequence[SphereFactor]):
        factors = tuple(factors)
        if not factors:
            raise ValueError("a family needs at least one factor")
        self.factors = factors
        self.dim = sum(f.dim for f in factors)
        if self.dim < 3:
            raise ValueError("total dimension must be >= 3")

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def velocity(self) -> "ParallelTTTensor | tuple[Fraction, ...]":
        """d/dt of the family at t=0, as coefficients against the unit factor
        metrics.  Returned as a ParallelTTTensor when trace-free, else as a
        raw coefficient tuple."""
        coeffs = tuple(f.scale.derivative()(0) for f in self.factors)
        try:
            return ParallelTTTensor(self, coeffs)
        except ValueError:
            return coeffs

    def rescaled(self, c: Fraction | int) -> "SphereProductFamily":
        """The family with every scale multiplied by the constant c > 0."""
        c = Fraction(c)
        if c <= 0:
            raise ValueError("rescaling constant must be positive")
        return SphereProductFamily(
            [SphereFactor(f.dim, f.scale * c) for f in self.factors]
        )


class ParallelTTTensor:
    """A parallel trace-free direction sum_i c_i * g_i on a sphere product.

    Trace-freeness is against the t=0 background: sum_i c_i m_i / a_i(0) = 0.
    """

    def __init__(self, family: SphereProductFamily, coefficients: Sequence):
        coeffs = tuple(Fraction(c) for c in coefficients)
        if len(coeffs) != len(family):
            raise ValueError("one coefficient per factor required")
        if all(c == 0 for c in coeffs):
            raise ValueError("the zero direction is not a valid TT tensor")
        trace = sum(
            c * f.dim / f.scale_at_zero for c, f in zip(coeffs, family.factors)
        )
        if trace != 0:
            raise ValueError(
                f"not trace-free: sum c_i m_i / a_i(0) = {format_rational(trace)}"
            )
        self.family = family
        self.coefficients = coeffs

    def norm_squared(self) -> Fraction:
        """|h|^2 against the background: sum c_i^2 m_i / a_i(0)^2."""
        return sum(
            c**2 * f.dim / f.scale_at_zero**2
            for c, f in zip(self.coefficients, self.family.factors)
        )


@dataclass(frozen=True)
class EinsteinData:
    """Outcome of the Einstein test at t=0: Ric = (n-1) * lam * g."""

    n: int
    lam: Rational | None
    is_einstein: bool


def ricci_invariants_path(fam: SphereProductFamily) -> tuple[RatFun, RatFun]:
    """Scalar curvature and |Ric|^2 of g_t, exactly."""
    R = RatFun(0)
    ric2 = RatFun(0)
    for f in fam:
        R = R + RatFun(f.dim * (f.dim - 1)) / f.scale
        ric2 = ric2 + RatFun(f.dim * (f.dim - 1) ** 2) / (f.scale * f.scale)
    return R, ric2


def sigma2_path(fam: SphereProductFamily) -> RatFun:
    """sigma_2(g_t) = -1/2 |Ric|^2 + n/(8(n-1)) R^2, exactly."""
    n = fam.dim
    R, ric2 = ricci_invariants_path(fam)
    return RatFun(Fraction(-1, 2)) * ric2 + RatFun(Fraction(n, 8 * (n - 1))) * R * R


def _scale_half_power(factor: SphereFactor, index: int) -> RatFun:
    """a(t)^(m/2) as an exact RatFun, or raise if the power is fractional."""
    if factor.dim % 2 == 0:
        return factor.scale ** (factor.dim // 2)
    root = factor.scale.sqrt()
    if root is None:
        raise NonSquareScaleError(
            f"factor {index} has odd dimension {factor.dim} and scale "
            f"{factor.scale} is not a perfect square; no exact volume"
        )
    if root(0) < 0:
        root = -root
    return root**factor.dim


def volume_path(fam: SphereProductFamily) -> tuple[RatFun, PiScalar]:
    """Volume of g_t as ratio(t) * Vol(t=0).

    ratio(t) = prod_i a_i(t)^(m_i/2) / a_i(0)^(m_i/2); the base volume is an
    exact pi-graded scalar.  Requires even factor dimensions or perfect-square
    scales so the half powers stay rational functions.
    """
    ratio = RatFun(1)
    base = PiScalar.rational(1)
    for i, f in enumerate(fam):
        half_power = _scale_half_power(f, i)
        at_zero = half_power(0)
        ratio = ratio * half_power / RatFun.constant(at_zero)
        base = base * PiScalar.rational(at_zero) * unit_sphere_volume(f.dim)
    return ratio, base


def h_functional_path(fam: SphereProductFamily, order: int) -> Series:
    """Series of the normalized comparison functional along the family.

    H(g) = Vol(g)^(4/n) * integral of sigma_2(g) against the background
    measure; on a homogeneous family the integrand is constant, so
    H(g_t)/H(g_0) = ratio(t)^(4/n) * sigma_2(g_t)/sigma_2(g_0).  The result is
    exact through the requested order.
    """
    n = fam.dim
    ratio, _ = volume_path(fam)
    sig = sigma2_path(fam)
    vol_part = series_pow(series_expand(ratio, order), Fraction(4, n), order)
    sig0 = sig(0)
    if sig0 == 0:
        raise DegenerateSigma2Error(
            "background sigma_2 vanishes; normalized ratio undefined",
            unnormalized=vol_part * series_expand(sig, order),
        )
    return vol_part * series_expand(sig / RatFun.constant(sig0), order)


def einstein_check(fam: SphereProductFamily) -> EinsteinData:
    """Test whether the t=0 member is Einstein and report lambda.

    The t=0 metric is Einstein iff the per-factor Ricci multiples
    (m_i - 1)/a_i(0) agree; then Ric = (n-1) lam g with that common value
    equal to (n-1) lam.
    """
    n = fam.dim
    multiples = [
        Fraction(f.dim - 1) / f.scale_at_zero for f in fam.factors
    ]
    if all(m == multiples[0] for m in multiples):
        return EinsteinData(n=n, lam=multiples[0] / (n - 1), is_einstein=True)
    return EinsteinData(n=n, lam=None, is_einstein=False)


@dataclass(frozen=True)
class EinsteinOperatorResult:
    """Einstein operator applied to a parallel direction, plus its spectrum
    on the trace-free parallel subspace (dimension k-1 for k factors)."""

    image_coefficients: tuple[Fraction, ...]
    eigenvalues: tuple[tuple[Fraction, int], ...]  # (value, multiplicity)
    basis: tuple[tuple[Fraction, ...], ...]

    def image_tensor(self, family: SphereProductFamily) -> ParallelTTTensor:
        return ParallelTTTensor(family, self.image_coefficients)


def _parallel_tt_basis(fam: SphereProductFamily) -> list[tuple[Fraction, ...]]:
    """Deterministic basis of the trace-free parallel subspace.

    Differences of trace-normalized factor directions, then Gram-Schmidt
    orthogonalized (without normalizing, to stay rational) under the
    background inner product <e_i, e_j> = delta_ij m_i / a_i(0)^2.
    """
    k = len(fam)
    weights = [Fraction(f.dim) / f.scale_at_zero**2 for f in fam.factors]

    def inner(u, v):
        return sum(w * a * b for w, a, b in zip(weights, u, v))

    raw = []
    for i in range(k - 1):
        v = [Fraction(0)] * k
        taui = Fraction(fam.factors[i].dim) / fam.factors[i].scale_at_zero
        tauj = Fraction(fam.factors[i + 1].dim) / fam.factors[i + 1].scale_at_zero
        v[i] = 1 / taui
        v[i + 1] = -1 / tauj
        raw.append(v)
    basis: list[list[Fraction]] = []
    for v in raw:
        for b in basis:
            coeff = inner(v, b) / inner(b, b)
            v = [a - coeff * c for a, c in zip(v, b)]
        basis.append(v)
    return [tuple(v) for v in basis]


def einstein_operator_parallel(
    fam: SphereProductFamily, h: ParallelTTTensor
) -> EinsteinOperatorResult:
    """Apply the Einstein operator to a parallel trace-free direction.

    Parallel tensors have vanishing rough Laplacian, so the operator reduces
    to twice the curvature action, acting per factor as
    2 (m_i - 1) / a_i(0) on the coefficient c_i.  On an Einstein background
    all the per-factor multipliers coincide at 2 (n-1) lam, making the whole
    trace-free parallel subspace one eigenspace; the spectrum report requires
    that case (it is the only one where the subspace is invariant).
    """
    d = [2 * Fraction(f.dim - 1) / f.scale_at_zero for f in fam.factors]
    image = tuple(di * ci for di, ci in zip(d, h.coefficients))
    basis = _parallel_tt_basis(fam)
    eigenvalues: tuple[tuple[Fraction, int], ...]
    if len(fam) == 1:
        eigenvalues = ()
    elif all(di == d[0] for di in d):
        eigenvalues = ((d[0], len(fam) - 1),)
    else:
        raise NotEinsteinError(
            "parallel spectrum is only defined on Einstein backgrounds "
            "(the trace-free subspace is not invariant otherwise)"
        )
    return EinsteinOperatorResult(
        image_coefficients=image,
        eigenvalues=eigenvalues,
        basis=tuple(basis),
    )


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of the parallel-direction stability probe.

    verdict is "unstable" when some parallel eigenvalue of the Einstein
    operator is >= 0 (strict stability requires the operator to be negative
    on trace-free transverse directions), otherwise "inconclusive": parallel
    directions are only a necessary-condition probe, never sufficient.
    """

    verdict: str
    eigenvalues: tuple[tuple[Fraction, int], ...]
    einstein: EinsteinData


def stability_probe(fam: SphereProductFamily) -> StabilityVerdict:
    """Probe strict stability of the t=0 member on parallel TT directions."""
    ed = einstein_check(fam)
    if not ed.is_einstein:
        raise NotEinsteinError("stability probe requires an Einstein background")
    if len(fam) == 1:
        return StabilityVerdict("inconclusive", (), ed)
    mu = 2 * (ed.n - 1) * ed.lam
    eigenvalues = ((Fraction(mu), len(fam) - 1),)
    verdict = "unstable" if mu >= 0 else "inconclusive"
    return StabilityVerdict(verdict, eigenvalues, ed)


def second_variation_closed_form(
    ed: EinsteinData, h: ParallelTTTensor, background_volume: PiScalar
) -> PiScalar:
    """Normalized second variation of the comparison functional along a
    parallel TT eigendirection, exactly:

        Vol^(-4/n) D^2 H = -1/4 * mu * (mu - (n-2)^2 lam / 2) * |h|^2 * Vol

    where mu is the Einstein-operator eigenvalue of h.
    """
    if not ed.is_einstein:
        raise NotEinsteinError("closed-form second variation needs Einstein data")
    result = einstein_operator_parallel(h.family, h)
    if not result.eigenvalues:
        raise ValueError("no trace-free parallel directions on one factor")
    mu = result.eigenvalues[0][0]
    n, lam = ed.n, ed.lam
    coeff = Fraction(-1, 4) * mu * (mu - Fraction((n - 2) ** 2, 2) * lam)
    return PiScalar.rational(coeff * h.norm_squared()) * background_volume


def counterexample_family() -> SphereProductFamily:
    """The unstable (S^2)^4 family: two factors scaled by 1/(1+4t^2) and one
    each by 1/(1+3t) and 1/(1-3t)."""
    one_plus_4t2 = Polynomial([1, 0, 4])
    return SphereProductFamily(
        [
            SphereFactor(2, RatFun(1, one_plus_4t2)),
            SphereFactor(2, RatFun(1, one_plus_4t2)),
            SphereFactor(2, RatFun(1, Polynomial([1, 3]))),
            SphereFactor(2, RatFun(1, Polynomial([1, -3]))),
        ]
    )


# -- family (de)serialization -------------------------------------------------


def family_from_dict(data) -> SphereProductFamily:
    """Build a family from the JSON description: a list of factor objects
    with integer dim and scale numerator/denominator coefficient arrays
    (entries are ints or "p/q" strings, lowest degree first)."""
    if isinstance(data, dict):
        data = data["factors"]
    factors = []
    for i, item in enumerate(data):
        try:
            dim = int(item["dim"])
            num = [parse_rational(c) for c in item["scaleNumeratorCoeffs"]]
            den = [parse_rational(c) for c in item.get("scaleDenominatorCoeffs", [1])]
        except (KeyError, ValueError) as exc:
            raise ValueError(f"factor {i}: {exc}") from exc
        factors.append(SphereFactor(dim, RatFun(Polynomial(num), Polynomial(den))))
    return SphereProductFamily(factors)


def family_to_dict(fam: SphereProductFamily) -> dict:
    factors = []
    for f in fam:
        num, den = f.scale.natural_parts()
        factors.append(
            {
                "dim": f.dim,
                "scaleNumeratorCoeffs": [format_rational(c) for c in num.coeffs],
                "scaleDenominatorCoeffs": [format_rational(c) for c in den.coeffs],
            }
        )
    return {"factors": factors}


def load_family(path: str) -> SphereProductFamily:
    with open(path) as fh:
        return family_from_dict(json.load(fh))
