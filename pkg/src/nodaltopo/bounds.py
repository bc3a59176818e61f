"""Closed-form bounds and predictions for nodal counts of degree-n harmonics."""

from __future__ import annotations

from dataclasses import dataclass

from . import specfun


def courant_bound(n: int) -> int:
    """Courant: a degree-n eigenfunction has at most n^2 nodal-set components."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    return n * n


def karpushkin_bound(n: int) -> int:
    """Karpushkin-type component bound: n^2-2n+2 for even n, (n-1)^2+3 for odd."""
    if n < 2:
        raise ValueError("degree must be >= 2")
    return n * n - 2 * n + 2 if n % 2 == 0 else (n - 1) ** 2 + 3


_J0_FIRST_ZERO: float | None = None


def pleijel_estimate(n: int) -> float:
    """Asymptotic domain-count estimate 4 n^2 / j0^2 ~ 0.69 n^2.

    Reported for comparison only; the o(1) correction is unquantified, so
    this is never used as a pass/fail gate.
    """
    global _J0_FIRST_ZERO
    if n < 1:
        raise ValueError("degree must be >= 1")
    if _J0_FIRST_ZERO is None:
        _J0_FIRST_ZERO = specfun.bessel_zeros(0, 1).zeros[0]
    return 4.0 * n * n / _J0_FIRST_ZERO**2


def predicted_ovals(n: int) -> dict:
    """Oval count of the perturbed-harmonic construction of degree n.

    Exact for n = 4k+3 ((k+1)(4k+2)+1) and even n = 2m (m(m+1)); a lower
    bound 4k^2+1 for n = 4k+1, where extra small domains are ignored.
    """
    if n < 3:
        raise ValueError("construction needs degree >= 3")
    if n % 2 == 0:
        m = n // 2
        return {"exact": m * (m + 1)}
    if n % 4 == 3:
        k = (n - 3) // 4
        return {"exact": (k + 1) * (4 * k + 2) + 1}
    k = (n - 1) // 4
    return {"at_least": 4 * k * k + 1}


def lewy_lower(n: int) -> int:
    """Minimal possible component count: 2 for even n >= 2, else 1."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    return 2 if n % 2 == 0 else 1


@dataclass(frozen=True)
class BoundReport:
    degree: int
    components: int
    domains: int
    courant: int
    karpushkin: int
    pleijel_estimate: float
    lewy_lower: int
    parity_ok: bool
    courant_ok: bool
    karpushkin_ok: bool

    def as_dict(self) -> dict:
        return {
            "degree": self.degree,
            "components": self.components,
            "domains": self.domains,
            "courant": self.courant,
            "karpushkin": self.karpushkin,
            "pleijel_estimate": self.pleijel_estimate,
            "lewy_lower": self.lewy_lower,
            "parity_ok": self.parity_ok,
            "courant_ok": self.courant_ok,
            "karpushkin_ok": self.karpushkin_ok,
        }


def bound_report(n: int, components: int, domains: int) -> BoundReport:
    """Check an observed extraction against every applicable bound."""
    return BoundReport(
        degree=n,
        components=components,
        domains=domains,
        courant=courant_bound(n),
        karpushkin=karpushkin_bound(n) if n >= 2 else courant_bound(n),
        pleijel_estimate=pleijel_estimate(n),
        lewy_lower=lewy_lower(n),
        parity_ok=components % 2 == n % 2,
        courant_ok=domains <= courant_bound(n),
        karpushkin_ok=components <= (karpushkin_bound(n) if n >= 2 else courant_bound(n)),
    )
