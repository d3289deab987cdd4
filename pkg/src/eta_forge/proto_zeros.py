"""Scanning vertical lines for proto-zeros of the finite eta sums.

A proto-zero at fixed sigma is a strict local minimum of |eta_n(sigma+it)|
on the t-grid, polished by golden-section search to one hundredth of the
grid step.  The "decay" attached to each record is the imaginary offset d
such that evaluating at complex ordinate t + i*d would deepen the minimum;
it is estimated from the first-order Newton step of the analytic function
(see ``scan_line``).

The resolving power of a finite eta is set by its largest participating
prime p through the local constant hbar_p = ln(p) / (2 pi): the smallest
oscillatory interval in t it can resolve is 1 / hbar_p.  Grid steps are
validated against that scale.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import DomainError
from .finite_eta import Family, FiniteEtaSpec, derivative, evaluate
from .hasse_global import ZeroRecord
from .numerics import PrecisionContext

__all__ = [
    "PlanckInfo",
    "ScanConfig",
    "ProtoZeroRecord",
    "CloudComparison",
    "is_prime",
    "planck_resolution",
    "default_step",
    "scan_line",
    "proto_cloud",
    "compare_to_global",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)  # deterministic far past 2^31


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin (exact for everything we accept)."""
    if not isinstance(p, int) or p < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p == small:
            return True
        if p % small == 0:
            return False
    d = p - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PlanckInfo:
    p: int              # the prime
    hbar_p: float       # ln(p) / (2 pi)
    resolution: float   # 1 / hbar_p, smallest resolvable t-interval


def planck_resolution(p: int) -> PlanckInfo:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    hbar = math.log(p) / (2.0 * math.pi)
    return PlanckInfo(p=p, hbar_p=hbar, resolution=1.0 / hbar)


def _largest_participating_prime(spec: FiniteEtaSpec) -> int | None:
    top = max(spec.bases, default=1)
    for q in range(top, 1, -1):
        if is_prime(q):
            return q
    return None


def default_step(spec: FiniteEtaSpec) -> float:
    """Resolution of the largest participating prime, divided by 20."""
    p = _largest_participating_prime(spec)
    if p is None:
        raise DomainError(
            f"family {spec.family.value} n={spec.n} has no oscillatory base; "
            "nothing to scan")
    return planck_resolution(p).resolution / 20.0


@dataclass(frozen=True)
class ScanConfig:
    spec: FiniteEtaSpec
    sigma: float
    t_min: float
    t_max: float
    step: float

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise DomainError(f"need t_min < t_max, got [{self.t_min}, {self.t_max}]")
        if not self.step > 0:
            raise DomainError("step must be positive")
        p = _largest_participating_prime(self.spec)
        if p is not None:
            limit = planck_resolution(p).resolution / 10.0
            if self.step > limit * (1 + 1e-12):
                raise DomainError(
                    f"step {self.step} coarser than resolution/10 = {limit:.6g} "
                    f"of the largest participating prime {p}")


@dataclass(frozen=True)
class ProtoZeroRecord:
    spec: FiniteEtaSpec
    sigma: float
    t: float
    magnitude: float   # |eta_n(sigma + i t)| at the polished minimum
    decay: float       # imaginary t-offset that would deepen the minimum


@dataclass(frozen=True)
class CloudComparison:
    per_n_distance: dict   # n -> nearest |t_proto - t_zero|
    centroid_t: float      # weight-2^-(n+1) average of the nearest t per n
    centroid_distance: float


def _golden_min(f, a: float, b: float, xtol: float) -> float:
    """Golden-section minimum of a unimodal f on [a, b] to width xtol."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > xtol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


def scan_line(cfg: ScanConfig, ctx: PrecisionContext = PrecisionContext(),
              jobs: int = 1) -> list[ProtoZeroRecord]:
    """All strict grid minima of |eta(sigma+it)|, polished to step/100.

    The grid is evaluated in chunks (optionally concurrently); detection
    and polish are deterministic and independent of the chunking.  The
    decay estimate is Re(eta / eta'), the imaginary part of the Newton
    step in the complex ordinate t.
    """
    spec, sigma = cfg.spec, cfg.sigma

    def mag(t: float) -> float:
        return abs(evaluate(spec, complex(sigma, t), ctx).value.to_complex())

    count = int(math.floor((cfg.t_max - cfg.t_min) / cfg.step + 1e-9)) + 1
    ts = [cfg.t_min + i * cfg.step for i in range(count)]
    if jobs > 1 and count > 64:
        chunk = (count + jobs - 1) // jobs
        blocks = [ts[i:i + chunk] for i in range(0, count, chunk)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            vals_blocks = list(pool.map(lambda blk: [mag(t) for t in blk], blocks))
        vals = [v for blk in vals_blocks for v in blk]
    else:
        vals = [mag(t) for t in ts]

    records = []
    xtol = cfg.step / 100.0
    for i in range(1, count - 1):
        if vals[i] < vals[i - 1] and vals[i] < vals[i + 1]:
            t_star = _golden_min(mag, ts[i - 1], ts[i + 1], xtol)
            s_star = complex(sigma, t_star)
            val = evaluate(spec, s_star, ctx).value.to_complex()
            dval = derivative(spec, s_star, ctx).value.to_complex()
            decay = (val / dval).real if dval != 0 else 0.0
            records.append(ProtoZeroRecord(
                spec=spec, sigma=sigma, t=t_star, magnitude=abs(val), decay=decay))
    records.sort(key=lambda r: r.t)
    return records


def proto_cloud(n_max: int, sigma: float, t_center: float, half_width: float,
                ctx: PrecisionContext = PrecisionContext(),
                jobs: int = 1) -> list[ProtoZeroRecord]:
    """Union of scan_line over n = 1..n_max around t_center, tagged by n.

    A degenerate window (half_width = 0) yields an empty cloud.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    if half_width < 0:
        raise DomainError("half_width must be >= 0")
    if half_width == 0:
        return []
    out = []
    for n in range(1, n_max + 1):
        spec = FiniteEtaSpec(Family.HASSE, n)
        cfg = ScanConfig(spec=spec, sigma=sigma,
                         t_min=t_center - half_width, t_max=t_center + half_width,
                         step=default_step(spec))
        out.extend(scan_line(cfg, ctx, jobs=jobs))
    out.sort(key=lambda r: (r.spec.n, r.t))
    return out


def compare_to_global(records: list[ProtoZeroRecord], zero: ZeroRecord) -> CloudComparison:
    """Descriptive distances between a proto-zero cloud and one true zero.

    Per index n, the nearest record's |t - t_zero|; plus the centroid of
    those nearest ordinates under the series weights 2^(-(n+1)) and its
    distance to the zero.  Purely descriptive, no assertion.
    """
    if not records:
        raise DomainError("empty record list")
    nearest: dict[int, ProtoZeroRecord] = {}
    for r in records:
        n = r.spec.n
        if n not in nearest or abs(r.t - zero.t) < abs(nearest[n].t - zero.t):
            nearest[n] = r
    per_n = {n: abs(r.t - zero.t) for n, r in sorted(nearest.items())}
    wsum = sum(0.5 ** (n + 1) for n in nearest)
    centroid = sum(0.5 ** (n + 1) * r.t for n, r in nearest.items()) / wsum
    return CloudComparison(
        per_n_distance=per_n,
        centroid_t=centroid,
        centroid_distance=abs(centroid - zero.t),
    )
