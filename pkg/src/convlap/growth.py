"""Ray-sampled growth classification for transform outputs.

A transform value ``v`` belongs to the exponential class of a convex set
when ``|v(w)| e^{-h(w) - eps*|w|}`` stays bounded for the set's support
evaluator ``h``, at every tolerance ``eps`` in a ladder.  Growth of this
kind is dominated along rays, so the functional is sampled on
equiangular rays crossed with a geometric radius ladder and judged per
radius.

All internal arithmetic runs in log space through
``TransformResult.log_abs`` so that sampling radii in the thousands
cannot overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_EPS_LADDER",
    "DEFAULT_RADII",
    "ExpClassVerdict",
    "GrowthReport",
    "GrowthSample",
    "classify_growth",
    "exp_class_verdict",
    "growth_ratio_sup",
]

DEFAULT_RADII: tuple[float, ...] = tuple(
    float(r) for r in np.geomspace(1.0, 1.0e4, 25))
DEFAULT_EPS_LADDER: tuple[float, ...] = (0.5, 0.25, 0.1)

# Successive radius sups may creep up by this factor before the bounded
# verdict is withdrawn; absorbs quadrature noise near the sup.
SUP_GROWTH_FACTOR = 1.05


@dataclass(frozen=True)
class GrowthSample:
    """One evaluation of the growth functional.

    ratio is |v(w)| e^{-h(w)-eps*norm(w)}; log_ratio is its logarithm,
    kept separately because the linear value may overflow to inf.
    """

    w: complex
    abs_value: float
    support: float
    ratio: float
    log_ratio: float
    ray_index: int
    radius: float


@dataclass(frozen=True)
class GrowthReport:
    epsilon: float
    radii: tuple[float, ...]
    rays: int
    samples: tuple[GrowthSample, ...]
    radius_sups: tuple[float, ...]
    log_radius_sups: tuple[float, ...]
    verdict: str
    growth_rate: float

    @property
    def sup(self) -> float:
        return max(self.radius_sups)


@dataclass(frozen=True)
class ExpClassVerdict:
    epsilons: tuple[float, ...]
    verdicts: tuple[str, ...]
    member: bool
    monotone: bool
    growth_rates: tuple[float, ...]


def _lin(value: float) -> float:
    try:
        return math.exp(value)
    except OverflowError:
        return math.inf


def growth_ratio_sup(v, h: Callable[[complex], float], eps: float,
                     radii: Sequence[float] | None = None, rays: int = 64,
                     norm: Callable[[complex], float] = abs) -> GrowthReport:
    """Sample the growth functional of v on rays x radii and judge it.

    v needs log_abs(w) and domain_contains(w); sampling skips points
    outside the domain.  Verdict "bounded" means the per-radius sups
    stop increasing (within SUP_GROWTH_FACTOR) after the first quartile
    of the ladder; "unbounded" means the log sup grows linearly in the
    radius with fitted slope above eps/2; anything else is
    "inconclusive".
    """
    if eps <= 0 or not math.isfinite(eps):
        raise ValueError("eps must be a positive finite real")
    if rays < 1:
        raise ValueError("need at least one ray")
    ladder = tuple(float(r) for r in (DEFAULT_RADII if radii is None else radii))
    if not ladder:
        raise ValueError("empty radius ladder")
    if any(b <= a for a, b in zip(ladder, ladder[1:])) or ladder[0] <= 0:
        raise ValueError("radius ladder must be positive and strictly increasing")

    directions = [complex(math.cos(2 * math.pi * k / rays),
                          math.sin(2 * math.pi * k / rays))
                  for k in range(rays)]
    samples: list[GrowthSample] = []
    log_sups: list[float] = []
    for radius in ladder:
        best = -math.inf
        count = 0
        for k, d in enumerate(directions):
            w = radius * d
            if not v.domain_contains(w):
                continue
            hw = float(h(w))
            log_v = v.log_abs(w)
            log_ratio = log_v - hw - eps * norm(w)
            samples.append(GrowthSample(
                w=w, abs_value=_lin(log_v), support=hw,
                ratio=_lin(log_ratio), log_ratio=log_ratio,
                ray_index=k, radius=radius))
            if log_ratio > best:
                best = log_ratio
            count += 1
        if count == 0:
            raise ValueError(
                f"empty sample set: no ray point at radius {radius} "
                "lies in the domain of v")
        log_sups.append(best)

    q = len(ladder) // 4
    window = log_sups[q:]
    log_tol = math.log(SUP_GROWTH_FACTOR)
    nonincreasing = all(b <= a + log_tol for a, b in zip(window, window[1:]))

    fit = [(r, s) for r, s in zip(ladder[q:], window) if math.isfinite(s)]
    if len(fit) >= 2:
        rate = float(np.polyfit([r for r, _ in fit], [s for _, s in fit], 1)[0])
    elif window and window[-1] == -math.inf:
        rate = -math.inf
    else:
        rate = 0.0

    if nonincreasing:
        verdict = "bounded"
    elif rate > eps / 2:
        verdict = "unbounded"
    else:
        verdict = "inconclusive"

    samples.sort(key=lambda s: (s.ray_index, s.radius))
    return GrowthReport(
        epsilon=eps, radii=ladder, rays=rays, samples=tuple(samples),
        radius_sups=tuple(_lin(s) for s in log_sups),
        log_radius_sups=tuple(log_sups), verdict=verdict, growth_rate=rate)


def exp_class_verdict(reports: Sequence[GrowthReport]) -> ExpClassVerdict:
    """Aggregate per-eps reports into a membership claim.

    Reports must share the sampling lattice and come in strictly
    decreasing eps order.  Membership requires a bounded verdict at
    every eps; the monotone flag records whether boundedness at an eps
    propagated to every larger eps as it must.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("need at least one growth report")
    epsilons = tuple(r.epsilon for r in reports)
    if any(b >= a for a, b in zip(epsilons, epsilons[1:])):
        raise ValueError("eps ladder must be strictly decreasing")
    base = reports[0]
    for r in reports[1:]:
        if r.radii != base.radii or r.rays != base.rays:
            raise ValueError("growth reports use inconsistent sampling lattices")
    verdicts = tuple(r.verdict for r in reports)
    monotone = True
    seen_unbounded = False
    for verdict in verdicts:
        if verdict == "bounded" and seen_unbounded:
            monotone = False
        if verdict != "bounded":
            seen_unbounded = True
    member = all(v == "bounded" for v in verdicts) and monotone
    return ExpClassVerdict(
        epsilons=epsilons, verdicts=verdicts, member=member,
        monotone=monotone,
        growth_rates=tuple(r.growth_rate for r in reports))


def classify_growth(v, h: Callable[[complex], float],
                    eps_ladder: Sequence[float] = DEFAULT_EPS_LADDER,
                    radii: Sequence[float] | None = None, rays: int = 64,
                    norm: Callable[[complex], float] = abs) -> ExpClassVerdict:
    """Run growth_ratio_sup across an eps ladder and aggregate."""
    reports = [growth_ratio_sup(v, h, eps, radii=radii, rays=rays, norm=norm)
               for eps in eps_ladder]
    return exp_class_verdict(reports)
