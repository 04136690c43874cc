"""Piecewise-linear convex functions and their conjugates.

A PLConvexFunction is max_i (Re(z*b_i) + c_i) on its domain and +inf
elsewhere; with no pieces it is the indicator of the domain.  The
conjugate pairs z against w through Re(z*w) (complex product), so the
conjugate of the indicator of a set is exactly its support function.

Conjugation comes in three strengths:

* conjugate_at: pointwise, exact.  Indicators and single pieces reduce
  to support-function evaluations (valid for rounded domains too);
  anything else becomes a small exact LP over the polyhedral domain.
* symbolic_conjugate: the closed form h_domain(w - b) - c, available
  precisely for indicator or single-piece data.
* conjugate: the full piecewise-linear conjugate as a new
  PLConvexFunction, built from epigraph vertices and recession rays.
  Needs a polyhedral domain whose epigraph has at least one vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _lp
from ._lp import TWO_PI
from .convexgeom import (
    Cone,
    ConvexBody,
    ConvexRegion,
    affine_dimension,
    asymptotic_cone,
    polar_cone,
    signed_distance,
    support_function,
)

__all__ = [
    "PLConvexFunction",
    "ConjugateForm",
    "LegendreDimensions",
    "UnsupportedConjugate",
    "conjugate_at",
    "symbolic_conjugate",
    "conjugate",
    "legendre_dimensions",
]


class UnsupportedConjugate(ValueError):
    """The requested closed-form or symbolic conjugate does not exist
    for this data (e.g. several distinct pieces, or a rounded domain)."""


@dataclass(frozen=True)
class PLConvexFunction:
    pieces: tuple[tuple[complex, float], ...]
    domain: object  # ConvexBody | ConvexRegion

    def __init__(self, pieces, domain):
        ps = tuple((complex(b), float(c)) for b, c in pieces)
        for b, c in ps:
            if not (math.isfinite(b.real) and math.isfinite(b.imag)
                    and math.isfinite(c)):
                raise ValueError("pieces must be finite")
        if not isinstance(domain, (ConvexBody, ConvexRegion)):
            raise TypeError("domain must be a ConvexBody or ConvexRegion")
        object.__setattr__(self, "pieces", ps)
        object.__setattr__(self, "domain", domain)

    def value(self, z: complex, tol: float = 1e-9) -> float:
        z = complex(z)
        if signed_distance(self.domain, z) > tol:
            return math.inf
        if not self.pieces:
            return 0.0
        return max((z * b).real + c for b, c in self.pieces)


def _collapsed_pieces(f: PLConvexFunction):
    """Merge pieces with equal gradients (max of constants wins)."""
    out: list[tuple[complex, float]] = []
    for b, c in f.pieces:
        for i, (b0, c0) in enumerate(out):
            if abs(b - b0) <= 1e-14 * (1.0 + abs(b0)):
                out[i] = (b0, max(c0, c))
                break
        else:
            out.append((b, c))
    return out


def _domain_halfplanes(domain):
    """Half-plane list of an un-rounded polyhedral domain."""
    if isinstance(domain, ConvexRegion):
        if domain.rounding != 0.0:
            raise UnsupportedConjugate("rounded domains have no "
                                       "polyhedral description")
        return list(domain.halfplanes)
    if domain.rounding != 0.0:
        raise UnsupportedConjugate("rounded domains have no polyhedral "
                                   "description")
    verts = domain.vertices
    if len(verts) == 1:
        v = verts[0]
        return [(1.0, 0.0, v.real), (-1.0, 0.0, -v.real),
                (0.0, 1.0, v.imag), (0.0, -1.0, -v.imag)]
    hp = []
    n = len(verts)
    for i in range(n):
        e = verts[(i + 1) % n] - verts[i]
        norm = abs(e)
        nx, ny = e.imag / norm, -e.real / norm
        hp.append((nx, ny, nx * verts[i].real + ny * verts[i].imag))
    return hp


def conjugate_at(f: PLConvexFunction, w: complex) -> float:
    """f*(w) = sup_z (Re(z*w) - f(z)), exactly.  May be +inf."""
    w = complex(w)
    pieces = _collapsed_pieces(f)
    if not pieces:
        return support_function(f.domain, w)
    if len(pieces) == 1:
        b, c = pieces[0]
        return support_function(f.domain, w - b) - c
    hp = _domain_halfplanes(f.domain)
    objective = []
    for b, c in pieces:
        q = w - b
        objective.append((q.real, -q.imag, -c))
    val, _ = _lp.maximize_min_affine(objective, hp)
    if val == math.inf:
        return math.inf
    if val == -math.inf:
        raise ValueError("empty domain")
    return val


@dataclass(frozen=True)
class ConjugateForm:
    """Closed form f*(w) = h_base(w - shift) + offset.

    domain_cone is where the base set's support function is finite, so
    the conjugate's effective domain is shift + domain_cone and its
    interior is the shifted open cone.
    """

    base: object
    shift: complex
    offset: float
    domain_cone: Cone

    def __call__(self, w: complex) -> float:
        return support_function(self.base, complex(w) - self.shift) \
            + self.offset

    def domain_contains(self, w: complex, tol: float = 1e-9) -> bool:
        return self.domain_cone.contains(complex(w) - self.shift, tol)

    def domain_interior_contains(self, w: complex,
                                 margin: float = 0.0) -> bool:
        return self.domain_cone.strictly_contains(
            complex(w) - self.shift, margin)


def symbolic_conjugate(f: PLConvexFunction) -> ConjugateForm:
    """Closed-form conjugate for indicator or single-piece data.

    The conjugate's effective domain is shift + dom(h_base); the cone of
    the base set's support function is reported alongside.  Several
    distinct pieces have no closed form of this shape: rejected.
    """
    pieces = _collapsed_pieces(f)
    if len(pieces) > 1:
        raise UnsupportedConjugate(
            "no closed form with several distinct pieces")
    shift, offset = (pieces[0] if pieces else (0j, 0.0))
    cone = polar_cone(asymptotic_cone(f.domain))
    return ConjugateForm(f.domain, shift, -offset, cone)


def _epigraph_profile(gradients, rec):
    """Constraint directions and slopes cutting dom(f*)'s recession part.

    gradients: Euclidean gradients of the pieces.  rec: recession cone
    description of the domain.  Returns a list of (theta, sigma) with
    sigma the asymptotic slope max_i g_i . u(theta); the half-planes
    w_hat . u(theta) <= sigma(theta) carve dom(f*) exactly once crossing
    directions are included and no gap reaches pi.
    """
    def sigma(theta):
        ux, uy = math.cos(theta), math.sin(theta)
        return max(gx * ux + gy * uy for gx, gy in gradients)

    if rec[0] == "zero":
        return []
    if rec[0] == "line":
        return [(rec[1], sigma(rec[1])),
                (rec[1] + math.pi, sigma(rec[1] + math.pi))]
    if rec[0] == "full":
        lo, hi, cyclic = 0.0, TWO_PI, True
    else:
        _, lo, hi = rec
        cyclic = False
    dirs: list[float] = [] if cyclic else [lo, hi]
    n = len(gradients)
    for i in range(n):
        for j in range(i + 1, n):
            gx = gradients[i][0] - gradients[j][0]
            gy = gradients[i][1] - gradients[j][1]
            if math.hypot(gx, gy) <= 1e-14:
                continue
            base = math.atan2(gy, gx)
            for off in (0.5 * math.pi, 1.5 * math.pi):
                for k in (-1, 0, 1):
                    t = base + off + k * TWO_PI
                    if lo - 1e-12 <= t <= hi + 1e-12:
                        dirs.append(min(max(t, lo), hi))
    dirs.sort()
    out = list(dirs)
    # Fill gaps so no stretch of directions reaches pi/2; any filled
    # direction contributes a true (possibly redundant) constraint.
    if cyclic and not dirs:
        dirs = [lo]
        out = [lo]
    gaps = []
    m = len(dirs)
    for i in range(m if cyclic else m - 1):
        a = dirs[i]
        b = dirs[(i + 1) % m] + (TWO_PI if cyclic and i == m - 1 else 0.0)
        gaps.append((a, b))
    for a, b in gaps:
        width = b - a
        if width <= 0.0:
            continue
        k = int(math.ceil(width / (0.45 * math.pi)))
        for j in range(1, k):
            out.append(a + width * j / k)
    return [(t, sigma(t)) for t in out]


def conjugate(f: PLConvexFunction) -> PLConvexFunction:
    """The conjugate as a PLConvexFunction.

    Pieces come from the vertices of the epigraph of f (points where two
    independent kink or facet lines meet), the domain from its recession
    rays.  Raises UnsupportedConjugate when the data has no such
    description (rounded domain, or an epigraph without vertices).
    """
    pieces = _collapsed_pieces(f)
    if not pieces:
        # Indicator: conjugate is the support function.  It is PL exactly
        # when the domain is polyhedral.
        _domain_halfplanes(f.domain)  # rejects rounded domains
        if isinstance(f.domain, ConvexBody):
            return PLConvexFunction(
                [(v, 0.0) for v in f.domain.vertices],
                ConvexRegion([]))
        raise UnsupportedConjugate(
            "support functions of unbounded regions are handled by "
            "symbolic_conjugate")
    hp = _domain_halfplanes(f.domain)
    gradients = [(b.real, -b.imag) for b, _ in pieces]

    # Candidate kink points: pairwise intersections of piece bisectors
    # and domain facet lines, plus domain vertices, plus line anchors.
    lines: list[tuple[float, float, float]] = list(hp)
    n = len(pieces)
    for i in range(n):
        for j in range(i + 1, n):
            gx = gradients[i][0] - gradients[j][0]
            gy = gradients[i][1] - gradients[j][1]
            k = pieces[j][1] - pieces[i][1]
            norm = math.hypot(gx, gy)
            if norm <= 1e-14:
                continue
            lines.append((gx / norm, gy / norm, k / norm))
    scale = 1.0 + max(abs(d) for _, _, d in lines)
    slack = 1e-9 * scale
    cands: list[tuple[float, float]] = []
    nl = len(lines)
    for i in range(nl):
        for j in range(i + 1, nl):
            p = _lp._line_through(lines[i], lines[j], 1e-12)
            if p is not None and _lp._feasible(p, hp, slack):
                cands.append(p)
    for nx, ny, d in lines:
        p = (nx * d, ny * d)
        if _lp._feasible(p, hp, slack):
            cands.append(p)
    cands.sort()
    kept: list[tuple[float, float]] = []
    for p in cands:
        if not any(math.hypot(p[0] - q[0], p[1] - q[1]) <= slack
                   for q in kept):
            kept.append(p)
    if not kept:
        raise UnsupportedConjugate("epigraph has no usable vertex")

    dual_pieces = []
    for x, y in kept:
        z = complex(x, y)
        val = max((z * b).real + c for b, c in pieces)
        dual_pieces.append((z, -val))

    rec = _lp.recession_cone(hp)
    constraints = []
    seen_dirs: list[float] = []
    for theta, sig in _epigraph_profile(gradients, rec):
        if any(_lp.ang_dist(theta, t) <= 1e-12 for t in seen_dirs):
            continue
        seen_dirs.append(_lp._norm_angle(theta))
        # w_hat . u(theta) <= sigma in (u, -v) coordinates becomes the
        # half-plane (cos t, -sin t) . (u, v) <= sigma.
        constraints.append((math.cos(theta), -math.sin(theta), sig))
    dual_domain = ConvexRegion(constraints)
    return PLConvexFunction(dual_pieces, dual_domain)


@dataclass(frozen=True)
class LegendreDimensions:
    """Real affine-hull dimensions of dom(f) and dom(f*), and the
    defect 2 - dim dom(f*): the dimension of the direction space the
    conjugate never explores."""

    domain_hull: int
    conjugate_hull: int

    @property
    def defect(self) -> int:
        return 2 - self.conjugate_hull

    @property
    def complement_trivial(self) -> bool:
        return self.defect == 0


def _sum_with_cone_dim(f: PLConvexFunction, pieces) -> int:
    """dim of dom(f*) = conv{b_i} + dom(h_domain).

    Writing f as (max of pieces) + (indicator of domain), the conjugate
    is an infimal convolution, so its domain is the Minkowski sum of the
    gradient hull with the domain's support cone.
    """
    cone = polar_cone(asymptotic_cone(f.domain))
    cdim = affine_dimension(cone)
    if cdim == 2:
        return 2
    bs = [b for b, _ in pieces]
    dirs: list[complex] = []
    for b in bs[1:]:
        d = b - bs[0]
        if abs(d) > 1e-12 * (1.0 + abs(bs[0])):
            dirs.append(d / abs(d))
    hull_dim = 0
    if dirs:
        hull_dim = 1
        if any(abs((d1 * d2.conjugate()).imag) > 1e-9
               for d1 in dirs for d2 in dirs):
            hull_dim = 2
    if hull_dim == 2:
        return 2
    if cdim == 0:
        return hull_dim
    if hull_dim == 0:
        return cdim
    # A 1-D hull plus a ray or line: flat only when parallel.
    axis = complex(math.cos(cone.axis), math.sin(cone.axis))
    parallel = abs((dirs[0] * axis.conjugate()).imag) <= 1e-9
    return 1 if parallel else 2


def legendre_dimensions(f: PLConvexFunction) -> LegendreDimensions:
    """dim of the affine hulls of dom(f) and dom(f*)."""
    dom_dim = affine_dimension(f.domain)
    pieces = _collapsed_pieces(f)
    if len(pieces) <= 1:
        cone = polar_cone(asymptotic_cone(f.domain))
        conj_dim = affine_dimension(cone)
    else:
        try:
            conj_dim = affine_dimension(conjugate(f).domain)
        except UnsupportedConjugate:
            conj_dim = _sum_with_cone_dim(f, pieces)
    return LegendreDimensions(dom_dim, conj_dim)
