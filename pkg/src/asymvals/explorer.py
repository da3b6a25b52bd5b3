"""Floating-point exploration of polynomial pair maps.

Everything here is deterministic for a fixed spec: grids are generated
row-major, Newton multistart walks seeds in grid order, and reductions
preserve that order, so repeated runs emit byte-identical reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotBivariate
from .poly import Poly


@dataclass(frozen=True)
class PairMap:
    """The plane map (x, y) -> (p(x, y), q(x, y))."""

    p: Poly
    q: Poly
    u_label: str = "u"
    v_label: str = "v"

    def __post_init__(self):
        names = sorted(self.p.variables() | self.q.variables())
        if len(names) > 2:
            raise NotBivariate(f"pair map uses too many variables: {names}")
        for comp in (self.p, self.q):
            if not comp.has_integer_exponents() or not all(
                e >= 0 for key, _ in comp.terms() for _, e in key
            ):
                raise NotBivariate("pair components must be plain polynomials")

    def variables(self) -> tuple[str, str]:
        names = sorted(self.p.variables() | self.q.variables())
        while len(names) < 2:
            names.append("_" + "y" * (len(names) + 1))
        return names[0], names[1]

    def apply(self, x: float, y: float) -> tuple[float, float]:
        xv, yv = self.variables()
        binding = {xv: x, yv: y}
        return self.p.evaluate_float(binding), self.q.evaluate_float(binding)


@dataclass(frozen=True)
class GridSpec:
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Fraction
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx <= 0 or self.ny <= 0:
            raise ValueError("grid dimensions must be positive")
        if self.nx * self.ny > 10**8:
            raise ValueError("grid too large (nx*ny > 1e8)")
        if self.x_lo >= self.x_hi or self.y_lo >= self.y_hi:
            raise ValueError("grid ranges must be nondegenerate")

    def nodes(self):
        """Row-major (x, y) float nodes, inclusive of both endpoints."""
        for j in range(self.ny):
            y = self.y_lo + (self.y_hi - self.y_lo) * Fraction(j, max(self.ny - 1, 1))
            for i in range(self.nx):
                x = self.x_lo + (self.x_hi - self.x_lo) * Fraction(i, max(self.nx - 1, 1))
                yield float(x), float(y)

    @staticmethod
    def parse(text: str) -> "GridSpec":
        parts = text.split(",")
        if len(parts) != 6:
            raise ValueError("grid spec needs x0,x1,y0,y1,nx,ny")
        x0, x1, y0, y1 = (Fraction(p) for p in parts[:4])
        return GridSpec(x0, x1, y0, y1, int(parts[4]), int(parts[5]))


def jacobian_det(m: PairMap) -> Poly:
    """Exact Jacobian determinant of the pair map."""
    xv, yv = m.variables()
    return (
        m.p.derivative(xv) * m.q.derivative(yv)
        - m.p.derivative(yv) * m.q.derivative(xv)
    )


def sample_image(m: PairMap, grid: GridSpec) -> list[tuple[float, float, float, float, int]]:
    """Rows (x, y, u, v, det_sign) over the grid, row-major order."""
    det = jacobian_det(m)
    xv, yv = m.variables()
    rows = []
    for x, y in grid.nodes():
        u, v = m.apply(x, y)
        d = det.evaluate_float({xv: x, yv: y})
        sign = 0 if d == 0 else (1 if d > 0 else -1)
        rows.append((x, y, u, v, sign))
    return rows


def rows_to_csv(rows) -> str:
    lines = ["x,y,u,v,det_sign"]
    for x, y, u, v, s in rows:
        lines.append(f"{x!r},{y!r},{u!r},{v!r},{s}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PreimageResult:
    count: int
    points: tuple[tuple[float, float], ...]
    singular_seeds: int
    diverged_seeds: int


def preimage_count(
    m: PairMap,
    target: tuple[float, float],
    seeds: GridSpec,
    tol: float = 1e-10,
) -> PreimageResult:
    """Damped-Newton multistart count of distinct preimages of target."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    xv, yv = m.variables()
    px, py = m.p.derivative(xv), m.p.derivative(yv)
    qx, qy = m.q.derivative(xv), m.q.derivative(yv)
    tu, tv = target

    def residual(x: float, y: float) -> tuple[float, float, float]:
        u, v = m.apply(x, y)
        ru, rv = u - tu, v - tv
        return ru, rv, (ru * ru + rv * rv) ** 0.5

    found: list[tuple[float, float]] = []
    singular = 0
    diverged = 0
    for sx, sy in seeds.nodes():
        x, y = sx, sy
        ru, rv, norm = residual(x, y)
        hit_singular = False
        # Run the full budget: once the residual passes tol the root may
        # still be multiple, and extra polishing tightens the point itself
        # until the 10*tol dedup radius is meaningful.
        for _ in range(100):
            if norm == 0.0:
                break
            b = {xv: x, yv: y}
            a11, a12 = px.evaluate_float(b), py.evaluate_float(b)
            a21, a22 = qx.evaluate_float(b), qy.evaluate_float(b)
            det = a11 * a22 - a12 * a21
            if det == 0 or abs(det) < 1e-300:
                if norm >= tol:
                    hit_singular = True
                break
            dx = (ru * a22 - rv * a12) / det
            dy = (rv * a11 - ru * a21) / det
            step = 1.0
            while step >= 2.0**-30:
                nx_, ny_ = x - step * dx, y - step * dy
                nru, nrv, nnorm = residual(nx_, ny_)
                if nnorm < norm:
                    x, y, ru, rv, norm = nx_, ny_, nru, nrv, nnorm
                    break
                step *= 0.5
            else:
                break
        if hit_singular:
            singular += 1
            continue
        if norm >= tol:
            diverged += 1
            continue
        radius = 10.0 * tol
        if not any((x - fx) ** 2 + (y - fy) ** 2 <= radius * radius for fx, fy in found):
            found.append((x, y))
    found_sorted = tuple(sorted(found))
    return PreimageResult(len(found_sorted), found_sorted, singular, diverged)


@dataclass(frozen=True)
class ComplementReport:
    window: GridSpec
    rounds: int
    covered: int
    uncovered: tuple[tuple[float, float, int], ...]  # (u_center, v_center, depth)

    def to_dict(self) -> dict:
        return {
            "resolution": [self.window.nx, self.window.ny],
            "rounds": self.rounds,
            "covered_cells": self.covered,
            "uncovered_cells": [
                {"u": u, "v": v, "depth": d} for u, v, d in self.uncovered
            ],
        }


def complement_scan(
    m: PairMap,
    domain: GridSpec,
    window: GridSpec,
    rounds: int = 2,
) -> ComplementReport:
    """Raster the image window and report cells no sample ever lands in.

    Each round quadruples the domain sampling density (doubling both
    dimensions) around the preimage candidates for still-uncovered cells:
    domain nodes whose image lies within one cell of an uncovered cell get a
    refined 3x3 neighborhood at the next half step.  Honest by construction:
    surviving cells are complement candidates, never a certified complement.
    """
    if rounds > 6:
        raise ValueError("rounds capped at 6")
    width = (window.x_hi - window.x_lo) / window.nx
    height = (window.y_hi - window.y_lo) / window.ny

    def cell_of(u: float, v: float) -> tuple[int, int] | None:
        iu = (Fraction(u) - window.x_lo) / width
        iv = (Fraction(v) - window.y_lo) / height
        i, j = int(iu), int(iv)
        if 0 <= iu and i < window.nx and 0 <= iv and j < window.ny:
            return i, j
        return None

    hit: set[tuple[int, int]] = set()
    samples: list[tuple[float, float]] = []
    images: list[tuple[float, float]] = []
    for x, y in domain.nodes():
        u, v = m.apply(x, y)
        samples.append((x, y))
        images.append((u, v))
        cell = cell_of(u, v)
        if cell:
            hit.add(cell)

    depth_done = 0
    dx = float(domain.x_hi - domain.x_lo) / max(domain.nx - 1, 1)
    dy = float(domain.y_hi - domain.y_lo) / max(domain.ny - 1, 1)
    for depth in range(1, rounds + 1):
        uncovered = _uncovered_cells(window, hit)
        if not uncovered:
            depth_done = depth - 1
            break
        near: list[tuple[float, float]] = []
        uncovered_set = set(uncovered)
        for (x, y), (u, v) in zip(samples, images):
            cu = (Fraction(u) - window.x_lo) / width
            cv = (Fraction(v) - window.y_lo) / height
            ci, cj = int(cu), int(cv)
            if any(
                (ci + di, cj + dj) in uncovered_set
                for di in (-1, 0, 1)
                for dj in (-1, 0, 1)
            ):
                near.append((x, y))
        step_x = dx / (2**depth)
        step_y = dy / (2**depth)
        new_samples = []
        for x, y in near:
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    if di == 0 and dj == 0:
                        continue
                    new_samples.append((x + di * step_x, y + dj * step_y))
        for x, y in new_samples:
            u, v = m.apply(x, y)
            samples.append((x, y))
            images.append((u, v))
            cell = cell_of(u, v)
            if cell:
                hit.add(cell)
        depth_done = depth

    uncovered = _uncovered_cells(window, hit)
    centers = tuple(
        (
            float(window.x_lo + width * Fraction(2 * i + 1, 2)),
            float(window.y_lo + height * Fraction(2 * j + 1, 2)),
            depth_done,
        )
        for i, j in uncovered
    )
    return ComplementReport(window, depth_done, window.nx * window.ny - len(uncovered), centers)


def _uncovered_cells(window: GridSpec, hit: set[tuple[int, int]]):
    return [
        (i, j)
        for j in range(window.ny)
        for i in range(window.nx)
        if (i, j) not in hit
    ]


# -- SVG emission -----------------------------------------------------------

_CANVAS = 1024


def scatter_svg(points: list[tuple[float, float]], stroke: str = "black") -> str:
    """Fixed-size scatter plot of (u, v) points, linear axes."""
    if points:
        us = [p[0] for p in points]
        vs = [p[1] for p in points]
        ulo, uhi = min(us), max(us)
        vlo, vhi = min(vs), max(vs)
    else:
        ulo = vlo = 0.0
        uhi = vhi = 1.0
    du = (uhi - ulo) or 1.0
    dv = (vhi - vlo) or 1.0
    margin = 32.0
    scale = _CANVAS - 2 * margin

    def map_point(u: float, v: float) -> tuple[float, float]:
        px = margin + (u - ulo) / du * scale
        py = _CANVAS - margin - (v - vlo) / dv * scale
        return px, py

    body = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_CANVAS}" '
        f'height="{_CANVAS}" viewBox="0 0 {_CANVAS} {_CANVAS}">',
        f'<rect width="{_CANVAS}" height="{_CANVAS}" fill="white"/>',
    ]
    for u, v in points:
        px, py = map_point(u, v)
        body.append(
            f'<circle cx="{px:.3f}" cy="{py:.3f}" r="2" fill="none" '
            f'stroke="{stroke}"/>'
        )
    body.append("</svg>")
    return "\n".join(body) + "\n"


def heatmap_svg(
    grid: GridSpec, values: list[float], stroke: str = "black"
) -> str:
    """Grayscale cell map of scalar values over the grid, linear scale."""
    lo = min(values) if values else 0.0
    hi = max(values) if values else 1.0
    span = (hi - lo) or 1.0
    cell_w = _CANVAS / grid.nx
    cell_h = _CANVAS / grid.ny
    body = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_CANVAS}" '
        f'height="{_CANVAS}" viewBox="0 0 {_CANVAS} {_CANVAS}">'
    ]
    idx = 0
    for j in range(grid.ny):
        for i in range(grid.nx):
            level = round(255 - (values[idx] - lo) / span * 255)
            idx += 1
            body.append(
                f'<rect x="{i * cell_w:.3f}" y="{_CANVAS - (j + 1) * cell_h:.3f}" '
                f'width="{cell_w:.3f}" height="{cell_h:.3f}" '
                f'fill="rgb({level},{level},{level})" stroke="{stroke}" '
                f'stroke-width="0"/>'
            )
    body.append("</svg>")
    return "\n".join(body) + "\n"
