"""Tile figures: the values of all strings of degree <= d as lattice points, images of their
translates by the fundamental cell, and the rescaled sets X^-d (sigma(strings) + F)."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
from PIL import Image

from .catalog import get_binding
from .digits import alphabet
from .embed import SystemBinding
from .helpers import InvalidSystem, RenderIoError, TooLarge, count_str
from .ring import OrderSpec

logger = logging.getLogger(__name__)

POINT_LIMIT = 2**24
RESOLUTION_LIMIT = 8192
COORDINATE_LIMIT = 2**62

EMPTY = -1
UNSET = np.iinfo(np.int16).max

# Degree shell k is painted SHELL_COLOURS[k % len(SHELL_COLOURS)].
SHELL_COLOURS = np.array(
    [
        (0, 0, 0),
        (31, 119, 180),
        (255, 127, 14),
        (44, 160, 44),
        (214, 39, 40),
        (148, 103, 189),
        (140, 86, 75),
        (227, 119, 194),
        (127, 127, 127),
        (188, 189, 34),
        (23, 190, 207),
    ],
    dtype=np.uint8,
)


def _order(bind: SystemBinding, imaginary: bool = False) -> OrderSpec:
    if not isinstance(bind.order, OrderSpec):
        raise InvalidSystem(f"System '{bind.name}' is realized in {bind.order}; it has no lattice to draw.")
    if imaginary and not bind.order.is_imaginary():
        raise InvalidSystem(f"System '{bind.name}' needs an imaginary quadratic order for this figure.")
    return bind.order


def point_count(bind: SystemBinding, d: int) -> int:
    return (bind.n + 1) ** (d + 1)


def lattice_points(bind: SystemBinding, d: int) -> np.ndarray:
    """Exact (a, b) coordinates, in the basis (1, w), of sigma(s) for every s of degree <= d.
    Row i spells the string whose base-(n+1) digits of i are the digit indices, position 0 lowest."""
    _order(bind)
    count = point_count(bind, d)
    if count > POINT_LIMIT:
        raise TooLarge(f"Degree {d} in system '{bind.name}' gives {count_str(count)} points; the limit is {POINT_LIMIT}.")
    digit_values = [bind.iota(alpha) for alpha in alphabet(bind.n)]
    points = np.zeros((1, 2), dtype=np.int64)
    power = bind.order.one()
    for _ in range(d + 1):
        terms = [v * power for v in digit_values]
        if any(max(abs(t.a), abs(t.b)) > COORDINATE_LIMIT // (d + 2) for t in terms):
            raise TooLarge(f"Degree {d} in system '{bind.name}' overflows 64-bit lattice coordinates.")
        contributions = np.array([[t.a, t.b] for t in terms], dtype=np.int64)
        points = (contributions[:, None, :] + points[None, :, :]).reshape(-1, 2)
        power = power * bind.x
    return points


def to_complex(points: np.ndarray, order: OrderSpec) -> np.ndarray:
    return points[:, 0].astype(np.float64) + points[:, 1].astype(np.float64) * order.omega_value


def tile_points(bind: SystemBinding, d: int) -> np.ndarray:
    """Complex values of every string of degree <= d; exact coordinates are converted last."""
    return to_complex(lattice_points(bind, d), _order(bind))


def z_n_set(bind: SystemBinding, d: int) -> np.ndarray:
    """tile_points() scaled by X^-d.  The swept cells are drawn by translate_image(rescale=True)."""
    scale = bind.x.complex() ** d
    return tile_points(bind, d) / scale


def point_degrees(bind: SystemBinding, d: int) -> np.ndarray:
    """Degree shell of each row of lattice_points(): row i has degree k when (n+1)^k <= i < (n+1)^(k+1).
    The empty string shares shell 0 with the one-digit strings."""
    base = bind.n + 1
    degrees = np.zeros(point_count(bind, d), dtype=np.int16)
    for k in range(1, d + 1):
        degrees[base**k :] = k
    return degrees


@dataclass(frozen=True)
class Viewport:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    @staticmethod
    def around(points: np.ndarray, margin: float = 0.05) -> Viewport:
        """Bounding box of complex points with a relative margin, squared up to equal extents."""
        if points.size == 0:
            return Viewport(-1.0, 1.0, -1.0, 1.0)
        re_lo, re_hi = float(points.real.min()), float(points.real.max())
        im_lo, im_hi = float(points.imag.min()), float(points.imag.max())
        half = max(re_hi - re_lo, im_hi - im_lo, 1.0) * (0.5 + margin)
        re_c, im_c = (re_lo + re_hi) / 2, (im_lo + im_hi) / 2
        return Viewport(re_c - half, re_c + half, im_c - half, im_c + half)

    def pixel_centres(self, width: int, height: int) -> np.ndarray:
        re = self.re_min + (np.arange(width) + 0.5) * (self.re_max - self.re_min) / width
        im = self.im_max - (np.arange(height) + 0.5) * (self.im_max - self.im_min) / height
        return re[None, :] + 1j * im[:, None]


@dataclass
class TileImage:
    """degrees holds the smallest degree shell landing on each pixel, EMPTY where nothing does."""

    width: int
    height: int
    viewport: Viewport
    degrees: np.ndarray
    system: str = ""
    degree: int = 0
    point_count: int = 0
    clipped: int = 0

    @property
    def pixels(self) -> np.ndarray:
        return self.degrees >= 0

    def occupied(self) -> int:
        return int(np.count_nonzero(self.pixels))

    def shell_counts(self) -> Dict[int, int]:
        shells, counts = np.unique(self.degrees[self.pixels], return_counts=True)
        return {int(k): int(c) for k, c in zip(shells, counts)}

    def meta(self) -> dict:
        return {
            "system": self.system,
            "degree": self.degree,
            "points": self.point_count,
            "clipped": self.clipped,
            "width": self.width,
            "height": self.height,
            "viewport": [self.viewport.re_min, self.viewport.re_max, self.viewport.im_min, self.viewport.im_max],
            "shells": {str(k): c for k, c in self.shell_counts().items()},
        }


def _check_resolution(width: int, height: int):
    if width < 1 or height < 1 or width > RESOLUTION_LIMIT or height > RESOLUTION_LIMIT:
        raise TooLarge(f"Resolution {width}x{height} is outside 1..{RESOLUTION_LIMIT} per side.")


def rasterize(
    points: np.ndarray,
    viewport: Viewport,
    width: int,
    height: int,
    system: str = "",
    degree: int = 0,
    degrees: Optional[np.ndarray] = None,
) -> TileImage:
    """Bin complex points into a width x height grid keeping the smallest degree per pixel; points
    outside are counted as clipped.  Without degrees every point is in shell 0."""
    _check_resolution(width, height)
    points = np.asarray(points, dtype=np.complex128)
    shells = np.zeros(points.size, dtype=np.int16) if degrees is None else np.asarray(degrees, dtype=np.int16)
    if shells.shape != points.shape:
        raise ValueError(f"Got {shells.size} degrees for {points.size} points.")
    col = np.floor((points.real - viewport.re_min) / (viewport.re_max - viewport.re_min) * width).astype(np.int64)
    row = np.floor((viewport.im_max - points.imag) / (viewport.im_max - viewport.im_min) * height).astype(np.int64)
    inside = (col >= 0) & (col < width) & (row >= 0) & (row < height)
    grid = np.full((height, width), UNSET, dtype=np.int16)
    np.minimum.at(grid, (row[inside], col[inside]), shells[inside])
    grid[grid == UNSET] = EMPTY
    clipped = int(points.size - np.count_nonzero(inside))
    return TileImage(width, height, viewport, grid, system, degree, int(points.size), clipped)


def _keys(points: np.ndarray, span: int) -> np.ndarray:
    return points[:, 0] * span + points[:, 1]


def translate_image(
    bind: SystemBinding,
    d: int,
    viewport: Optional[Viewport] = None,
    width: int = 512,
    height: int = 512,
    rescale: bool = False,
) -> TileImage:
    """Raster of the union of p + F over p = sigma(s), deg s <= d, with F the cell spanned by 1 and w.
    A pixel is set when the cell holding its centre (after multiplying by X^d if rescaled) is one
    of the p, and carries the degree of that p."""
    order = _order(bind, imaginary=True)
    _check_resolution(width, height)
    points = lattice_points(bind, d)
    scale = bind.x.complex() ** d if rescale else 1.0
    if viewport is None:
        corners = to_complex(points, order)
        corners = np.concatenate([corners, corners + 1 + order.omega_value])
        viewport = Viewport.around(corners / scale)
    w = viewport.pixel_centres(width, height) * scale
    omega = order.omega_value
    t_exact = w.imag / omega.imag
    s = np.floor(w.real - t_exact * omega.real)
    t = np.floor(t_exact)
    span = int(np.abs(points).max()) * 2 + 3 if points.size else 3
    reach = (np.abs(s) < span // 2) & (np.abs(t) < span // 2)
    cell_keys = s.astype(np.int64) * span + t.astype(np.int64)
    keys = _keys(points, span)
    order_of_keys = np.argsort(keys, kind="stable")
    sorted_keys = keys[order_of_keys]
    slot = np.clip(np.searchsorted(sorted_keys, cell_keys), 0, len(sorted_keys) - 1)
    hit = (sorted_keys[slot] == cell_keys) & reach
    grid = np.where(hit, point_degrees(bind, d)[order_of_keys[slot]], EMPTY).astype(np.int16)
    return TileImage(width, height, viewport, grid, bind.name, d, len(points), 0)


def cell_reach(order: OrderSpec) -> float:
    """Largest distance from the corner 0 of the cell F to any point of F."""
    omega = order.omega_value
    return max(1.0, abs(omega), abs(1 + omega))


def inner_radius(bind: SystemBinding, d: int) -> float:
    """Smallest |z| over lattice points z that are not sigma of a string of degree <= d."""
    order = _order(bind, imaginary=True)
    points = lattice_points(bind, d)
    lo = points.min(axis=0) - 1
    hi = points.max(axis=0) + 1
    a, b = np.meshgrid(np.arange(lo[0], hi[0] + 1), np.arange(lo[1], hi[1] + 1), indexing="ij")
    grid = np.stack([a.ravel(), b.ravel()], axis=1)
    span = int(np.abs(grid).max()) * 2 + 3
    missing = grid[~np.isin(_keys(grid, span), _keys(points, span))]
    return float(np.abs(to_complex(missing, order)).min())


def guaranteed_disk(bind: SystemBinding, d: int, rescale: bool = True) -> float:
    """Radius of a disk about 0 that translate_image() must cover: every pixel centre w with
    |w X^d| < inner_radius - cell_reach falls in a cell whose corner is a sigma value."""
    radius = inner_radius(bind, d) - cell_reach(_order(bind))
    if rescale:
        radius /= abs(bind.x.complex()) ** d
    return radius


def covers_disk(image: TileImage, center: complex, radius: float) -> bool:
    """True when every pixel whose centre lies within radius of center is set."""
    centres = image.viewport.pixel_centres(image.width, image.height)
    inside = np.abs(centres - center) < radius
    return bool(np.all(image.pixels[inside]))


def raster_difference(a: TileImage, b: TileImage) -> float:
    """Area fraction of the symmetric difference of two rasters on the same grid."""
    if a.pixels.shape != b.pixels.shape or a.viewport != b.viewport:
        raise ValueError("Raster difference needs images on the same grid.")
    return float(np.count_nonzero(a.pixels ^ b.pixels)) / a.pixels.size


def _rgb(image: TileImage) -> np.ndarray:
    rgb = np.full((image.height, image.width, 3), 255, dtype=np.uint8)
    occupied = image.pixels
    rgb[occupied] = shell_colour(image.degrees[occupied])
    return rgb


def shell_colour(shells: np.ndarray) -> np.ndarray:
    return SHELL_COLOURS[np.asarray(shells) % len(SHELL_COLOURS)]


def _hex(shell: int) -> str:
    r, g, b = (int(v) for v in shell_colour(np.array([shell]))[0])
    return f"#{r:02x}{g:02x}{b:02x}"


def write_ppm(image: TileImage, path: Path):
    """Binary portable pixmap (P6)."""
    try:
        Image.fromarray(_rgb(image)).save(str(path), format="PPM")
    except OSError as ex:
        raise RenderIoError(f"Unable to write pixmap '{path}':\n{ex}") from ex


def write_png(image: TileImage, path: Path):
    try:
        Image.fromarray(_rgb(image)).save(str(path), format="PNG")
    except OSError as ex:
        raise RenderIoError(f"Unable to write image '{path}':\n{ex}") from ex


def svg_text(image: TileImage) -> str:
    """Occupied pixels as horizontal runs of rects of one degree shell, filled with the shell colour."""
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{image.width}" height="{image.height}"'
        f' viewBox="0 0 {image.width} {image.height}" shape-rendering="crispEdges">',
        f"<!-- {image.system} degree {image.degree}, {image.point_count} points -->",
        f'<rect width="{image.width}" height="{image.height}" fill="white"/>',
    ]
    for row in range(image.height):
        line = image.degrees[row]
        if not (line >= 0).any():
            continue
        edges = np.concatenate([[0], np.flatnonzero(np.diff(line)) + 1, [image.width]])
        for start, stop in zip(edges[:-1], edges[1:]):
            shell = int(line[start])
            if shell == EMPTY:
                continue
            lines.append(f'<rect x="{start}" y="{row}" width="{stop - start}" height="1" fill="{_hex(shell)}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(image: TileImage, path: Path):
    try:
        with open(path, "wt") as fh:
            fh.write(svg_text(image))
    except OSError as ex:
        raise RenderIoError(f"Unable to write SVG '{path}':\n{ex}") from ex


def save_image(image: TileImage, path: Path):
    suffix = Path(path).suffix.lower()
    if suffix == ".svg":
        write_svg(image, path)
    elif suffix == ".png":
        write_png(image, path)
    elif suffix in (".ppm", ".pnm"):
        write_ppm(image, path)
    else:
        raise RenderIoError(f"Unknown image format '{suffix}' for '{path}'; use .ppm, .png or .svg.")
    logger.info(f"Wrote {image.width}x{image.height} image of {count_str(image.point_count)} points to: {path}")


def render_tile(
    bind: SystemBinding,
    d: int,
    size: int = 512,
    domain: bool = False,
    rescale: bool = False,
) -> Tuple[TileImage, np.ndarray]:
    """The figure behind the tile subcommand: a point cloud, or with domain=True the swept cells."""
    if domain:
        image = translate_image(bind, d, None, size, size, rescale=rescale)
        return image, np.empty(0, dtype=np.complex128)
    points = z_n_set(bind, d) if rescale else tile_points(bind, d)
    image = rasterize(points, Viewport.around(points), size, size, bind.name, d, point_degrees(bind, d))
    return image, points


@dataclass(frozen=True)
class FigurePreset:
    name: str
    system: str
    degree: int
    domain: bool = False
    rescale: bool = False
    caption: str = ""

    @property
    def points(self) -> int:
        return point_count(get_binding(self.system), self.degree)


FIGURES: Tuple[FigurePreset, ...] = (
    FigurePreset("gaussian-12", "gaussian", 12, caption="Gaussian integers as strings of degree <= 12, base -1+i"),
    FigurePreset(
        "sqrt-7-cells-11", "sqrt-7", 11, domain=True, caption="translates of the cell by strings of degree <= 11"
    ),
    *(
        FigurePreset(
            f"sqrt-11-cells-{d}", "sqrt-11", d, domain=True, caption=f"Z[(1+sqrt-11)/2], new cells of degree {d}"
        )
        for d in (0, 1, 2, 3, 4, 7)
    ),
    FigurePreset("one-plus-sqrt-2-9", "one-plus-sqrt-2", 9, caption="Z[sqrt-2] in base 1+sqrt-2, degree <= 9"),
    FigurePreset("mu3-7", "mu3", 7, caption="Eisenstein integers over mu_3 in base -2, degree <= 7"),
    FigurePreset("mu4-4", "mu4", 4, caption="Gaussian integers over mu_4 in base 1+2i, degree <= 4"),
    FigurePreset("mu6-cells-2", "mu6", 2, domain=True, caption="Eisenstein integers over mu_6 in base 2-j, 343 cells"),
)


def figure_preset(name: str) -> FigurePreset:
    for preset in FIGURES:
        if preset.name == name:
            return preset
    raise InvalidSystem(f"Unknown figure '{name}'.  Known figures: {', '.join(p.name for p in FIGURES)}")


def render_figure(preset: FigurePreset, size: int = 512) -> TileImage:
    bind = get_binding(preset.system)
    logger.debug(f"Rendering figure {preset.name}: {preset.caption}")
    image, _ = render_tile(bind, preset.degree, size=size, domain=preset.domain, rescale=preset.rescale)
    return image
