"""Field serialization: CSV (``x,p,re,im``) and PGM previews."""

import numpy as np

from .phase_space import PhaseField, PhaseSpaceGrid


def fmt(v):
    """17 significant digits, ``inf``/``nan`` spelled literally."""
    v = float(v)
    if v != v:
        return "nan"
    if v in (float("inf"), float("-inf")):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def write_field_csv(field, path, meta=None):
    """Row-major samples; grid metadata goes in leading ``#`` lines."""
    grid = field.grid
    x, p = grid.mesh()
    lines = [f"# L={fmt(grid.half_extent)}", f"# N={grid.n_points}", f"# kind={field.kind}"]
    for key, value in (meta or {}).items():
        lines.append(f"# {key}={value}")
    lines.append("x,p,re,im")
    v = field.values
    for xs, ps, re, im in zip(x.ravel(), p.ravel(), v.real.ravel(), v.imag.ravel()):
        lines.append(f"{fmt(xs)},{fmt(ps)},{fmt(re)},{fmt(im)}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_field_csv(path):
    """Inverse of :func:`write_field_csv`; the grid is rebuilt from the metadata."""
    meta = {}
    skip = 0
    with open(path) as fh:
        for line in fh:
            skip += 1
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value.strip()
    if "L" not in meta or "N" not in meta:
        raise ValueError(f"{path}: missing '# L=' / '# N=' grid metadata")
    grid = PhaseSpaceGrid(float(meta["L"]), int(meta["N"]))
    rows = np.loadtxt(path, delimiter=",", skiprows=skip, ndmin=2)
    n = grid.n_points
    if rows.shape[0] != n * n:
        raise ValueError(f"{path}: expected {n * n} samples, found {rows.shape[0]}")
    values = (rows[:, 2] + 1j * rows[:, 3]).reshape(n, n)
    kind = meta.get("kind", "derived")
    return PhaseField(grid, values, kind if kind in ("wigner", "husimi", "cross_wigner", "fourier") else "derived")


def write_pgm(field, path):
    """Plain (P2) graymap of ``|values|``, x along columns and p increasing upward."""
    mag = np.abs(field.values).T[::-1]
    top = mag.max()
    img = np.zeros(mag.shape, dtype=int) if top == 0 else np.rint(255 * mag / top).astype(int)
    h, w = img.shape
    with open(path, "w", newline="") as fh:
        fh.write(f"P2\n{w} {h}\n255\n")
        for row in img:
            fh.write(" ".join(map(str, row)) + "\n")
