"""Sampling the real part of a null curve into a quad mesh.

Curve components are null-basis coordinates; the map to Euclidean
coordinates uses e~_j = (e_j + i e_jbar)/sqrt(2), e~_jbar = (e_j - i e_jbar)/sqrt(2)
for j < jbar and e~_j = e_j on the middle index. This is the only place where
floating point and sqrt(2) enter.

Quality metrics are central differences on the sample grid, so they are
second order in the grid step:

* conformality: |<S_x,S_x> - <S_y,S_y>| and |<S_x,S_y>|, each divided by the
  local conformal factor (|S_x|^2 + |S_y|^2) / 2
* harmonicity: |S_xx + S_yy| / (|S_xx| + |S_yy|), with the five-point Laplacian
  against the sum of one-dimensional second differences.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyGrid


def euclidean_frame(n):
    """Matrix U whose columns are the null basis vectors in standard coordinates."""
    U = np.zeros((n, n), dtype=complex)
    s = 1 / np.sqrt(2)
    for j in range(n):
        jb = n - 1 - j
        if j < jb:
            U[j, j], U[jb, j] = s, 1j * s
        elif j > jb:
            U[jb, j], U[j, j] = s, -1j * s
        else:
            U[j, j] = 1.0
    return U


def _rf_arrays(f):
    num = np.array([complex(c) for c in reversed(f.num.coeffs)] or [0j])
    den = np.array([complex(c) for c in reversed(f.den.coeffs)])
    return num, den


def evaluate_curve(components, Z, pole_tol=1e-9):
    """Complex values of each component on the array Z, NaN near poles."""
    out = []
    bad = np.zeros(Z.shape, dtype=bool)
    for f in components:
        num, den = _rf_arrays(f)
        d = np.polyval(den, Z)
        scale = np.polyval(np.abs(den), np.abs(Z))
        near = np.abs(d) <= pole_tol * np.maximum(scale, 1.0)
        bad |= near
        with np.errstate(divide="ignore", invalid="ignore"):
            out.append(np.polyval(num, Z) / d)
    vals = np.stack(out, axis=-1)
    vals[bad] = np.nan
    return vals


@dataclass
class MeshOutput:
    vertices: np.ndarray          # (N, d) real coordinates, d = 3 or 4
    faces: list                   # 1-based quads in grid order
    metadata: dict = field(default_factory=dict)

    def obj_text(self):
        lines = ["# minimal surface sampled from a null curve"]
        for v in self.vertices:
            lines.append("v " + " ".join(f"{x:.12g}" for x in v[:3]))
        for f in self.faces:
            lines.append("f " + " ".join(str(k) for k in f))
        return "\n".join(lines) + "\n"

    def csv_text(self):
        d = self.vertices.shape[1]
        header = ",".join(f"x{k + 1}" for k in range(d))
        rows = [",".join(f"{x:.12g}" for x in v) for v in self.vertices]
        return header + "\n" + "\n".join(rows) + "\n"


def _stats(values):
    values = values[np.isfinite(values)]
    if values.size == 0:
        return {"max": None, "mean": None, "count": 0}
    return {"max": float(values.max()), "mean": float(values.mean()), "count": int(values.size)}


def surface_residuals(S, hx, hy):
    """Relative conformality and harmonicity residuals at interior grid points.

    S has shape (ny, nx, d) with x varying along axis 1.
    """
    c = S[1:-1, 1:-1]
    Sx = (S[1:-1, 2:] - S[1:-1, :-2]) / (2 * hx)
    Sy = (S[2:, 1:-1] - S[:-2, 1:-1]) / (2 * hy)
    Sxx = (S[1:-1, 2:] - 2 * c + S[1:-1, :-2]) / hx**2
    Syy = (S[2:, 1:-1] - 2 * c + S[:-2, 1:-1]) / hy**2
    E = np.sum(Sx * Sx, axis=-1)
    G = np.sum(Sy * Sy, axis=-1)
    F = np.sum(Sx * Sy, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = (E + G) / 2
        stretch = np.abs(E - G) / scale
        shear = np.abs(F) / scale
        lap = np.linalg.norm(Sxx + Syy, axis=-1) / (
            np.linalg.norm(Sxx, axis=-1) + np.linalg.norm(Syy, axis=-1))
    return stretch, shear, lap


def sample_mesh(components, bounds=(-1.0, 1.0, -1.0, 1.0), resolution=64, pole_tol=1e-9):
    """Vertices Re(U chi(z)) on a resolution x resolution grid, with quad faces."""
    if resolution < 3:
        raise ValueError("resolution must be at least 3")
    x0, x1, y0, y1 = (float(b) for b in bounds)
    xs = np.linspace(x0, x1, resolution)
    ys = np.linspace(y0, y1, resolution)
    X, Y = np.meshgrid(xs, ys)
    Z = X + 1j * Y
    chi = evaluate_curve(components, Z, pole_tol)
    n = chi.shape[-1]
    U = euclidean_frame(n)
    S = np.real(chi @ U.T)
    finite = np.all(np.isfinite(S), axis=-1)
    if not finite.any():
        raise EmptyGrid("every grid sample lies at or near a pole")

    index = -np.ones(finite.shape, dtype=int)
    index[finite] = np.arange(1, int(finite.sum()) + 1)
    vertices = S[finite]
    faces = []
    for a in range(resolution - 1):
        for b in range(resolution - 1):
            quad = (index[a, b], index[a, b + 1], index[a + 1, b + 1], index[a + 1, b])
            if min(quad) > 0:
                faces.append(quad)

    hx = (x1 - x0) / (resolution - 1)
    hy = (y1 - y0) / (resolution - 1)
    stretch, shear, lap = surface_residuals(S, hx, hy)
    meta = {
        "resolution": resolution,
        "bounds": [x0, x1, y0, y1],
        "ambient_dim": n,
        "vertices": int(vertices.shape[0]),
        "faces": len(faces),
        "filtered_samples": int((~finite).sum()),
        "conformality_stretch": _stats(stretch),
        "conformality_shear": _stats(shear),
        "laplacian": _stats(lap),
    }
    return MeshOutput(vertices, faces, meta)
