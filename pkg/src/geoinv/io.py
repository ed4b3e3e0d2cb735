"""File formats: CIF-lite (P1 only), XYZ point clouds, backbone TSV, and the
CSV/JSON serializers shared by the command-line interface.
"""

from __future__ import annotations

import json
import re

import numpy as np

from .clouds import PointCloud
from .periodic import PeriodicSet, cell_to_basis

#: numbers are printed with this many significant digits
SIG_DIGITS = 12

_CELL_TAGS = (
    "_cell_length_a",
    "_cell_length_b",
    "_cell_length_c",
    "_cell_angle_alpha",
    "_cell_angle_beta",
    "_cell_angle_gamma",
)

_P1_NAMES = {"p1", "p 1", "'p 1'", '"p 1"', "1"}


def _cif_number(token):
    """Parse a CIF numeric token, dropping a trailing standard uncertainty."""
    token = re.sub(r"\(\d+\)$", "", token)
    return float(token)


def parse_cif_lite(text):
    """Parse a minimal P1 CIF into a PeriodicSet.

    Requires the six cell tags and an ``_atom_site`` loop with fractional
    coordinates.  Symmetry settings other than P1, occupancies other than 1,
    and angles outside (0, 180) degrees are rejected.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]

    values = {}
    for ln in lines:
        parts = ln.split(None, 1)
        if len(parts) == 2 and parts[0].startswith("_"):
            values[parts[0]] = parts[1].strip()

    for tag in _CELL_TAGS:
        if tag not in values:
            raise ValueError(f"missing CIF tag {tag}")
    a, b, c, al, be, ga = (_cif_number(values[tag]) for tag in _CELL_TAGS)
    if min(a, b, c) <= 0:
        raise ValueError("cell lengths must be positive")
    for ang in (al, be, ga):
        if not 0.0 < ang < 180.0:
            raise ValueError(f"cell angle {ang} out of range (0, 180)")

    for tag in ("_symmetry_space_group_name_H-M", "_space_group_name_H-M_alt",
                "_symmetry_Int_Tables_number", "_space_group_IT_number"):
        if tag in values and values[tag].strip().lower() not in _P1_NAMES:
            raise ValueError(f"only P1 CIFs are supported ({values[tag]})")

    # locate the atom_site loop
    frac = []
    labels = []
    i = 0
    found = False
    while i < len(lines):
        if lines[i].lower() != "loop_":
            i += 1
            continue
        headers = []
        i += 1
        while i < len(lines) and lines[i].startswith("_"):
            headers.append(lines[i].split()[0])
            i += 1
        if not any(h.startswith("_atom_site") for h in headers):
            continue
        if any(h.startswith("_space_group_symop") or h.startswith("_symmetry_equiv")
               for h in headers):
            continue
        try:
            ix = headers.index("_atom_site_fract_x")
            iy = headers.index("_atom_site_fract_y")
            iz = headers.index("_atom_site_fract_z")
        except ValueError:
            raise ValueError("atom_site loop lacks fractional coordinates")
        il = headers.index("_atom_site_label") if "_atom_site_label" in headers else None
        io_ = (
            headers.index("_atom_site_occupancy")
            if "_atom_site_occupancy" in headers
            else None
        )
        while i < len(lines) and not lines[i].startswith(("_", "loop_", "data_")):
            row = lines[i].split()
            if len(row) < len(headers):
                raise ValueError("short atom_site row")
            if io_ is not None and abs(_cif_number(row[io_]) - 1.0) > 1e-9:
                raise ValueError("occupancy != 1 is not supported")
            frac.append([_cif_number(row[ix]), _cif_number(row[iy]), _cif_number(row[iz])])
            labels.append(row[il] if il is not None else f"X{len(frac)}")
            i += 1
        found = True
    if not found or not frac:
        raise ValueError("no atom_site loop found")

    # reject symmetry-operation loops with more than the identity
    sym_ops = []
    for ln in lines:
        if re.match(r"^\d+\s", ln) and "," in ln and ln.count(",") == 2:
            sym_ops.append(ln)
        elif re.match(r"^['\"]?[xyz+\-\d/ ]+,", ln.lower()) and ln.count(",") == 2:
            sym_ops.append(ln)
    if len(sym_ops) > 1:
        raise ValueError("only P1 CIFs are supported (symmetry operations found)")

    basis = cell_to_basis(a, b, c, al, be, ga)
    return PeriodicSet.from_fractional(basis, np.array(frac), labels)


def write_cif_lite(S, name="geoinv"):
    """Serialize a 3-periodic set as a P1 CIF-lite string."""
    if S.rank != 3 or S.dim != 3:
        raise ValueError("CIF output requires a 3-periodic set in R^3")
    basis = S.basis
    a, b, c = (float(np.linalg.norm(v)) for v in basis)

    def angle(u, v):
        return float(
            np.degrees(np.arccos(np.clip(u @ v / (np.linalg.norm(u) * np.linalg.norm(v)), -1, 1)))
        )

    al, be, ga = angle(basis[1], basis[2]), angle(basis[0], basis[2]), angle(basis[0], basis[1])
    frac = S.motif @ np.linalg.inv(basis)
    labels = S.labels or [f"X{i + 1}" for i in range(len(frac))]
    out = [f"data_{name}"]
    for tag, val in zip(_CELL_TAGS, (a, b, c, al, be, ga)):
        out.append(f"{tag} {fmt(val)}")
    out.append("_symmetry_space_group_name_H-M 'P 1'")
    out += ["loop_", "_atom_site_label", "_atom_site_fract_x",
            "_atom_site_fract_y", "_atom_site_fract_z"]
    for lab, f in zip(labels, frac):
        out.append(f"{lab} {fmt(f[0])} {fmt(f[1])} {fmt(f[2])}")
    return "\n".join(out) + "\n"


def parse_xyz(text):
    """Parse an XYZ file; rows may carry any fixed number of coordinates."""
    lines = text.splitlines()
    if len(lines) < 2:
        raise ValueError("truncated XYZ file")
    try:
        count = int(lines[0].split()[0])
    except (ValueError, IndexError):
        raise ValueError("bad XYZ header")
    rows = [ln.split() for ln in lines[2:] if ln.strip()]
    if len(rows) != count:
        raise ValueError(f"XYZ header says {count} rows, found {len(rows)}")
    labels = [r[0] for r in rows]
    try:
        points = np.array([[float(v) for v in r[1:]] for r in rows])
    except ValueError:
        raise ValueError("non-numeric XYZ coordinate")
    if points.ndim != 2 or points.shape[1] < 1:
        raise ValueError("inconsistent XYZ coordinate counts")
    return PointCloud(points, labels)


def write_xyz(C, comment=""):
    """Serialize a point cloud as an XYZ string."""
    labels = C.labels or ["X"] * len(C.points)
    out = [str(len(C.points)), comment]
    for lab, p in zip(labels, C.points):
        out.append(lab + " " + " ".join(fmt(v) for v in p))
    return "\n".join(out) + "\n"


def fmt(x):
    """Render a float with SIG_DIGITS significant digits ('.' decimal)."""
    v = float(x)
    if v == 0.0:
        v = 0.0  # normalize negative zero
    return f"{v:.{SIG_DIGITS}g}"


def to_csv(rows, header=None):
    """Render rows of numbers/strings as deterministic CSV text."""
    out = []
    if header:
        out.append(",".join(header))
    for row in rows:
        out.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    return "\n".join(out) + "\n"


def to_json(obj):
    """Render a structure as JSON with floats rounded to SIG_DIGITS."""

    def clean(v):
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        if isinstance(v, (np.ndarray,)):
            return clean(v.tolist())
        if isinstance(v, (float, np.floating)):
            return float(fmt(v))
        if isinstance(v, (int, np.integer)):
            return int(v)
        return v

    return json.dumps(clean(obj), indent=2) + "\n"
