"""Canonical matrix tables and their exact-where-possible text rendering."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import numerics as nx
from .cartan import DELTA, G_BIG, G_SMALL, Sector
from .errors import UnknownKind
from .group import M_MATRIX
from .measurement import projectors
from .observables import (make_charge, make_charge_conjugation, make_energy,
                          make_polarization, make_spin, make_virtual)

MAX_DENOMINATOR = 1000


def _rational(x: float) -> Fraction | None:
    f = Fraction(x).limit_denominator(MAX_DENOMINATOR)
    return f if abs(float(f) - x) <= 1e-12 else None


def format_real(x: float) -> str:
    x = float(x) + 0.0
    f = _rational(x)
    if f is None:
        return f"{x:.12f}"
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_entry(z) -> str:
    z = complex(z)
    if abs(z.imag) <= 1e-15:
        return format_real(z.real)
    im = format_real(abs(z.imag))
    im = "i" if im == "1" else f"{im}i"
    if abs(z.real) <= 1e-15:
        return im if z.imag > 0 else f"-{im}"
    return f"{format_real(z.real)}{'+' if z.imag > 0 else '-'}{im}"


def format_matrix(m) -> str:
    cells = [[format_entry(z) for z in row] for row in np.asarray(m)]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


def table(kind: str, q=1, energy=1.0) -> list[tuple[str, np.ndarray]]:
    """Named matrices for one kind, in covariant (metric-lowered) entries."""
    key = kind.lower()
    if kind == "G" or key == "gbig":
        return [("G", G_BIG)]
    if key == "g":
        return [("g", G_SMALL)]
    if key == "m":
        return [("M", M_MATRIX)]
    if key in ("delta", "deltai"):
        return [("Delta", DELTA)]
    if key == "charge":
        return [("charge", make_charge(float(Fraction(str(q)))).covariant_matrix)]
    if key == "conjugation":
        c = make_charge_conjugation()
        return [("conjugation", c.covariant_matrix),
                ("conjugation+", c.covariant_block(Sector.PLUS)),
                ("conjugation-", c.covariant_block(Sector.MINUS))]
    if key == "spin":
        return [("spin", make_spin().covariant_matrix)]
    if key == "polarization":
        return [("polarization", make_polarization().covariant_matrix)]
    if key == "energy":
        e = float(Fraction(str(energy)))
        return [("energy_I", make_energy(e, "I").covariant_matrix),
                ("energy_II", make_energy(e, "II").covariant_matrix)]
    if key == "virtual":
        return [(f"virtual{s.value}", make_virtual(s).embed()) for s in Sector]
    if key in ("density", "mixed"):
        return [("mixed_density", nx.block_diag(0.5 * nx.I2, -0.5 * nx.I2))]
    if key == "measurement":
        out = []
        for mu in (0, 1):
            blocks = [projectors(s)[mu].matrix for s in Sector]
            out.append((f"pi{mu}", nx.block_diag(*blocks)))
        return out
    raise UnknownKind(f"unknown spectra kind {kind!r}")


KINDS = ("g", "G", "M", "Delta", "charge", "conjugation", "spin", "polarization", "energy",
         "virtual", "density", "measurement")


def render(kind: str, **params) -> str:
    parts = []
    for name, m in table(kind, **params):
        parts.append(f"{name}:\n{format_matrix(m)}")
    return "\n\n".join(parts) + "\n"
