"""Class functions and irreducible character tables.

Numerical tables come from simultaneously diagonalising the class-sum
multiplication matrices (Burnside's method).  Exact formula tables are
available for cyclic, dihedral, quaternion and small symmetric groups.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .groups import FiniteGroup

ORTHOGONALITY_TOL = 1e-9
ROUNDING_TOL = 1e-6
SPLIT_RETRIES = 8


class CharacterError(ArithmeticError):
    """Numerical breakdown while computing or validating a character table."""


@dataclass(frozen=True, eq=False)
class ClassFunction:
    """A complex-valued function on a group, stored once per conjugacy class."""

    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).reshape(-1)
        if len(values) != self.group.classes.count:
            raise ValueError(
                f"class function needs {self.group.classes.count} values, got {len(values)}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __call__(self, g: int) -> complex:
        return complex(self.values[self.group.classes.class_of[g]])

    def on_elements(self) -> np.ndarray:
        return self.values[self.group.classes.class_of]

    def integer_values(self, tol: float = ROUNDING_TOL) -> Optional[list[int]]:
        """The values as Python ints if every value is (numerically) an integer."""
        rounded = np.round(self.values.real)
        if np.all(np.abs(self.values - rounded) < tol):
            return [int(x) for x in rounded]
        return None

    def __add__(self, other: ClassFunction) -> ClassFunction:
        _same_group(self, other)
        return ClassFunction(self.group, self.values + other.values)

    def __mul__(self, scalar) -> ClassFunction:
        return ClassFunction(self.group, self.values * scalar)

    __rmul__ = __mul__


def _same_group(a, b):
    if a.group is not b.group:
        raise ValueError("class functions belong to different groups")


def inner_product(a: ClassFunction, b: ClassFunction) -> complex:
    """<a, b> = (1/|G|) sum_g a(g) b(g^-1), evaluated classwise."""
    _same_group(a, b)
    cls = a.group.classes
    sizes = np.array(cls.sizes, dtype=float)
    b_inv = b.values[list(cls.inverse_class)]
    return complex(np.sum(sizes * a.values * b_inv) / a.group.order)


def regular_character(group: FiniteGroup) -> ClassFunction:
    values = np.zeros(group.classes.count, dtype=complex)
    values[0] = group.order
    return ClassFunction(group, values)


def trivial_character(group: FiniteGroup) -> ClassFunction:
    return ClassFunction(group, np.ones(group.classes.count, dtype=complex))


def class_indicator(group: FiniteGroup, class_id: int) -> ClassFunction:
    """f_C: |G|/|C| on the class C and zero elsewhere."""
    cls = group.classes
    if not 0 <= class_id < cls.count:
        raise IndexError(f"class id {class_id} out of range 0..{cls.count - 1}")
    values = np.zeros(cls.count, dtype=complex)
    values[class_id] = group.order / cls.sizes[class_id]
    return ClassFunction(group, values)


@dataclass(frozen=True, eq=False)
class CharacterTable:
    group: FiniteGroup
    characters: tuple[ClassFunction, ...]
    dimensions: tuple[int, ...]
    method: str = "numeric"

    @property
    def matrix(self) -> np.ndarray:
        """Rows are irreducible characters, columns conjugacy classes."""
        return np.array([c.values for c in self.characters])

    def __len__(self):
        return len(self.characters)

    def validate(self, tol: float = ORTHOGONALITY_TOL) -> None:
        """Raise CharacterError unless the table is a complete orthonormal set."""
        g = self.group
        cls = g.classes
        k = cls.count
        if len(self.characters) != k:
            raise CharacterError(f"{len(self.characters)} characters for {k} classes")
        if sum(d * d for d in self.dimensions) != g.order:
            raise CharacterError("squared dimensions do not sum to |G|")
        for d in self.dimensions:
            if d <= 0 or g.order % d:
                raise CharacterError(f"dimension {d} does not divide |G| = {g.order}")
        x = self.matrix
        if np.max(np.abs(x[:, 0] - np.array(self.dimensions))) > tol:
            raise CharacterError("dimensions disagree with values at the identity")
        sizes = np.array(cls.sizes, dtype=float)
        inv = list(cls.inverse_class)
        rows = (x * sizes) @ x[:, inv].T / g.order
        if np.max(np.abs(rows - np.eye(k))) > tol:
            raise CharacterError("row orthogonality fails")
        cols = x.T @ x[:, inv] * (sizes / g.order)[:, None]
        if np.max(np.abs(cols - np.eye(k))) > tol:
            raise CharacterError("column orthogonality fails")


def decompose(chi: ClassFunction, table: CharacterTable) -> np.ndarray:
    """Coefficients m with chi = sum_l m_l chi_l, m_l = <chi, chi_l>."""
    _same_group(chi, table)
    return np.array([inner_product(chi, c) for c in table.characters])


def recompose(coefficients: Sequence[complex], table: CharacterTable) -> ClassFunction:
    values = np.asarray(coefficients, dtype=complex) @ table.matrix
    return ClassFunction(table.group, values)


# -- construction ---------------------------------------------------------


def character_table(
    group: FiniteGroup,
    method: str = "auto",
    *,
    seed: int = 0,
) -> CharacterTable:
    """Irreducible characters of ``group``.

    ``method`` is ``"exact"`` (formula tables for recognised families),
    ``"numeric"`` (class-sum eigenvectors) or ``"auto"`` (exact when
    available).
    """
    if method not in ("auto", "exact", "numeric"):
        raise ValueError(f"unknown character table method {method!r}")
    table = None
    if method in ("auto", "exact"):
        table = _exact_table(group)
        if table is None and method == "exact":
            raise CharacterError(f"no exact table for {group.spec or 'this group'}")
    if table is None:
        table = _numeric_table(group, seed)
    table.validate()
    return table


def _sorted_table(group, rows, method) -> CharacterTable:
    rows = [np.asarray(r, dtype=complex) for r in rows]
    dims = [int(round(r[0].real)) for r in rows]

    def key(i):
        r = np.round(rows[i], 6) + 0.0
        return (dims[i], tuple((-v.real, -v.imag) for v in r))

    order = sorted(range(len(rows)), key=key)
    chars = tuple(ClassFunction(group, rows[i]) for i in order)
    return CharacterTable(group, chars, tuple(dims[i] for i in order), method)


def class_sum_matrices(group: FiniteGroup) -> np.ndarray:
    """Structure constants c[r, s, t] = #{(x, y) in C_r x C_s : x y = z_t}.

    For each irreducible, the vector w_t = |C_t| chi(z_t) / chi(1) satisfies
    sum_t c[r, s, t] w_t = w_r w_s.
    """
    cls = group.classes
    k = cls.count
    class_of = cls.class_of
    c = np.zeros((k, k, k), dtype=np.int64)
    t = group.table
    inv = group.inverse
    for ti, z in enumerate(cls.representatives):
        # pairs (x, x^-1 z): x ranges over G
        y = t[inv, z]
        np.add.at(c[:, :, ti], (class_of, class_of[y]), 1)
    return c


def _numeric_table(group: FiniteGroup, seed: int) -> CharacterTable:
    cls = group.classes
    k = cls.count
    n = group.order
    if k == 1:
        return _sorted_table(group, [np.ones(1)], "numeric")
    c = class_sum_matrices(group).astype(float)
    sizes = np.array(cls.sizes, dtype=float)
    rng = np.random.default_rng(seed)
    for _ in range(SPLIT_RETRIES):
        weights = rng.standard_normal(k)
        # M[s, t] = sum_r a_r c[r, s, t]; w is a right eigenvector of M.
        m = np.einsum("r,rst->st", weights, c)
        evals, evecs = np.linalg.eig(m)
        gaps = np.abs(evals[:, None] - evals[None, :])
        np.fill_diagonal(gaps, np.inf)
        scale = 1.0 + np.max(np.abs(evals))
        if np.min(gaps) < 1e-6 * scale:
            continue
        rows = []
        for j in range(k):
            w = evecs[:, j] / evecs[0, j]
            w = _refine(c, w)
            norm = np.sum(np.abs(w) ** 2 / sizes)
            dim = math.sqrt(n / norm)
            d = round(dim)
            if abs(dim - d) > ROUNDING_TOL or d < 1:
                raise CharacterError(f"dimension {dim} is not close to an integer")
            rows.append(d * w / sizes)
        return _sorted_table(group, rows, "numeric")
    raise CharacterError("could not split degenerate eigenspaces; try method='exact'")


def _refine(c: np.ndarray, w: np.ndarray, steps: int = 3) -> np.ndarray:
    """Polish a central-character vector with Newton steps on w_r w = C_r w."""
    k = len(w)
    for _ in range(steps):
        # residual R[r, s] = sum_t c[r,s,t] w_t - w_r w_s, with w_0 fixed at 1
        res = np.einsum("rst,t->rs", c, w) - np.outer(w, w)
        jac = c.reshape(k * k, k).astype(complex)
        jac = jac - (np.einsum("rt,s->rst", np.eye(k), w) + np.einsum("st,r->rst", np.eye(k), w)).reshape(k * k, k)
        delta, *_ = np.linalg.lstsq(jac[:, 1:], -res.reshape(-1), rcond=None)
        w = w.astype(complex)
        w[1:] += delta
    return w


def _exact_table(group: FiniteGroup) -> Optional[CharacterTable]:
    kind = group.kind
    if kind is None:
        return None
    reps = group.classes.representatives
    if kind[0] == "cyclic":
        n = kind[1]
        rows = [[cmath.exp(2j * math.pi * a * x / n) for x in reps] for a in range(n)]
    elif kind[0] == "dihedral":
        rows = _dihedral_rows(kind[1], reps)
    elif kind[0] == "quaternion":
        rows = _quaternion_rows(reps)
    elif kind[0] == "symmetric" and kind[1] <= 4:
        rows = _symmetric_rows(group, kind[1], reps)
    else:
        return None
    return _sorted_table(group, rows, "exact")


def _dihedral_rows(n, reps):
    def rot_refl(x):
        return x % n, x // n

    rows = [
        [1 for _ in reps],
        [(-1) ** rot_refl(x)[1] for x in reps],
    ]
    if n % 2 == 0:
        rows.append([(-1) ** rot_refl(x)[0] for x in reps])
        rows.append([(-1) ** sum(rot_refl(x)) for x in reps])
    for h in range(1, (n - 1) // 2 + 1):
        row = []
        for x in reps:
            i, a = rot_refl(x)
            row.append(0.0 if a else 2 * math.cos(2 * math.pi * h * i / n))
        rows.append(row)
    return rows


def _quaternion_rows(reps):
    # index 2*unit + sign_bit; units 1, i, j, k
    def unit(x):
        return x // 2

    rows = []
    # 1-dim characters factor through Q8/{+-1} = <i> x <j>
    for si in (1, -1):
        for sj in (1, -1):
            vals = {0: 1, 1: si, 2: sj, 3: si * sj}
            rows.append([vals[unit(x)] for x in reps])
    rows.append([2 if x == 0 else (-2 if x == 1 else 0) for x in reps])
    return rows


def _symmetric_rows(group, n, reps):
    # cycle type of each representative, read back from its name
    def cycle_type(x):
        name = group.names[x]
        lengths = [len(c.split()) for c in name.strip("()").split(")(")] if name != "()" else []
        return tuple(sorted(lengths + [1] * (n - sum(lengths)), reverse=True))

    types = [cycle_type(x) for x in reps]

    def sign(t):
        return (-1) ** sum(l - 1 for l in t)

    def fixed(t):
        return t.count(1)

    rows = [[1] * len(types)]
    if n >= 2:
        rows.append([sign(t) for t in types])
    if n >= 3:
        rows.append([fixed(t) - 1 for t in types])
    if n == 4:
        rows.append([sign(t) * (fixed(t) - 1) for t in types])
        two = {(1, 1, 1, 1): 2, (2, 1, 1): 0, (2, 2): 2, (3, 1): -1, (4,): 0}
        rows.append([two[t] for t in types])
    return rows
