"""Brute-force enumeration oracles.

Universal properties in this package are *tested*, not trusted: these
helpers enumerate all linear maps, morphisms or structures in a given
(small, prime-field) hom-space so bijection claims can be checked
exhaustively.  Linear morphism conditions are solved exactly (kernel of
the condition matrix); genuinely quadratic ones (algebra or coalgebra
morphisms) enumerate an affine slice and filter.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterator

import numpy as np

from .algebra_core import Algebra, Coalgebra, Comodule, Module
from .exactlin import (
    Field,
    LinearMap,
    PrimeField,
    kernel_basis,
    solve_matrix,
)


def _require_prime(field: Field) -> PrimeField:
    if not isinstance(field, PrimeField):
        raise ValueError("enumeration oracles need a finite field")
    return field


def enumerate_vectors(field: Field, n: int) -> Iterator[np.ndarray]:
    f = _require_prime(field)
    for combo in itertools.product(range(f.p), repeat=n):
        yield f.asarray(combo)


def enumerate_span(field: Field, basis: np.ndarray) -> Iterator[np.ndarray]:
    """All vectors in the row span (p^rank of them)."""
    f = _require_prime(field)
    k, n = basis.shape
    if k == 0:
        yield f.zeros(n)
        return
    for coeffs in itertools.product(range(f.p), repeat=k):
        yield f.mm(f.asarray(coeffs), basis)


def enumerate_matrices(field: Field, rows: int, cols: int) -> Iterator[np.ndarray]:
    f = _require_prime(field)
    for combo in itertools.product(range(f.p), repeat=rows * cols):
        yield f.asarray(combo, shape=(rows, cols))


def linear_solution_space(field: Field, rows: int, cols: int,
                          condition: Callable[[LinearMap], np.ndarray],
                          target: np.ndarray | None = None
                          ) -> tuple[np.ndarray | None, np.ndarray]:
    """Solve condition(h) == target for h, where condition is linear.

    The condition matrix is assembled by evaluating on basis matrices.
    Returns (particular_solution_or_None, kernel_rows); the particular
    solution is a flat vector of length rows*cols.  With target None the
    zero map solves, so only the kernel matters.
    """
    probe = condition(LinearMap.zero(field, rows, cols)).reshape(-1)
    if target is None:
        target = field.zeros(probe.shape[0])
    else:
        target = field.asarray(target).reshape(-1)
    cols_out = []
    for u in range(rows):
        for v in range(cols):
            e = field.zeros(rows, cols)
            e[u, v] = field.one
            cols_out.append(field.reduce(condition(LinearMap(field, e)).reshape(-1) - probe))
    if cols_out:
        k = np.stack(cols_out, axis=1)
    else:
        k = field.zeros(probe.shape[0], 0)
    rhs = field.reduce(target - probe)
    part = solve_matrix(field, k, rhs.reshape(-1, 1))
    return (None if part is None else part[:, 0]), kernel_basis(field, k)


def solution_maps(field: Field, rows: int, cols: int,
                  condition: Callable[[LinearMap], np.ndarray],
                  target: np.ndarray | None = None) -> Iterator[LinearMap]:
    part, ker = linear_solution_space(field, rows, cols, condition, target)
    if part is None:
        return
    for delta in enumerate_span(field, ker):
        yield LinearMap(field, field.reduce(part + delta).reshape(rows, cols))


def module_morphism_space(m: Module, n: Module):
    """Kernel-basis description of Mod_A(M, N)."""
    if m.over != n.over:
        raise ValueError("modules over different algebras")
    f = m.field
    eye_a = LinearMap.identity(f, m.over.dim)

    def cond(h: LinearMap) -> np.ndarray:
        return (h @ m.action - n.action @ eye_a.tensor(h)).matrix

    _, ker = linear_solution_space(f, n.dim, m.dim, cond)
    return ker


def module_morphisms(m: Module, n: Module) -> list[LinearMap]:
    ker = module_morphism_space(m, n)
    return [LinearMap(m.field, v.reshape(n.dim, m.dim))
            for v in enumerate_span(m.field, ker)]


def comodule_morphism_space(x: Comodule, y: Comodule,
                            comap: LinearMap | None = None):
    """Maps k with delta_Y k = (k (x) g) delta_X; g defaults to the identity."""
    f = x.field
    if comap is None:
        if x.over != y.over:
            raise ValueError("comodules over different coalgebras need a comap")
        comap = LinearMap.identity(f, x.over.dim)

    def cond(k: LinearMap) -> np.ndarray:
        return (y.coaction @ k - k.tensor(comap) @ x.coaction).matrix

    _, ker = linear_solution_space(f, y.dim, x.dim, cond)
    return ker


def comodule_morphisms(x: Comodule, y: Comodule,
                       comap: LinearMap | None = None) -> list[LinearMap]:
    ker = comodule_morphism_space(x, y, comap)
    return [LinearMap(x.field, v.reshape(y.dim, x.dim))
            for v in enumerate_span(x.field, ker)]


def coalgebra_morphisms(c: Coalgebra, d: Coalgebra) -> list[LinearMap]:
    """All coalgebra maps C -> D, by exhausting the counit-compatible slice."""
    f = _require_prime(c.field)

    def counit_cond(h: LinearMap) -> np.ndarray:
        return f.mm(d.counit.reshape(1, -1), h.matrix)

    out = []
    for h in solution_maps(f, d.dim, c.dim, counit_cond, c.counit):
        if d.comult @ h == h.tensor(h) @ c.comult:
            out.append(h)
    return out


def algebra_morphisms(a: Algebra, b: Algebra) -> list[LinearMap]:
    """All algebra maps A -> B, by exhausting the unit-compatible slice."""
    f = _require_prime(a.field)

    def unit_cond(h: LinearMap) -> np.ndarray:
        return f.mm(h.matrix, a.unit.reshape(-1, 1))

    out = []
    for h in solution_maps(f, b.dim, a.dim, unit_cond, b.unit):
        if h @ a.mult == b.mult @ h.tensor(h):
            out.append(h)
    return out


def canonical_key(field: Field, mat: np.ndarray) -> tuple:
    """Hashable form of a matrix for set-level bijection comparisons."""
    out = []
    for v in mat.reshape(-1):
        j = field.to_json(v)
        out.append(tuple(j) if isinstance(j, list) else int(j))
    return tuple(out)
