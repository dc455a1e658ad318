"""Curated structure families used by tests, demos and the fuzzer.

Rejection sampling for valid structure tensors is hopeless beyond tiny
dimensions, so random generation leans on these families (optionally
twisted by a random change of basis, see ``sampling``).
"""

from __future__ import annotations

from .algebra_core import Algebra, Coalgebra, Comodule, Module
from .exactlin import Field, LinearMap


def ground_field_algebra(f: Field, name: str = "k") -> Algebra:
    return Algebra(f, LinearMap(f, [[f.one]]), [f.one], name=name)


def unit_coalgebra(f: Field, name: str = "k") -> Coalgebra:
    return Coalgebra(f, LinearMap(f, [[f.one]]), [f.one], name=name)


def zero_coalgebra(f: Field, name: str = "0") -> Coalgebra:
    return Coalgebra(f, LinearMap.zero(f, 0, 0), f.zeros(0), name=name)


def grouplike_coalgebra(f: Field, n: int, name: str = "") -> Coalgebra:
    """n grouplikes: Delta(g_i) = g_i (x) g_i, eps(g_i) = 1."""
    comult = f.zeros(n * n, n)
    for i in range(n):
        comult[i * n + i, i] = f.one
    counit = f.zeros(n)
    counit[:] = f.one
    return Coalgebra(f, LinearMap(f, comult), counit, name=name or f"grouplike({n})")


def dual_numbers_coalgebra(f: Field, name: str = "dualnum") -> Coalgebra:
    """Basis (g, d) with Delta d = d (x) g + g (x) d; d is primitive."""
    comult = f.zeros(4, 2)
    comult[0, 0] = f.one          # Delta g = g (x) g
    comult[1, 1] = f.one          # g (x) d
    comult[2, 1] = f.one          # d (x) g
    counit = f.asarray([1, 0])
    return Coalgebra(f, LinearMap(f, comult), counit, name=name)


def truncated_polynomial_algebra(f: Field, n: int, name: str = "") -> Algebra:
    """k[x]/(x^n) on basis 1, x, ..., x^(n-1)."""
    mult = f.zeros(n, n * n)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                mult[i + j, i * n + j] = f.one
    unit = f.zeros(n)
    unit[0] = f.one
    return Algebra(f, LinearMap(f, mult), unit, name=name or f"k[x]/(x^{n})")


def cyclic_group_algebra(f: Field, n: int, name: str = "") -> Algebra:
    """Group algebra of Z/n: basis x^i with x^i x^j = x^(i+j mod n)."""
    mult = f.zeros(n, n * n)
    for i in range(n):
        for j in range(n):
            mult[(i + j) % n, i * n + j] = f.one
    unit = f.zeros(n)
    unit[0] = f.one
    return Algebra(f, LinearMap(f, mult), unit, name=name or f"k[Z/{n}]")


def regular_module(a: Algebra, name: str = "") -> Module:
    """A acting on itself by multiplication."""
    return Module(a, a.mult, name=name or (f"{a.name}_reg" if a.name else ""))


def regular_comodule(c: Coalgebra, name: str = "") -> Comodule:
    """C coacting on itself by comultiplication."""
    return Comodule(c, c.comult, name=name or (f"{c.name}_reg" if c.name else ""))


def trivial_comodule(c: Coalgebra, dim: int, grouplike_index: int = 0, name: str = "") -> Comodule:
    """Coaction x |-> x (x) g for a chosen grouplike basis vector.

    Only valid when basis vector ``grouplike_index`` really is grouplike
    (as in ``grouplike_coalgebra``); the constructor will verify.
    """
    f = c.field
    coact = f.zeros(dim * c.dim, dim)
    for i in range(dim):
        coact[i * c.dim + grouplike_index, i] = f.one
    return Comodule(c, LinearMap(f, coact), name=name or f"triv({dim})")
