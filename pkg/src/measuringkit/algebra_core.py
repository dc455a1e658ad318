"""Finite-dimensional algebras, coalgebras, modules and comodules.

Structures are stored as dense structure-constant tensors over an exact
field and validated eagerly: every constructor checks its defining
diagrams and raises ``StructureError`` with a witness unless told not
to.  Downstream code may therefore assume validity.

Conventions (shared package-wide):
  * multiplication  m : A (x) A -> A   is an (n x n^2) matrix,
  * comultiplication D : C -> C (x) C  is an (n^2 x n) matrix,
  * a linear map V -> W flattens to a vector of Hom(V, W) row-major,
    so the basis map e_j |-> f_i sits at index i * dim(V) + j,
  * dual bases are indexed like the primal bases, making duals literal
    matrix transposes.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .exactlin import (
    DimensionMismatch,
    Field,
    FieldMismatch,
    LinearMap,
    tensor_permutation,
)


@dataclass
class LawCheck:
    name: str
    passed: bool
    witness: dict | None = None


@dataclass
class LawReport:
    subject: str
    checks: list[LawCheck] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, witness: dict | None = None):
        self.checks.append(LawCheck(name, passed, witness))

    def failures(self) -> list[LawCheck]:
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        lines = [f"[{ 'ok' if c.passed else 'FAIL'}] {self.subject}: {c.name}"
                 + (f"  witness={c.witness}" if c.witness else "")
                 for c in self.checks]
        return "\n".join(lines)


class StructureError(ValueError):
    """A structure failed its defining laws; carries the law report."""

    def __init__(self, report: LawReport):
        self.report = report
        fails = ", ".join(c.name for c in report.failures())
        super().__init__(f"{report.subject} violates: {fails}")


def _first_mismatch(field: Field, lhs: np.ndarray, rhs: np.ndarray) -> tuple[int, int] | None:
    diff = np.not_equal(lhs, rhs)
    idx = np.argwhere(diff)
    if idx.size == 0:
        return None
    return tuple(int(v) for v in idx[0])


def _unflatten(col: int, dims: tuple[int, ...]) -> list[int]:
    out = []
    for d in reversed(dims):
        out.append(col % d)
        col //= d
    return list(reversed(out))


def _witness(field: Field, lhs, rhs, dims: tuple[int, ...]) -> dict | None:
    at = _first_mismatch(field, lhs, rhs)
    if at is None:
        return None
    row, col = at
    return {
        "basis": _unflatten(col, dims),
        "row": row,
        "lhs": field.to_json(lhs[at]),
        "rhs": field.to_json(rhs[at]),
    }


class Algebra:
    """An associative unital algebra by structure constants."""

    def __init__(self, field: Field, mult: LinearMap, unit, name: str = "", validate: bool = True):
        self.field = field
        self.mult = mult
        self.unit = field.asarray(unit)
        self.name = name
        n = self.unit.shape[0]
        if mult.matrix.shape != (n, n * n):
            raise DimensionMismatch(f"mult must be {n}x{n * n}, got {mult.matrix.shape}")
        self.dim = n
        if validate:
            report = check_algebra(self)
            if not report.ok:
                raise StructureError(report)

    @property
    def unit_map(self) -> LinearMap:
        return LinearMap(self.field, self.unit.reshape(-1, 1))

    def multiply(self, u, v) -> np.ndarray:
        u = self.field.asarray(u)
        v = self.field.asarray(v)
        return self.mult.apply(self.field.kron(u, v))

    def __eq__(self, other):
        return (
            isinstance(other, Algebra)
            and self.field == other.field
            and self.mult == other.mult
            and self.field.equal(self.unit, other.unit)
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim}, {self.field})"


class Coalgebra:
    """A coassociative counital coalgebra by structure constants.

    Dimension zero is allowed (the initial coalgebra shows up as an
    empty colimit).
    """

    def __init__(self, field: Field, comult: LinearMap, counit, name: str = "", validate: bool = True):
        self.field = field
        self.comult = comult
        self.counit = field.asarray(counit)
        n = self.counit.shape[0]
        if comult.matrix.shape != (n * n, n):
            raise DimensionMismatch(f"comult must be {n * n}x{n}, got {comult.matrix.shape}")
        self.dim = n
        self.name = name
        if validate:
            report = check_coalgebra(self)
            if not report.ok:
                raise StructureError(report)

    @property
    def counit_map(self) -> LinearMap:
        return LinearMap(self.field, self.counit.reshape(1, -1))

    def __eq__(self, other):
        return (
            isinstance(other, Coalgebra)
            and self.field == other.field
            and self.comult == other.comult
            and self.field.equal(self.counit, other.counit)
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return f"Coalgebra({self.name or '?'}, dim={self.dim}, {self.field})"


class Module:
    """A left module over an algebra, carrier with action A (x) M -> M."""

    def __init__(self, over: Algebra, action: LinearMap, name: str = "", validate: bool = True):
        self.over = over
        self.field = over.field
        m = action.codomain_dim
        if action.matrix.shape != (m, over.dim * m):
            raise DimensionMismatch(
                f"action must be {m}x{over.dim * m}, got {action.matrix.shape}")
        self.action = action
        self.dim = m
        self.name = name
        if validate:
            report = check_module(self)
            if not report.ok:
                raise StructureError(report)

    def __eq__(self, other):
        return (
            isinstance(other, Module)
            and self.over == other.over
            and self.action == other.action
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return f"Module({self.name or '?'}, dim={self.dim} over {self.over.name or '?'})"


class Comodule:
    """A right comodule over a coalgebra, coaction X -> X (x) C."""

    def __init__(self, over: Coalgebra, coaction: LinearMap, name: str = "", validate: bool = True):
        self.over = over
        self.field = over.field
        x = coaction.domain_dim
        if coaction.matrix.shape != (x * over.dim, x):
            raise DimensionMismatch(
                f"coaction must be {x * over.dim}x{x}, got {coaction.matrix.shape}")
        self.coaction = coaction
        self.dim = x
        self.name = name
        if validate:
            report = check_comodule(self)
            if not report.ok:
                raise StructureError(report)

    def __eq__(self, other):
        return (
            isinstance(other, Comodule)
            and self.over == other.over
            and self.coaction == other.coaction
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return f"Comodule({self.name or '?'}, dim={self.dim} over {self.over.name or '?'})"


# ---------------------------------------------------------------------------
# law checkers


def check_algebra(a: Algebra) -> LawReport:
    """Associativity and both unit diagrams, with a witness triple on failure."""
    f = a.field
    n = a.dim
    report = LawReport(a.name or "algebra")
    eye = LinearMap.identity(f, n)
    lhs = a.mult @ a.mult.tensor(eye)
    rhs = a.mult @ eye.tensor(a.mult)
    report.add("associativity", lhs == rhs, _witness(f, lhs.matrix, rhs.matrix, (n, n, n)))
    lu = a.mult @ a.unit_map.tensor(eye)
    report.add("left_unit", lu.is_identity(), _witness(f, lu.matrix, f.eye(n), (n,)))
    ru = a.mult @ eye.tensor(a.unit_map)
    report.add("right_unit", ru.is_identity(), _witness(f, ru.matrix, f.eye(n), (n,)))
    report.add("unit_nonzero", bool(np.any(a.unit != f.zero)))
    return report


def check_coalgebra(c: Coalgebra) -> LawReport:
    """Coassociativity and both counit diagrams, dual to check_algebra."""
    f = c.field
    n = c.dim
    report = LawReport(c.name or "coalgebra")
    eye = LinearMap.identity(f, n)
    lhs = c.comult.tensor(eye) @ c.comult
    rhs = eye.tensor(c.comult) @ c.comult
    report.add("coassociativity", lhs == rhs, _witness(f, lhs.matrix, rhs.matrix, (n,)))
    lc = c.counit_map.tensor(eye) @ c.comult
    report.add("left_counit", lc.is_identity(), _witness(f, lc.matrix, f.eye(n), (n,)))
    rc = eye.tensor(c.counit_map) @ c.comult
    report.add("right_counit", rc.is_identity(), _witness(f, rc.matrix, f.eye(n), (n,)))
    return report


def check_module(m: Module) -> LawReport:
    f = m.field
    a = m.over
    report = LawReport(m.name or "module")
    eye_m = LinearMap.identity(f, m.dim)
    eye_a = LinearMap.identity(f, a.dim)
    lhs = m.action @ a.mult.tensor(eye_m)
    rhs = m.action @ eye_a.tensor(m.action)
    report.add("action_associativity", lhs == rhs,
               _witness(f, lhs.matrix, rhs.matrix, (a.dim, a.dim, m.dim)))
    un = m.action @ a.unit_map.tensor(eye_m)
    report.add("action_unit", un.is_identity(), _witness(f, un.matrix, f.eye(m.dim), (m.dim,)))
    return report


def check_comodule(x: Comodule) -> LawReport:
    f = x.field
    c = x.over
    report = LawReport(x.name or "comodule")
    eye_x = LinearMap.identity(f, x.dim)
    eye_c = LinearMap.identity(f, c.dim)
    lhs = x.coaction.tensor(eye_c) @ x.coaction
    rhs = eye_x.tensor(c.comult) @ x.coaction
    report.add("coaction_coassociativity", lhs == rhs,
               _witness(f, lhs.matrix, rhs.matrix, (x.dim,)))
    cu = eye_x.tensor(c.counit_map) @ x.coaction
    report.add("coaction_counit", cu.is_identity(),
               _witness(f, cu.matrix, f.eye(x.dim), (x.dim,)))
    return report


# ---------------------------------------------------------------------------
# constructions


def _check_fields(*objs):
    f = objs[0].field
    for o in objs[1:]:
        if o.field != f:
            raise FieldMismatch(f"fields differ: {f} vs {o.field}")
    return f


def tensor_algebra(a: Algebra, b: Algebra, name: str = "") -> Algebra:
    """Product (m_A (x) m_B) after the middle swap; unit u_A (x) u_B."""
    f = _check_fields(a, b)
    shuffle = tensor_permutation(f, (a.dim, b.dim, a.dim, b.dim), (0, 2, 1, 3))
    mult = a.mult.tensor(b.mult) @ shuffle
    unit = f.kron(a.unit, b.unit)
    return Algebra(f, mult, unit, name=name or f"({a.name}(x){b.name})")


def tensor_coalgebra(c: Coalgebra, d: Coalgebra, name: str = "") -> Coalgebra:
    f = _check_fields(c, d)
    shuffle = tensor_permutation(f, (c.dim, c.dim, d.dim, d.dim), (0, 2, 1, 3))
    comult = shuffle @ c.comult.tensor(d.comult)
    counit = f.kron(c.counit, d.counit)
    return Coalgebra(f, comult, counit, name=name or f"({c.name}(x){d.name})")


def _block_injections(f: Field, n1: int, n2: int):
    inc1 = f.zeros(n1 + n2, n1)
    inc2 = f.zeros(n1 + n2, n2)
    for i in range(n1):
        inc1[i, i] = f.one
    for i in range(n2):
        inc2[n1 + i, i] = f.one
    pr1 = inc1.T.copy()
    pr2 = inc2.T.copy()
    return (LinearMap(f, inc1), LinearMap(f, inc2), LinearMap(f, pr1), LinearMap(f, pr2))


def direct_sum_coalgebra(c: Coalgebra, d: Coalgebra, name: str = ""):
    """Coproduct in coalgebras: block comultiplication and counit.

    Returns the sum together with the two inclusion maps.
    """
    f = _check_fields(c, d)
    inc1, inc2, pr1, pr2 = _block_injections(f, c.dim, d.dim)
    comult = inc1.tensor(inc1) @ c.comult @ pr1 + inc2.tensor(inc2) @ d.comult @ pr2
    counit = np.concatenate([c.counit, d.counit])
    total = Coalgebra(f, comult, counit, name=name or f"({c.name}(+){d.name})")
    return total, inc1, inc2


def product_algebra(a: Algebra, b: Algebra, name: str = "") -> Algebra:
    """Componentwise product on the direct sum carrier."""
    f = _check_fields(a, b)
    inc1, inc2, pr1, pr2 = _block_injections(f, a.dim, b.dim)
    mult = inc1 @ a.mult @ pr1.tensor(pr1) + inc2 @ b.mult @ pr2.tensor(pr2)
    unit = f.reduce(inc1.matrix @ a.unit + inc2.matrix @ b.unit)
    return Algebra(f, mult, unit, name=name or f"({a.name}x{b.name})")


def dual_coalgebra(a: Algebra, name: str = "") -> Coalgebra:
    """Transpose of the multiplication; counit is evaluation at the unit."""
    return Coalgebra(a.field, a.mult.transpose(), a.unit.copy(),
                     name=name or (f"{a.name}*" if a.name else ""))


def dual_algebra(c: Coalgebra, name: str = "") -> Algebra:
    """Transpose of the comultiplication; the unit is the counit vector."""
    return Algebra(c.field, c.comult.transpose(), c.counit.copy(),
                   name=name or (f"{c.name}*" if c.name else ""))


# ---------------------------------------------------------------------------
# hom-space plumbing (row-major flattening of matrices)


def map_to_vector(m: LinearMap) -> np.ndarray:
    return m.matrix.reshape(-1).copy()


def vector_to_map(f: Field, vec, domain_dim: int, codomain_dim: int) -> LinearMap:
    return LinearMap(f, f.asarray(vec).reshape(codomain_dim, domain_dim))


def basis_map(f: Field, domain_dim: int, codomain_dim: int, index: int) -> LinearMap:
    m = f.zeros(codomain_dim, domain_dim)
    m[index // domain_dim, index % domain_dim] = f.one
    return LinearMap(f, m)


def evaluation_map(f: Field, domain_dim: int, codomain_dim: int) -> LinearMap:
    """Hom(V, W) (x) V -> W on basis maps and basis vectors."""
    ev = f.zeros(codomain_dim, codomain_dim * domain_dim * domain_dim)
    for i in range(codomain_dim):
        for j in range(domain_dim):
            ev[i, (i * domain_dim + j) * domain_dim + j] = f.one
    return LinearMap(f, ev)


def convolution_algebra(c: Coalgebra, a: Algebra, name: str = "") -> Algebra:
    """Hom(C, A) with (f*g) = m o (f (x) g) o Delta and unit eta o eps."""
    f = _check_fields(c, a)
    hom_dim = c.dim * a.dim
    mult = f.zeros(hom_dim, hom_dim * hom_dim)
    for p in range(hom_dim):
        fp = basis_map(f, c.dim, a.dim, p)
        for q in range(hom_dim):
            gq = basis_map(f, c.dim, a.dim, q)
            prod = a.mult @ fp.tensor(gq) @ c.comult
            mult[:, p * hom_dim + q] = map_to_vector(prod)
    unit = map_to_vector(LinearMap(f, np.outer(a.unit, c.counit)))
    return Algebra(f, LinearMap(f, mult), unit,
                   name=name or f"Hom({c.name or '?'},{a.name or '?'})")


def hom_module(x: Comodule, m: Module, conv: Algebra | None = None,
               name: str = "") -> Module:
    """Hom(X, M) as a module over the convolution algebra Hom(C, A).

    The action inserts the coaction, evaluates twice and acts:
    (xi . phi)(v) = mu(xi(v_(1)) (x) phi(v_(0))).

    With right comodules and the standard convolution this composite
    satisfies the module law exactly when the iterated coaction is
    symmetric in its two C-legs (any comodule over a cocommutative
    coalgebra qualifies); construction validates and raises otherwise.
    """
    f = _check_fields(x, m)
    c = x.over
    a = m.over
    if conv is None:
        conv = convolution_algebra(c, a)
    elif conv != convolution_algebra(c, a):
        raise ValueError("supplied convolution algebra does not match Hom(C, A)")
    hom_ca = c.dim * a.dim
    hom_xm = x.dim * m.dim
    act = f.zeros(hom_xm, hom_ca * hom_xm)
    coact = x.coaction.matrix
    for i in range(a.dim):
        for j in range(c.dim):
            for k in range(m.dim):
                for l in range(x.dim):
                    # xi = (c_j -> a_i), phi = (x_l -> m_k)
                    dvec = coact[l * c.dim + j, :]
                    col = np.outer(m.action.matrix[:, i * m.dim + k], dvec)
                    p = i * c.dim + j
                    q = k * x.dim + l
                    act[:, p * hom_xm + q] = f.reduce(col).reshape(-1)
    return Module(conv, LinearMap(f, act),
                  name=name or f"Hom({x.name or '?'},{m.name or '?'})")


def lax_structure_psi(f: Field, a_dim: int, b_dim: int, a2_dim: int, b2_dim: int) -> LinearMap:
    """Hom(A,B) (x) Hom(A',B') -> Hom(A (x) A', B (x) B'), pure tensors to
    Kronecker products."""
    src_dim = a_dim * b_dim * a2_dim * b2_dim
    tgt_dim = (a_dim * a2_dim) * (b_dim * b2_dim)
    psi = f.zeros(tgt_dim, src_dim)
    h1 = a_dim * b_dim
    h2 = a2_dim * b2_dim
    for p in range(h1):
        fp = basis_map(f, a_dim, b_dim, p)
        for q in range(h2):
            gq = basis_map(f, a2_dim, b2_dim, q)
            psi[:, p * h2 + q] = map_to_vector(fp.tensor(gq))
    return LinearMap(f, psi)


def is_algebra_map(f_map: LinearMap, a: Algebra, b: Algebra) -> LawReport:
    """Does f preserve multiplication and unit?"""
    report = LawReport("algebra map")
    f = a.field
    lhs = f_map @ a.mult
    rhs = b.mult @ f_map.tensor(f_map)
    report.add("preserves_mult", lhs == rhs,
               _witness(f, lhs.matrix, rhs.matrix, (a.dim, a.dim)))
    report.add("preserves_unit", f.equal(f_map.apply(a.unit), b.unit))
    return report


def is_coalgebra_map(g_map: LinearMap, c: Coalgebra, d: Coalgebra) -> LawReport:
    report = LawReport("coalgebra map")
    f = c.field
    lhs = d.comult @ g_map
    rhs = g_map.tensor(g_map) @ c.comult
    report.add("preserves_comult", lhs == rhs,
               _witness(f, lhs.matrix, rhs.matrix, (c.dim,)))
    lhs_c = LinearMap(f, d.counit.reshape(1, -1)) @ g_map
    report.add("preserves_counit", f.equal(lhs_c.matrix[0], c.counit))
    return report
