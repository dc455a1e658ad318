"""Base-change functors between module and comodule fibers.

Restriction along an algebra map and corestriction along a coalgebra
map leave carriers untouched; their adjoints (extension of scalars,
coinduction, cotensor) are computed as explicit quotient or subspace
carriers with stored projection/inclusion maps so the induced
(co)actions are concrete matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra_core import (
    Algebra,
    Coalgebra,
    Comodule,
    Module,
    StructureError,
    is_algebra_map,
    is_coalgebra_map,
)
from .exactlin import (
    Field,
    LinearMap,
    kernel_basis,
    quotient_map,
    restrict_to_span,
    row_space,
)


class AlgebraMorphism:
    def __init__(self, source: Algebra, target: Algebra, map: LinearMap,
                 name: str = "", validate: bool = True):
        self.source = source
        self.target = target
        self.map = map
        self.name = name
        if map.matrix.shape != (target.dim, source.dim):
            raise ValueError(
                f"map must be {target.dim}x{source.dim}, got {map.matrix.shape}")
        if validate:
            report = is_algebra_map(map, source, target)
            if not report.ok:
                report.subject = name or "algebra morphism"
                raise StructureError(report)

    @classmethod
    def identity(cls, a: Algebra) -> "AlgebraMorphism":
        return cls(a, a, LinearMap.identity(a.field, a.dim), name=f"id_{a.name}")

    def __matmul__(self, other: "AlgebraMorphism") -> "AlgebraMorphism":
        if other.target != self.source:
            raise ValueError("morphisms not composable")
        return AlgebraMorphism(other.source, self.target, self.map @ other.map,
                               validate=False)

    def __repr__(self):
        return f"AlgebraMorphism({self.source.name}->{self.target.name})"


class CoalgebraMorphism:
    def __init__(self, source: Coalgebra, target: Coalgebra, map: LinearMap,
                 name: str = "", validate: bool = True):
        self.source = source
        self.target = target
        self.map = map
        self.name = name
        if map.matrix.shape != (target.dim, source.dim):
            raise ValueError(
                f"map must be {target.dim}x{source.dim}, got {map.matrix.shape}")
        if validate:
            report = is_coalgebra_map(map, source, target)
            if not report.ok:
                report.subject = name or "coalgebra morphism"
                raise StructureError(report)

    @classmethod
    def identity(cls, c: Coalgebra) -> "CoalgebraMorphism":
        return cls(c, c, LinearMap.identity(c.field, c.dim), name=f"id_{c.name}")

    def __matmul__(self, other: "CoalgebraMorphism") -> "CoalgebraMorphism":
        if other.target != self.source:
            raise ValueError("morphisms not composable")
        return CoalgebraMorphism(other.source, self.target, self.map @ other.map,
                                 validate=False)

    def __repr__(self):
        return f"CoalgebraMorphism({self.source.name}->{self.target.name})"


def restrict(f: AlgebraMorphism, n: Module, name: str = "") -> Module:
    """Restriction of scalars: same carrier, action through f."""
    if n.over != f.target:
        raise ValueError("module is not over the morphism's target")
    eye = LinearMap.identity(n.field, n.dim)
    return Module(f.source, n.action @ f.map.tensor(eye), name=name or n.name)


def corestrict(g: CoalgebraMorphism, x: Comodule, name: str = "") -> Comodule:
    """Corestriction of scalars: same carrier, coaction pushed along g."""
    if x.over != g.source:
        raise ValueError("comodule is not over the morphism's source")
    eye = LinearMap.identity(x.field, x.dim)
    return Comodule(g.target, eye.tensor(g.map) @ x.coaction, name=name or x.name)


def _induced_on_quotient(field: Field, raw: LinearMap, proj: LinearMap,
                         section: LinearMap, what: str) -> LinearMap:
    """Factor raw: V -> W through a quotient V -> Q; raw must kill ker."""
    induced = raw @ section
    if induced @ proj != raw:
        raise AssertionError(f"{what} does not descend to the quotient")
    return induced


@dataclass
class ExtendedModule:
    """Extension of scalars along f, as a quotient of B (x) M."""

    module: Module
    project: LinearMap       # B (x) M -> carrier
    section: LinearMap       # carrier -> B (x) M (representatives)
    unit: LinearMap          # M -> carrier, m |-> [1 (x) m]


def extend(f: AlgebraMorphism, m: Module) -> ExtendedModule:
    """Left adjoint to restriction: B (x)_A M as an explicit quotient.

    The carrier is (B (x) M) modulo span{ b f(a) (x) m  -  b (x) a m }.
    """
    if m.over != f.source:
        raise ValueError("module is not over the morphism's source")
    fld = m.field
    a, b = f.source, f.target
    eye_b = LinearMap.identity(fld, b.dim)
    eye_m = LinearMap.identity(fld, m.dim)
    move = (b.mult @ eye_b.tensor(f.map)).tensor(eye_m)   # b (x) a (x) m -> b f(a) (x) m
    act = eye_b.tensor(m.action)                          # -> b (x) am
    relations = row_space(fld, (move - act).matrix.T)
    proj, section = quotient_map(fld, relations, b.dim * m.dim)
    raw_action = proj @ b.mult.tensor(eye_m)              # B (x) B (x) M -> carrier
    action = _induced_on_quotient(fld, raw_action, eye_b.tensor(proj),
                                  eye_b.tensor(section), "extension action")
    module = Module(b, action, name=f"{b.name}(x){m.name}")
    unit = proj @ b.unit_map.tensor(eye_m)
    return ExtendedModule(module, proj, section, unit)


def extend_map(f: AlgebraMorphism, src: ExtendedModule, tgt: ExtendedModule,
               u: LinearMap) -> LinearMap:
    """Functorial action of extension on a module map u."""
    eye_b = LinearMap.identity(u.field, f.target.dim)
    return _induced_on_quotient(u.field, tgt.project @ eye_b.tensor(u),
                                src.project, src.section, "extended map")


def extension_counit(f: AlgebraMorphism, n: Module) -> LinearMap:
    """extend(f, restrict(f, N)) -> N, the adjunction counit."""
    ext = extend(f, restrict(f, n))
    return _induced_on_quotient(n.field, n.action, ext.project, ext.section,
                                "extension counit")


@dataclass
class CoinducedModule:
    """Hom_A(B, M) carved out of Hom(B, M), with right-translation action."""

    module: Module
    include: LinearMap       # carrier -> Hom(B, M) flat
    counit: LinearMap        # carrier -> M, phi |-> phi(1)


def coinduce(f: AlgebraMorphism, m: Module) -> CoinducedModule:
    """Right adjoint to restriction: A-equivariant maps B -> M."""
    if m.over != f.source:
        raise ValueError("module is not over the morphism's source")
    fld = m.field
    a, b = f.source, f.target
    eye_b = LinearMap.identity(fld, b.dim)
    eye_m_eye = fld.eye(m.dim)
    conds = []
    for i in range(a.dim):
        fa = f.map.matrix[:, i].reshape(-1, 1)
        left_mult = b.mult @ LinearMap(fld, fa).tensor(eye_b)      # B -> B
        act_i = m.action.matrix[:, i * m.dim:(i + 1) * m.dim]      # M -> M
        pre = fld.kron(eye_m_eye, left_mult.matrix.T)
        post = fld.kron(act_i, fld.eye(b.dim))
        conds.append(fld.reduce(pre - post))
    basis = kernel_basis(fld, np.vstack(conds)) if conds else fld.eye(b.dim * m.dim)
    include = LinearMap(fld, basis.T.copy())
    w = basis.shape[0]
    action = fld.zeros(w, b.dim * w)
    for j in range(b.dim):
        bj = b.mult.matrix[:, :].reshape(b.dim, b.dim, b.dim)[:, :, j]  # right mult by b_j
        move = fld.kron(eye_m_eye, bj.T)
        cols = restrict_to_span(fld, fld.mm(move, include.matrix), basis)
        if cols is None:
            raise AssertionError("coinduced carrier not stable under translation")
        action[:, j * w:(j + 1) * w] = cols
    module = Module(b, LinearMap(fld, action), name=f"Hom_{a.name}({b.name},{m.name})")
    ev_unit = fld.zeros(m.dim, b.dim * m.dim)
    for i in range(m.dim):
        ev_unit[i, i * b.dim:(i + 1) * b.dim] = b.unit
    counit = LinearMap(fld, ev_unit) @ include
    return CoinducedModule(module, include, counit)


def coinduction_unit(f: AlgebraMorphism, n: Module) -> LinearMap:
    """N -> coinduce(f, restrict(f, N)), n |-> (b |-> b n)."""
    fld = n.field
    b = f.target
    coind = coinduce(f, restrict(f, n))
    raw = fld.zeros(n.dim * b.dim, n.dim)
    for k in range(n.dim):
        for j in range(b.dim):
            col = n.action.matrix[:, j * n.dim + k]
            raw[np.arange(n.dim) * b.dim + j, k] = col
    coords = restrict_to_span(fld, raw, coind.include.matrix.T)
    if coords is None:
        raise AssertionError("coinduction unit escapes the equivariant subspace")
    return LinearMap(fld, coords)


@dataclass
class CotensoredComodule:
    """Cotensor Y []_D C inside Y (x) C, with induced C-coaction."""

    comodule: Comodule
    include: LinearMap       # carrier -> Y (x) C
    counit: LinearMap        # carrier -> Y, w |-> (1 (x) eps)(w)


def cotensor(y: Comodule, g: CoalgebraMorphism) -> CotensoredComodule:
    """Right adjoint to corestriction along g: C -> D, for Y over D.

    Carrier: the equalizer of delta_Y (x) 1 and 1 (x) (g (x) 1) Delta_C
    inside Y (x) C.  Over a field every comodule is flat, so this
    formula applies unconditionally.
    """
    if y.over != g.target:
        raise ValueError("comodule is not over the morphism's target")
    fld = y.field
    c, d = g.source, g.target
    eye_c = LinearMap.identity(fld, c.dim)
    eye_y = LinearMap.identity(fld, y.dim)
    lam = g.map.tensor(eye_c) @ c.comult                 # C -> D (x) C
    diff = y.coaction.tensor(eye_c) - eye_y.tensor(lam)  # Y (x) C -> Y (x) D (x) C
    basis = kernel_basis(fld, diff.matrix)
    include = LinearMap(fld, basis.T.copy())
    raw_coact = eye_y.tensor(c.comult) @ include         # carrier -> Y (x) C (x) C
    coords = restrict_to_span(fld, raw_coact.matrix,
                              fld.kron(basis, fld.eye(c.dim)))
    if coords is None:
        raise AssertionError("cotensor coaction escapes the equalizer")
    comodule = Comodule(c, LinearMap(fld, coords), name=f"{y.name}[]{c.name}")
    counit = eye_y.tensor(c.counit_map) @ include
    return CotensoredComodule(comodule, include, counit)


def cotensor_unit(g: CoalgebraMorphism, x: Comodule) -> LinearMap:
    """X -> cotensor(corestrict(g, X), g), given by the coaction of X."""
    fld = x.field
    cot = cotensor(corestrict(g, x), g)
    coords = restrict_to_span(fld, x.coaction.matrix, cot.include.matrix.T)
    if coords is None:
        raise AssertionError("coaction does not land in the cotensor equalizer")
    return LinearMap(fld, coords)
