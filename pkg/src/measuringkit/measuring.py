"""Measuring maps and finite-dimensional fragments of the universal
measuring coalgebra.

A map sigma: C (x) A -> B measures when its transpose rho: A -> Hom(C,B)
is an algebra map into the convolution algebra.  The universal measuring
coalgebra P(A, B) classifying all measurings is typically
infinite-dimensional; this module materializes it lazily as *fragments*:
honest finite-dimensional quotient coalgebras D of concrete measuring
carriers, each carrying an induced universal measuring.  The fragment of
a measuring is computed dually: the measuring functionals generate a
unital subalgebra S of C* under convolution, and D = C / S-perp.

Fragment carriers use the row-reduced echelon basis of S, so results
are reproducible.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra_core import (
    Algebra,
    Coalgebra,
    LawReport,
    StructureError,
    check_coalgebra,
    convolution_algebra,
    direct_sum_coalgebra,
    dual_algebra,
    dual_coalgebra,
    is_algebra_map,
)
from .exactlin import (
    Field,
    LinearMap,
    functional_quotient,
    kernel_basis,
    multiplicative_closure,
    row_space,
    solve_matrix,
)
from .families import ground_field_algebra, unit_coalgebra, dual_numbers_coalgebra, truncated_polynomial_algebra
from .scalars_functors import AlgebraMorphism, CoalgebraMorphism


class Measuring:
    """A measuring sigma: C (x) A -> B with its transpose rho."""

    def __init__(self, coalg: Coalgebra, source: Algebra, target: Algebra,
                 sigma: LinearMap, name: str = "", validate: bool = True):
        self.coalg = coalg
        self.source = source
        self.target = target
        self.sigma = sigma
        self.name = name
        if sigma.matrix.shape != (target.dim, coalg.dim * source.dim):
            raise ValueError(
                f"sigma must be {target.dim}x{coalg.dim * source.dim}, "
                f"got {sigma.matrix.shape}")
        if validate:
            report = check_measuring(self)
            if not report.ok:
                raise StructureError(report)

    @property
    def field(self) -> Field:
        return self.coalg.field

    @property
    def rho(self) -> LinearMap:
        """The transpose A -> Hom(C, B), flattened row-major."""
        return sigma_to_rho(self.sigma, self.coalg.dim, self.source.dim, self.target.dim)

    def __eq__(self, other):
        return (
            isinstance(other, Measuring)
            and self.coalg == other.coalg
            and self.source == other.source
            and self.target == other.target
            and self.sigma == other.sigma
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return (f"Measuring({self.name or '?'}: {self.coalg.name};"
                f" {self.source.name}~>{self.target.name})")


def sigma_to_rho(sigma: LinearMap, c_dim: int, a_dim: int, b_dim: int) -> LinearMap:
    f = sigma.field
    rho = f.zeros(b_dim * c_dim, a_dim)
    for i in range(a_dim):
        rho[:, i] = sigma.matrix[:, i::a_dim].reshape(-1)
    return LinearMap(f, rho)


def rho_to_sigma(rho: LinearMap, c_dim: int, a_dim: int, b_dim: int) -> LinearMap:
    f = rho.field
    sigma = f.zeros(b_dim, c_dim * a_dim)
    for i in range(a_dim):
        sigma[:, i::a_dim] = rho.matrix[:, i].reshape(b_dim, c_dim)
    return LinearMap(f, sigma)


def check_measuring(m: Measuring) -> LawReport:
    """Pass iff rho is an algebra map into the convolution algebra."""
    conv = convolution_algebra(m.coalg, m.target)
    report = is_algebra_map(m.rho, m.source, conv)
    report.subject = m.name or "measuring"
    return report


def measuring_functionals(m: Measuring) -> np.ndarray:
    """Rows v_(i,j): c |-> <beta_j, sigma(c (x) a_i)>, in C*.

    Row order matches the generators of the presented algebra:
    generator (i, j) sits at row i * dim(B) + j.
    """
    f = m.field
    a_dim, b_dim, c_dim = m.source.dim, m.target.dim, m.coalg.dim
    rows = f.zeros(a_dim * b_dim, c_dim)
    for i in range(a_dim):
        for j in range(b_dim):
            rows[i * b_dim + j, :] = m.sigma.matrix[j, i::a_dim]
    return rows


# ---------------------------------------------------------------------------
# presented algebra M(A, B): algebra maps M(A,B) -> C*  <->  measurings


@dataclass
class PresentedAlgebra:
    """Free algebra on generators x_(i,j) modulo the measuring relations.

    Words are tuples of generator indices; each relation is a polynomial
    (mapping word -> coefficient) required to vanish.  The contract is
    the oracle bijection: for finite-dimensional C, algebra maps into C*
    correspond to measurings C (x) A -> B.
    """

    field: Field
    source_dim: int
    target_dim: int
    generators: list[tuple[int, int]]
    relations: list[dict[tuple[int, ...], object]] = dc_field(repr=False, default_factory=list)

    def generator_index(self, i: int, j: int) -> int:
        return i * self.target_dim + j


def present_measuring_algebra(a: Algebra, b: Algebra) -> PresentedAlgebra:
    """Generators for basis pairs of A (x) B*; relations transpose the
    measuring axioms."""
    f = a.field
    gens = [(i, j) for i in range(a.dim) for j in range(b.dim)]
    pa = PresentedAlgebra(f, a.dim, b.dim, gens)
    gi = pa.generator_index
    for i in range(a.dim):
        for i2 in range(a.dim):
            for j in range(b.dim):
                poly: dict[tuple[int, ...], object] = {}
                for k in range(a.dim):
                    co = a.mult.matrix[k, i * a.dim + i2]
                    if co != f.zero:
                        w = (gi(k, j),)
                        poly[w] = f.reduce(poly.get(w, f.zero) + co)
                for p in range(b.dim):
                    for q in range(b.dim):
                        co = b.mult.matrix[j, p * b.dim + q]
                        if co != f.zero:
                            w = (gi(i, p), gi(i2, q))
                            poly[w] = f.reduce(poly.get(w, f.zero) - co)
                poly = {w: co for w, co in poly.items() if co != f.zero}
                if poly:
                    pa.relations.append(poly)
    for j in range(b.dim):
        poly = {}
        for i in range(a.dim):
            co = a.unit[i]
            if co != f.zero:
                poly[(gi(i, j),)] = co
        poly[()] = f.reduce(poly.get((), f.zero) - b.unit[j])
        poly = {w: co for w, co in poly.items() if co != f.zero}
        if poly:
            pa.relations.append(poly)
    return pa


def evaluate_relation(pa: PresentedAlgebra, dual: Algebra,
                      assignment: np.ndarray, poly: dict) -> np.ndarray:
    """Value of a relation polynomial in C* under a generator assignment."""
    f = pa.field
    out = f.zeros(dual.dim)
    for word, co in poly.items():
        val = dual.unit
        for g in word:
            val = dual.multiply(val, assignment[g])
        out = f.reduce(out + co * val)
    return out


def violated_relation(pa: PresentedAlgebra, dual: Algebra,
                      assignment: np.ndarray) -> int | None:
    for idx, poly in enumerate(pa.relations):
        if np.any(evaluate_relation(pa, dual, assignment, poly) != pa.field.zero):
            return idx
    return None


@dataclass
class MeasuringRepresentation:
    """An algebra map from the presented algebra into C*."""

    presented: PresentedAlgebra
    dual: Algebra                # C* with convolution
    values: np.ndarray           # one row per generator


def measuring_to_rep(m: Measuring) -> MeasuringRepresentation:
    """Send x_(i,j) to the measuring functional; relations must vanish."""
    pa = present_measuring_algebra(m.source, m.target)
    dual = dual_algebra(m.coalg)
    values = measuring_functionals(m)
    bad = violated_relation(pa, dual, values)
    if bad is not None:
        raise ValueError(f"not a measuring: relation {bad} maps to a nonzero functional")
    return MeasuringRepresentation(pa, dual, values)


# ---------------------------------------------------------------------------
# fragments of the universal measuring coalgebra


@dataclass
class MeasuringFragment:
    """A finite-dimensional subcoalgebra of P(A, B), presented as a
    quotient D of a concrete measuring carrier with its induced
    universal measuring."""

    source: Algebra
    target: Algebra
    carrier: Coalgebra
    measuring: Measuring
    provenance: list[tuple[Measuring, CoalgebraMorphism]]

    @property
    def dim(self) -> int:
        return self.carrier.dim


def measuring_fragment(m: Measuring, name: str = "") -> MeasuringFragment:
    """Image fragment generated by a measuring.

    The measuring functionals together with the counit generate a unital
    subalgebra S of C* under convolution; S-perp is then a coideal and
    D = C / S-perp inherits the coalgebra structure and the measuring.
    """
    f = m.field
    c = m.coalg
    dual = dual_algebra(c)
    seed = measuring_functionals(m)
    s_basis = multiplicative_closure(f, seed, dual.mult, c.counit)
    proj, sec = functional_quotient(f, s_basis, c.dim)
    eye_a = LinearMap.identity(f, m.source.dim)
    comult = proj.tensor(proj) @ c.comult @ sec
    if comult @ proj != proj.tensor(proj) @ c.comult:
        raise AssertionError("S-perp is not a coideal: comultiplication does not descend")
    counit = (c.counit_map @ sec).matrix[0]
    sigma = m.sigma @ sec.tensor(eye_a)
    if sigma @ proj.tensor(eye_a) != m.sigma:
        raise AssertionError("measuring does not factor through the fragment quotient")
    carrier = Coalgebra(f, comult, counit, name=name or f"P[{m.name or '?'}]")
    universal = Measuring(carrier, m.source, m.target, sigma,
                          name=f"univ[{m.name or '?'}]")
    quotient = CoalgebraMorphism(c, carrier, proj, name="fragment quotient")
    return MeasuringFragment(m.source, m.target, carrier, universal,
                             [(m, quotient)])


def direct_sum_measuring(m1: Measuring, m2: Measuring):
    """Measuring on the coproduct coalgebra, restricting to each summand."""
    if m1.source != m2.source or m1.target != m2.target:
        raise ValueError("measurings have different ambient algebra pairs")
    total, inc1, inc2 = direct_sum_coalgebra(m1.coalg, m2.coalg)
    f = m1.field
    eye_a = LinearMap.identity(f, m1.source.dim)
    pr1 = inc1.transpose()
    pr2 = inc2.transpose()
    sigma = m1.sigma @ pr1.tensor(eye_a) + m2.sigma @ pr2.tensor(eye_a)
    summed = Measuring(total, m1.source, m1.target, sigma,
                       name=f"({m1.name or '?'}(+){m2.name or '?'})")
    return summed, inc1, inc2


def merge_fragments(f1: MeasuringFragment, f2: MeasuringFragment) -> MeasuringFragment:
    """Fragment of the direct-sum measuring; receives maps from both inputs."""
    if f1.source != f2.source or f1.target != f2.target:
        raise ValueError("fragments have different ambient algebra pairs")
    summed, inc1, inc2 = direct_sum_measuring(f1.measuring, f2.measuring)
    merged = measuring_fragment(summed)
    quotient = merged.provenance[0][1]
    into1 = quotient @ inc1
    into2 = quotient @ inc2
    provenance = [(f1.measuring, into1), (f2.measuring, into2)]
    for m, q in f1.provenance:
        provenance.append((m, into1 @ q))
    for m, q in f2.provenance:
        provenance.append((m, into2 @ q))
    merged.provenance = provenance
    return merged


def _paired_closure(f: Field, left_gens: np.ndarray, right_gens: np.ndarray,
                    left_prod: LinearMap, right_prod: LinearMap,
                    left_unit, right_unit, left_dim: int):
    """Close generator pairs under simultaneous products.

    Returns aligned matrices (L, R): the rows of L span the closure of
    the left generators (plus unit), and each right row is the image the
    left row must have under any structure-compatible transpose map.
    """
    lrows = [f.asarray(left_unit)] + [r for r in left_gens]
    rrows = [f.asarray(right_unit)] + [r for r in right_gens]
    L = np.vstack([r.reshape(1, -1) for r in lrows]) if lrows else f.zeros(0, left_dim)
    R = np.vstack([r.reshape(1, -1) for r in rrows])
    for _ in range(left_dim + 1):
        if row_space(f, L).shape[0] == left_dim:
            break
        added = False
        base = L.shape[0]
        for i in range(base):
            for j in range(base):
                cand = left_prod.apply(f.kron(L[i], L[j]))
                if solve_matrix(f, L.T, cand.reshape(-1, 1)) is None:
                    L = np.vstack([L, cand.reshape(1, -1)])
                    R = np.vstack([R, right_prod.apply(f.kron(R[i], R[j])).reshape(1, -1)])
                    added = True
        if not added:
            break
    return L, R


def factor_measuring(m: Measuring, frag: MeasuringFragment) -> CoalgebraMorphism | None:
    """The unique coalgebra morphism h: C -> D with sigma = sigma_D (h (x) 1).

    Transposes of fragment functionals determine h linearly: products of
    generators on the D side pair with the same products on the C side.
    Returns None when the factorization constraint is unsolvable or the
    solved map fails the coalgebra-morphism or factorization laws.
    """
    if m.source != frag.source or m.target != frag.target:
        raise ValueError("measuring and fragment have different ambient pairs")
    f = m.field
    c, d = m.coalg, frag.carrier
    dual_c = dual_algebra(c)
    dual_d = dual_algebra(d)
    ld, rc = _paired_closure(
        f, measuring_functionals(frag.measuring), measuring_functionals(m),
        dual_d.mult, dual_c.mult, d.counit, c.counit, d.dim)
    if kernel_basis(f, ld).shape[0] != 0:
        raise AssertionError("fragment dual is not generated by its measuring functionals")
    h = solve_matrix(f, ld, rc)
    if h is None:
        return None
    hmap = LinearMap(f, h)
    if d.comult @ hmap != hmap.tensor(hmap) @ c.comult:
        return None
    if not f.equal((d.counit_map @ hmap).matrix[0], c.counit):
        return None
    eye_a = LinearMap.identity(f, m.source.dim)
    if frag.measuring.sigma @ hmap.tensor(eye_a) != m.sigma:
        return None
    return CoalgebraMorphism(c, d, hmap, name="factorization", validate=False)


def grouplike_vectors(c: Coalgebra, max_rational_dim: int = 4) -> list[np.ndarray]:
    """Solutions of Delta x = x (x) x, eps x = 1.

    Full enumeration over prime fields; over Q the quadratic system is
    solved symbolically, supported only up to ``max_rational_dim``.
    """
    f = c.field
    out = []
    if hasattr(f, "elements"):
        from .oracles import enumerate_vectors

        for v in enumerate_vectors(f, c.dim):
            if not f.equal(c.comult.apply(v), f.kron(v, v)):
                continue
            if f.reduce(np.dot(c.counit, v)) != f.one:
                continue
            out.append(v)
        return out
    if c.dim > max_rational_dim:
        raise ValueError(
            f"grouplike enumeration over Q unsupported above dim {max_rational_dim}")
    import sympy
    from fractions import Fraction

    xs = sympy.symbols(f"x0:{c.dim}", rational=True)
    eqs = []
    for r in range(c.dim * c.dim):
        i, j = divmod(r, c.dim)
        lhs = sum(sympy.Rational(c.comult.matrix[r, t]) * xs[t] for t in range(c.dim))
        eqs.append(sympy.Eq(lhs, xs[i] * xs[j]))
    eqs.append(sympy.Eq(sum(sympy.Rational(c.counit[t]) * xs[t] for t in range(c.dim)), 1))
    for sol in sympy.solve(eqs, list(xs), dict=True):
        vals = [sympy.nsimplify(sol.get(x, 0)) for x in xs]
        if all(v.is_rational for v in vals):
            out.append(f.asarray([Fraction(int(v.p), int(v.q)) for v in vals]))
    return out


def grouplike_points(frag: MeasuringFragment) -> list[AlgebraMorphism]:
    """Grouplikes of the fragment, returned as the algebra maps A -> B
    they induce through the universal measuring."""
    f = frag.carrier.field
    a_dim = frag.source.dim
    points = []
    for x in grouplike_vectors(frag.carrier):
        u = f.zeros(frag.target.dim, a_dim)
        for i in range(a_dim):
            u[:, i] = f.mm(frag.measuring.sigma.matrix[:, i::a_dim], x)
        points.append(AlgebraMorphism(frag.source, frag.target, LinearMap(f, u),
                                      name="grouplike"))
    return points


def triangle_check(m: Measuring, frag: MeasuringFragment) -> LawReport:
    """Transpose-compatibility triangle for the factorization.

    With h the factorization of the measuring through the fragment and
    alpha the fragment's universal transpose A -> Hom(D, B), the adjunct
    A (x) C -> B must equal evaluation after alpha (x) h, exactly.
    """
    report = LawReport(m.name or "measuring")
    h = factor_measuring(m, frag)
    report.add("factorization_exists", h is not None)
    if h is None:
        return report
    f = m.field
    a_dim, b_dim, c_dim = m.source.dim, m.target.dim, m.coalg.dim
    lhs = f.zeros(b_dim, a_dim * c_dim)
    rhs = f.zeros(b_dim, a_dim * c_dim)
    for i in range(a_dim):
        alpha_i = frag.measuring.sigma.matrix[:, i::a_dim]    # D -> B
        block = f.mm(alpha_i, h.map.matrix)                   # C -> B
        rhs[:, i * c_dim:(i + 1) * c_dim] = block
        lhs[:, i * c_dim:(i + 1) * c_dim] = m.sigma.matrix[:, i::a_dim]
    report.add("adjunct_triangle", f.equal(lhs, rhs))
    return report


def finite_dual(a: Algebra) -> Coalgebra:
    """The finite dual; equals the full dual in finite dimension since
    every ideal is cofinite."""
    return dual_coalgebra(a, name=f"{a.name}deg" if a.name else "")


# ---------------------------------------------------------------------------
# curated measurings


def algebra_map_measuring(u: AlgebraMorphism, name: str = "") -> Measuring:
    """An algebra map as a measuring with grouplike carrier k."""
    c = unit_coalgebra(u.source.field)
    return Measuring(c, u.source, u.target, u.map, name=name or f"[{u.name}]")


def identity_measuring(a: Algebra) -> Measuring:
    return algebra_map_measuring(AlgebraMorphism.identity(a), name=f"id[{a.name}]")


def evaluation_measuring(a: Algebra) -> Measuring:
    """A* (x) A -> k, the evaluation pairing; its fragment is the finite dual."""
    f = a.field
    c = dual_coalgebra(a)
    k = ground_field_algebra(f)
    sigma = f.zeros(1, c.dim * a.dim)
    for i in range(a.dim):
        sigma[0, i * a.dim + i] = f.one
    return Measuring(c, a, k, LinearMap(f, sigma), name=f"ev[{a.name}]")


def derivation_measuring(f: Field) -> Measuring:
    """Dual-numbers carrier over k[x]/(x^2): identity plus d/dx."""
    c = dual_numbers_coalgebra(f)
    a = truncated_polynomial_algebra(f, 2)
    sigma = f.zeros(2, 4)
    sigma[0, 0] = f.one   # sigma(g (x) 1) = 1
    sigma[1, 1] = f.one   # sigma(g (x) x) = x
    sigma[0, 3] = f.one   # sigma(d (x) x) = 1
    return Measuring(c, a, a, LinearMap(f, sigma), name="derivation")


class FragmentRegistry:
    """Accumulated fragment per ambient algebra pair.

    Reads are lock-free; merges are serialized.  Merging is commutative
    and idempotent up to isomorphism, so merge order does not affect the
    final fragment up to isomorphism.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._fragments: dict[tuple, MeasuringFragment] = {}

    @staticmethod
    def _key(a: Algebra, b: Algebra) -> tuple:
        from .oracles import canonical_key

        return (
            canonical_key(a.field, a.mult.matrix), canonical_key(a.field, a.unit),
            canonical_key(b.field, b.mult.matrix), canonical_key(b.field, b.unit),
        )

    def current(self, a: Algebra, b: Algebra) -> MeasuringFragment | None:
        return self._fragments.get(self._key(a, b))

    def register(self, m: Measuring) -> MeasuringFragment:
        frag = measuring_fragment(m)
        key = self._key(m.source, m.target)
        with self._lock:
            existing = self._fragments.get(key)
            merged = merge_fragments(existing, frag) if existing else frag
            self._fragments[key] = merged
            return merged
