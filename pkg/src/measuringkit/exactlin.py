"""Exact dense linear algebra over the rationals and prime fields.

Every computation in this package reduces to the operations here: exact
row reduction, kernels and solves, Kronecker products, subspace
arithmetic, and a closure loop for unital subalgebras.

Tensor convention (fixed globally): the basis of V (x) W is ordered with
the *left* factor varying slowest, so e_i (x) f_j sits at flat index
``i * dim(W) + j``.  numpy's ``kron`` follows the same convention.

A linear map V -> W is stored as a dense (dim W) x (dim V) matrix acting
on column vectors.  Scalars are ``fractions.Fraction`` over Q and
canonical representatives ``0..p-1`` over F_p; arithmetic never rounds.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


class FieldMismatch(ValueError):
    """Operands belong to different scalar fields."""


class DimensionMismatch(ValueError):
    """Operand shapes are inconsistent."""


def _is_prime(p: int) -> bool:
    # Deterministic Miller-Rabin; bases {2, 3, 5, 7} decide all p < 3.2e9.
    if p < 2:
        return False
    for q in (2, 3, 5, 7):
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class Field:
    """Base class for exact scalar fields.

    Subclasses provide scalar coercion, array normalization and exact
    matrix products; everything else in this module is field-generic.
    """

    kind: str

    def __call__(self, x):
        raise NotImplementedError

    def asarray(self, data, shape=None) -> np.ndarray:
        raise NotImplementedError

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Canonicalize entries in place-compatible fashion."""
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def zeros(self, *shape) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = self.one
        return m

    def mm(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact matrix (or matrix-vector) product."""
        return self.reduce(np.dot(a, b))

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(np.kron(a, b))

    def equal(self, a: np.ndarray, b: np.ndarray) -> bool:
        return a.shape == b.shape and bool(np.equal(a, b).all())

    def to_json(self, a):
        raise NotImplementedError

    def from_json(self, obj):
        raise NotImplementedError

    def __repr__(self):
        return self.name

    def __ne__(self, other):
        return not self.__eq__(other)


class Rationals(Field):
    """The field Q with ``fractions.Fraction`` scalars in object arrays."""

    kind = "rationals"
    name = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return Fraction(int(x[0]), int(x[1]))
        return Fraction(x)

    def asarray(self, data, shape=None):
        arr = np.array(data, dtype=object)
        if shape is not None:
            arr = arr.reshape(shape)
        flat = arr.reshape(-1)
        for i, v in enumerate(flat):
            flat[i] = self(v)
        return arr

    def reduce(self, arr):
        return arr

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return Fraction(1) / a

    def zeros(self, *shape):
        return np.full(shape, Fraction(0), dtype=object)

    def to_json(self, a):
        a = self(a)
        return [a.numerator, a.denominator]

    def from_json(self, obj):
        return self(obj)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):
    """F_p for a prime p < 2**31, canonical representatives 0..p-1.

    Arrays are int64 for small p (products plus row sums stay below
    2**63 at the dimensions this package handles) and Python-int object
    arrays otherwise.
    """

    kind = "prime"
    _INT64_LIMIT = 1 << 25

    def __init__(self, p: int):
        p = int(p)
        if p >= 1 << 31 or not _is_prime(p):
            raise ValueError(f"modulus must be a prime below 2**31, got {p}")
        self.p = p
        self.name = f"F{p}"
        self.zero = 0
        self.one = 1 % p
        self._dtype = np.int64 if p <= self._INT64_LIMIT else object

    def __call__(self, x):
        return int(x) % self.p

    def asarray(self, data, shape=None):
        if self._dtype is object:
            arr = np.array(data, dtype=object)
            flat = arr.reshape(-1)
            for i, v in enumerate(flat):
                flat[i] = int(v) % self.p
        else:
            arr = np.asarray(data, dtype=np.int64) % self.p
        if shape is not None:
            arr = arr.reshape(shape)
        return arr

    def reduce(self, arr):
        return arr % self.p

    def inv(self, a):
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def zeros(self, *shape):
        return np.zeros(shape, dtype=self._dtype)

    def elements(self):
        return range(self.p)

    def to_json(self, a):
        return int(a) % self.p

    def from_json(self, obj):
        return self(obj)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))


QQ = Rationals()
GF2 = PrimeField(2)
GF3 = PrimeField(3)


def field_from_spec(kind: str, p: int | None = None) -> Field:
    if kind == "rationals":
        return QQ
    if kind == "prime":
        return PrimeField(p)
    raise ValueError(f"unknown field kind {kind!r}")


def parse_field(text: str) -> Field:
    """Parse 'q' or 'f<p>' (e.g. 'f2', 'f7')."""
    t = text.strip().lower()
    if t == "q":
        return QQ
    if t.startswith("f") and t[1:].isdigit():
        return PrimeField(int(t[1:]))
    raise ValueError(f"cannot parse field {text!r}; expected 'q' or 'f<p>'")


def _check_same_field(a: Field, b: Field):
    if a != b:
        raise FieldMismatch(f"fields differ: {a} vs {b}")


class LinearMap:
    """A linear map between based spaces, as a (codomain x domain) matrix."""

    __slots__ = ("field", "matrix")

    def __init__(self, field: Field, matrix, shape=None):
        self.field = field
        m = field.asarray(matrix, shape)
        if m.ndim != 2:
            raise DimensionMismatch(f"matrix must be 2-d, got shape {m.shape}")
        m.setflags(write=False)
        self.matrix = m

    @property
    def domain_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def codomain_dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, field: Field, n: int) -> "LinearMap":
        return cls(field, field.eye(n))

    @classmethod
    def zero(cls, field: Field, codomain_dim: int, domain_dim: int) -> "LinearMap":
        return cls(field, field.zeros(codomain_dim, domain_dim))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        _check_same_field(self.field, other.field)
        if self.domain_dim != other.codomain_dim:
            raise DimensionMismatch(
                f"cannot compose {self.codomain_dim}x{self.domain_dim} "
                f"after {other.codomain_dim}x{other.domain_dim}"
            )
        return LinearMap(self.field, self.field.mm(self.matrix, other.matrix))

    def __add__(self, other: "LinearMap") -> "LinearMap":
        _check_same_field(self.field, other.field)
        if self.matrix.shape != other.matrix.shape:
            raise DimensionMismatch("shape mismatch in sum")
        return LinearMap(self.field, self.field.reduce(self.matrix + other.matrix))

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + (-other)

    def __neg__(self) -> "LinearMap":
        return LinearMap(self.field, self.field.reduce(-self.matrix))

    def scale(self, a) -> "LinearMap":
        a = self.field(a)
        return LinearMap(self.field, self.field.reduce(self.matrix * a))

    def tensor(self, other: "LinearMap") -> "LinearMap":
        """Kronecker product; left-factor indices vary slowest."""
        _check_same_field(self.field, other.field)
        return LinearMap(self.field, self.field.kron(self.matrix, other.matrix))

    def transpose(self) -> "LinearMap":
        """The dual map W* -> V* in index-matched dual bases."""
        return LinearMap(self.field, self.matrix.T.copy())

    def apply(self, vec) -> np.ndarray:
        v = self.field.asarray(vec)
        if v.shape != (self.domain_dim,):
            raise DimensionMismatch(f"expected vector of length {self.domain_dim}")
        return self.field.mm(self.matrix, v)

    def __eq__(self, other):
        return (
            isinstance(other, LinearMap)
            and self.field == other.field
            and self.field.equal(self.matrix, other.matrix)
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def is_zero(self) -> bool:
        return bool(np.equal(self.matrix, self.field.zero).all())

    def is_identity(self) -> bool:
        return self.domain_dim == self.codomain_dim and self.field.equal(
            self.matrix, self.field.eye(self.domain_dim)
        )

    def kernel(self) -> np.ndarray:
        """Rows form a basis of the null space (RREF-canonical)."""
        return kernel_basis(self.field, self.matrix)

    def solve(self, target) -> np.ndarray | None:
        """Some preimage of ``target``, or None if it is not in the image."""
        t = self.field.asarray(target)
        if t.shape != (self.codomain_dim,):
            raise DimensionMismatch(f"expected vector of length {self.codomain_dim}")
        sol = solve_matrix(self.field, self.matrix, t.reshape(-1, 1))
        return None if sol is None else sol[:, 0]

    def rank(self) -> int:
        return len(rref(self.field, self.matrix)[1])

    def image(self) -> np.ndarray:
        """Rows form a canonical basis of the image subspace."""
        return row_space(self.field, self.matrix.T)

    def __repr__(self):
        return f"LinearMap({self.field}, {self.codomain_dim}x{self.domain_dim})"


def swap_map(field: Field, m: int, n: int) -> LinearMap:
    """The symmetry V_m (x) V_n -> V_n (x) V_m on basis tensors."""
    return tensor_permutation(field, (m, n), (1, 0))


def tensor_permutation(field: Field, dims, perm) -> LinearMap:
    """Permutation map reordering the factors of a tensor product.

    ``perm[k]`` names which input factor lands in output slot k, so the
    output space is ``V_{dims[perm[0]]} (x) V_{dims[perm[1]]} (x) ...``.
    """
    dims = tuple(int(d) for d in dims)
    perm = tuple(int(k) for k in perm)
    if sorted(perm) != list(range(len(dims))):
        raise ValueError(f"{perm} is not a permutation of {len(dims)} factors")
    total = 1
    for d in dims:
        total *= d
    src = np.arange(total).reshape(dims).transpose(perm).reshape(-1)
    mat = field.zeros(total, total)
    for r, c in enumerate(src):
        mat[r, c] = field.one
    return LinearMap(field, mat)


def rref(field: Field, mat) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns, exactly."""
    r = field.asarray(mat).copy()
    if r.ndim != 2:
        raise DimensionMismatch("rref expects a 2-d array")
    nrows, ncols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.flatnonzero(r[row:, col] != field.zero)
        if nz.size == 0:
            continue
        i = row + int(nz[0])
        if i != row:
            r[[row, i]] = r[[i, row]]
        r[row] = field.reduce(r[row] * field.inv(r[row, col]))
        col_vals = r[:, col].copy()
        col_vals[row] = field.zero
        if np.any(col_vals != field.zero):
            r = field.reduce(r - np.outer(col_vals, r[row]))
        pivots.append(col)
        row += 1
    return r, pivots


def row_space(field: Field, rows) -> np.ndarray:
    """Canonical (RREF) basis of the span of the given row vectors."""
    rows = field.asarray(rows)
    if rows.ndim == 1:
        rows = rows.reshape(1, -1)
    r, pivots = rref(field, rows)
    return r[: len(pivots)].copy()

def stack_rows(field: Field, parts, ambient: int) -> np.ndarray:
    chunks = [field.asarray(p).reshape(-1, ambient) for p in parts if np.size(p)]
    if not chunks:
        return field.zeros(0, ambient)
    return np.vstack(chunks)


def same_span(field: Field, u, w) -> bool:
    return field.equal(row_space(field, u), row_space(field, w))


def span_contains(field: Field, basis, vecs) -> bool:
    """True if every given row vector lies in the span of ``basis``."""
    vecs = field.asarray(vecs)
    if vecs.ndim == 1:
        vecs = vecs.reshape(1, -1)
    if vecs.shape[0] == 0:
        return True
    basis = stack_rows(field, [basis], vecs.shape[1])
    sol = solve_matrix(field, basis.T, vecs.T)
    return sol is not None


def sum_spaces(field: Field, u, w) -> np.ndarray:
    ambient = np.shape(u)[-1] if np.size(u) else np.shape(w)[-1]
    return row_space(field, stack_rows(field, [u, w], ambient))


def intersect_spaces(field: Field, u, w) -> np.ndarray:
    """Canonical basis of the intersection of two row spans."""
    u = row_space(field, u)
    w = row_space(field, w)
    if u.shape[1] != w.shape[1]:
        raise DimensionMismatch("ambient dimensions differ")
    if u.shape[0] == 0 or w.shape[0] == 0:
        return field.zeros(0, u.shape[1])
    # Solve a*U - b*W = 0; the U-part of each kernel row spans the meet.
    stacked = np.hstack([u.T, field.reduce(-w.T)])
    ker = kernel_basis(field, stacked)
    vecs = field.mm(ker[:, : u.shape[0]], u)
    return row_space(field, vecs)


def annihilator(field: Field, rows, ambient: int) -> np.ndarray:
    """Basis of {phi in V* : phi(S) = 0} for S spanned by the rows."""
    rows = stack_rows(field, [rows], ambient)
    return kernel_basis(field, rows)


def kernel_basis(field: Field, mat) -> np.ndarray:
    mat = field.asarray(mat)
    nrows, ncols = mat.shape
    r, pivots = rref(field, mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = field.zeros(len(free), ncols)
    for k, f in enumerate(free):
        basis[k, f] = field.one
        for i, p in enumerate(pivots):
            basis[k, p] = field.reduce(-r[i, f])
    return row_space(field, basis) if len(free) else basis


def solve_matrix(field: Field, a, b) -> np.ndarray | None:
    """Solve A X = B exactly; None when inconsistent.

    Free variables are set to zero, so the result is deterministic.
    """
    a = field.asarray(a)
    b = field.asarray(b)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch("A and B row counts differ")
    n = a.shape[1]
    aug = np.hstack([a, b])
    r, pivots = rref(field, aug)
    if any(p >= n for p in pivots):
        return None
    x = field.zeros(n, b.shape[1])
    for i, p in enumerate(pivots):
        x[p] = r[i, n:]
    return x


def quotient_map(field: Field, sub_rows, ambient: int) -> tuple[LinearMap, LinearMap]:
    """Projection V -> V/S and a section, for S spanned by ``sub_rows``.

    The quotient basis is indexed by the non-pivot coordinates of the
    RREF of S, which makes results reproducible.
    """
    r, pivots = rref(field, stack_rows(field, [sub_rows], ambient))
    free = [c for c in range(ambient) if c not in pivots]
    reducer = field.eye(ambient)
    for i, p in enumerate(pivots):
        reducer[:, p] = field.reduce(reducer[:, p] - r[i])
    # rows of `reducer` indexed by free coordinates give the class coords
    proj = LinearMap(field, reducer[free, :] if free else field.zeros(0, ambient))
    sec = field.zeros(ambient, len(free))
    for k, f in enumerate(free):
        sec[f, k] = field.one
    return proj, LinearMap(field, sec)


def functional_quotient(field: Field, functional_rows, ambient: int) -> tuple[LinearMap, LinearMap]:
    """Quotient of V by the joint kernel of some functionals.

    The projection's rows are the RREF basis of the functional span, so
    the quotient coordinates are evaluations of that canonical basis.
    The section picks the pivot standard basis vectors of V.
    """
    basis = row_space(field, stack_rows(field, [functional_rows], ambient))
    _, pivots = rref(field, basis)
    proj = LinearMap(field, basis)
    sec = field.zeros(ambient, basis.shape[0])
    for k, p in enumerate(pivots):
        sec[p, k] = field.one
    return proj, LinearMap(field, sec)


def restrict_to_span(field: Field, mat, basis) -> np.ndarray | None:
    """Coordinates of the columns of ``mat`` in the given row basis.

    Returns C with basis.T @ C == mat, or None if a column escapes
    the span.
    """
    return solve_matrix(field, field.asarray(basis).T, mat)


def multiplicative_closure(field: Field, seed, product: LinearMap, unit) -> np.ndarray:
    """Smallest unital subspace closed under a bilinear product.

    ``product`` is a map V (x) V -> V on the ambient space; the result
    contains ``unit`` and the seed rows and absorbs the product.  Each
    round either grows the dimension or terminates, so at most dim V
    rounds run.
    """
    n = product.codomain_dim
    if product.domain_dim != n * n:
        raise DimensionMismatch("product must be a map V(x)V -> V")
    basis = row_space(field, stack_rows(field, [unit, seed], n))
    for _ in range(n + 1):
        if basis.shape[0] == 0:
            return basis
        pairs = field.kron(basis, basis)  # row (i*k+j) = b_i (x) b_j
        prods = field.mm(product.matrix, pairs.T).T
        bigger = row_space(field, np.vstack([basis, prods]))
        if bigger.shape[0] == basis.shape[0]:
            return bigger
        basis = bigger
    raise AssertionError("closure failed to terminate")  # pragma: no cover
