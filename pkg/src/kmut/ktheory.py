"""K-group classes on the spaces of the blow-up tower and their Euler pairings.

Three kinds of space are modelled:

* :class:`ProjProduct` -- ``P^{n_1} x ... x P^{n_k}``;
* :class:`BundleSpace` -- the projectivisation ``P(E)`` of a split bundle
  ``E = O(a_0) + ... + O(a_r)`` over a :class:`ProjProduct`, normalised so
  that ``rho_* O_rho(z) = Sym^z E^dual``;
* :class:`HyperSpace` -- a divisor in a :class:`BundleSpace`, handled in K-theory
  through ``[O_H] = [O] - [O(-H)]``.

A line bundle is a :class:`LineAtom`: a multidegree pulled back from the base
plus a degree ``rho_deg`` along ``O_rho``.  The display form ``O(x,y)(ze)``
used in the scripts corresponds to ``rho_deg = x + z`` since ``O(e) = O_rho(1)``
and the hyperplane class of ``P^5`` pulls back to ``rho^*O(1) + e``.

On the universal hypersurface the fiber sheaf ``O_F(d)`` of a point of ``X``
(a copy of the pencil line) is a :class:`FiberAtom`.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping, Union

from .arith import MultiDegree, chi_proj, chi_proj_product
from .errors import UnsupportedOperation, UnsupportedPairing

__all__ = [
    "LineAtom",
    "FiberAtom",
    "ProjProduct",
    "BundleSpace",
    "HyperSpace",
    "KClass",
    "SPACE_P",
    "SPACE_H",
    "SPACE_P4xP1",
    "SPACES",
    "line",
    "fiber",
    "chi_line",
    "chi_atom",
    "chi",
    "chi_pair",
    "tensor_line",
    "dual",
    "exc_div_class",
    "pushforward_to_base",
    "euler_on_Y",
]


@dataclass(frozen=True, order=True)
class LineAtom:
    base_deg: MultiDegree
    rho_deg: int = 0

    def __post_init__(self):
        object.__setattr__(self, "base_deg", MultiDegree(self.base_deg))
        object.__setattr__(self, "rho_deg", int(self.rho_deg))

    @classmethod
    def from_display(cls, base: Iterable[int], z: int = 0) -> "LineAtom":
        """``O(x,y,..)(z e)`` in the blow-up convention."""
        base = MultiDegree(base)
        return cls(base, base[0] + z)

    @property
    def e_coeff(self) -> int:
        return self.rho_deg - self.base_deg[0]

    def __mul__(self, other: "LineAtom") -> "LineAtom":
        if not isinstance(other, LineAtom):
            return NotImplemented
        return LineAtom(self.base_deg + other.base_deg, self.rho_deg + other.rho_deg)

    def inverse(self) -> "LineAtom":
        return LineAtom(-self.base_deg, -self.rho_deg)

    def display(self, bundle: bool = True) -> str:
        degs = ",".join(str(d) for d in self.base_deg)
        if not bundle:
            return f"O({degs})"
        z = self.e_coeff
        if z == 0:
            return f"O({degs})"
        if z == 1:
            return f"O({degs})(e)"
        if z == -1:
            return f"O({degs})(-e)"
        return f"O({degs})({z}e)"


@dataclass(frozen=True, order=True)
class FiberAtom:
    """``O_F(d)``: the pencil line through a point of ``X``, twisted by ``O(d)``."""

    twist: int

    def display(self, bundle: bool = True) -> str:
        return f"O_F({self.twist})"


Atom = Union[LineAtom, FiberAtom]


@dataclass(frozen=True)
class ProjProduct:
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(n) for n in self.dims))

    @property
    def arity(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @property
    def base(self) -> "ProjProduct":
        return self

    @property
    def canonical(self) -> LineAtom:
        return LineAtom(MultiDegree(-n - 1 for n in self.dims), 0)

    def __str__(self):
        return "x".join(f"P{n}" for n in self.dims)


@dataclass(frozen=True)
class BundleSpace:
    base: ProjProduct
    summands: tuple[MultiDegree, ...]

    def __post_init__(self):
        summands = tuple(MultiDegree(a) for a in self.summands)
        if len(summands) < 2:
            raise ValueError("a projective bundle needs rank at least 2")
        if any(len(a) != self.base.arity for a in summands):
            raise ValueError("summand degrees must match the base arity")
        object.__setattr__(self, "summands", summands)

    @classmethod
    def rank_two(cls, base: ProjProduct, delta: Iterable[int]) -> "BundleSpace":
        """``P(O(delta) + O)``."""
        delta = MultiDegree(delta)
        return cls(base, (delta, MultiDegree([0] * base.arity)))

    @property
    def arity(self) -> int:
        return self.base.arity

    @property
    def fiber_rank(self) -> int:
        """``r`` for a ``P^r``-bundle."""
        return len(self.summands) - 1

    @property
    def dim(self) -> int:
        return self.base.dim + self.fiber_rank

    @cached_property
    def det(self) -> MultiDegree:
        return sum(self.summands, MultiDegree([0] * self.arity))

    @property
    def canonical(self) -> LineAtom:
        # relative Euler sequence: K_rel = pi^* det(E)^dual (x) O_rho(-r-1)
        return LineAtom(self.base.canonical.base_deg - self.det, -(self.fiber_rank + 1))

    def __str__(self):
        return f"P({' + '.join(f'O{tuple(a)}' for a in self.summands)}) over {self.base}"


@dataclass(frozen=True)
class HyperSpace:
    """Divisor with ``[O(-H)] = minus_h`` in an ambient projective bundle.

    ``shriek_twist`` is the line bundle ``L`` for which the Euler
    characteristic after projecting to the blown-up locus is
    ``chi(-) - chi(- (x) L)``.  ``fiber_factor`` indexes the base factor that
    the fiber sheaves ``O_F(d)`` map isomorphically onto.
    """

    ambient: BundleSpace
    minus_h: LineAtom
    shriek_twist: LineAtom | None = None
    fiber_factor: int = -1

    @property
    def base(self) -> ProjProduct:
        return self.ambient.base

    @property
    def arity(self) -> int:
        return self.ambient.arity

    @property
    def dim(self) -> int:
        return self.ambient.dim - 1

    @property
    def canonical(self) -> LineAtom:
        # adjunction: K_H = (K_ambient (x) O(H))|_H
        return self.ambient.canonical * self.minus_h.inverse()

    def __str__(self):
        return f"divisor {self.minus_h.inverse().display()} in {self.ambient}"


Space = Union[ProjProduct, BundleSpace, HyperSpace]

# Bl_0 P^5 = P(O(1) + O) over P^4
SPACE_P = BundleSpace.rank_two(ProjProduct((4,)), (1,))
# the universal hypersurface in P x P^1, an O(3,1)(-2e) divisor
SPACE_H = HyperSpace(
    BundleSpace.rank_two(ProjProduct((4, 1)), (1, 0)),
    minus_h=LineAtom.from_display((-3, -1), 2),
    shriek_twist=LineAtom.from_display((2, 1), -3),
)
SPACE_P4xP1 = ProjProduct((4, 1))
SPACES: dict[str, Space] = {"P": SPACE_P, "H": SPACE_H, "P4xP1": SPACE_P4xP1}


def _has_bundle(space: Space) -> bool:
    return not isinstance(space, ProjProduct)


def _check_atom(space: Space, atom: Atom):
    if isinstance(atom, FiberAtom):
        if not isinstance(space, HyperSpace):
            raise UnsupportedOperation(f"fiber sheaves live on the hypersurface, not {space}")
        return
    if len(atom.base_deg) != space.arity:
        raise ValueError(f"atom {atom.display()} has arity {len(atom.base_deg)}, space needs {space.arity}")
    if isinstance(space, ProjProduct) and atom.rho_deg:
        raise ValueError(f"{space} has no O_rho direction")


def _sym_degrees(summands, z: int) -> Iterator[MultiDegree]:
    """Degrees of the line-bundle summands of ``Sym^z`` of ``+ O(a_i)``."""
    zero = MultiDegree([0] * len(summands[0]))
    for combo in combinations_with_replacement(range(len(summands)), z):
        yield sum((summands[i] for i in combo), zero)


# -- Euler characteristics ------------------------------------------------


def chi_line(space: Space, atom: LineAtom) -> int:
    """Euler characteristic ``chi(space, atom)`` of a line bundle."""
    _check_atom(space, atom)
    return _chi_line(space, atom)


@lru_cache(maxsize=None)
def _chi_line(space: Space, atom: LineAtom) -> int:
    if isinstance(space, ProjProduct):
        return chi_proj_product(space.dims, atom.base_deg)
    if isinstance(space, HyperSpace):
        return _chi_line(space.ambient, atom) - _chi_line(space.ambient, atom * space.minus_h)
    dims = space.base.dims
    d, z, r = atom.base_deg, atom.rho_deg, space.fiber_rank
    if r == 1 and not any(space.summands[1]):
        # P(O(delta) + O): rho_* O_rho(z) = sum_h O(-h delta), or its dual in degree 1
        delta = space.summands[0]
        if z >= 0:
            return sum(chi_proj_product(dims, d - h * delta) for h in range(z + 1))
        if z == -1:
            return 0
        return -sum(chi_proj_product(dims, d + (k + 1) * delta) for k in range(-z - 1))
    if z >= 0:
        return sum(chi_proj_product(dims, d - s) for s in _sym_degrees(space.summands, z))
    if z > -r - 1:
        return 0
    sign = (-1) ** r
    return sign * sum(
        chi_proj_product(dims, d + space.det + s) for s in _sym_degrees(space.summands, -z - r - 1)
    )


def chi_atom(space: Space, atom: Atom) -> int:
    if isinstance(atom, FiberAtom):
        _check_atom(space, atom)
        return chi_proj(1, atom.twist)
    return chi_line(space, atom)


# -- K-classes ------------------------------------------------------------


class KClass:
    """Integer combination of atoms on a fixed space."""

    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms: Mapping[Atom, int] | None = None):
        clean: dict = {}
        for atom, m in (terms or {}).items():
            _check_atom(space, atom)
            m = int(m)
            if m:
                clean[atom] = clean.get(atom, 0) + m
                if not clean[atom]:
                    del clean[atom]
        self.space = space
        self.terms = clean

    @classmethod
    def of(cls, space: Space, atom: Atom, mult: int = 1) -> "KClass":
        return cls(space, {atom: mult})

    def _coerce(self, other) -> "KClass":
        if isinstance(other, (LineAtom, FiberAtom)):
            other = KClass.of(self.space, other)
        if not isinstance(other, KClass):
            return NotImplemented
        if other.space != self.space:
            raise ValueError(f"classes live on different spaces: {self.space} vs {other.space}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = Counter(self.terms)
        for atom, m in other.terms.items():
            out[atom] += m
        return KClass(self.space, out)

    def __neg__(self):
        return KClass(self.space, {a: -m for a, m in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return KClass(self.space, {a: k * m for a, m in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, KClass):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def items(self) -> list[tuple[Atom, int]]:
        def key(item):
            atom = item[0]
            if isinstance(atom, FiberAtom):
                return (0, (atom.twist,), 0)
            return (1, tuple(atom.base_deg), atom.e_coeff if _has_bundle(self.space) else 0)

        return sorted(self.terms.items(), key=key)

    def multiplicity(self, atom: Atom) -> int:
        return self.terms.get(atom, 0)

    @property
    def has_fiber(self) -> bool:
        return any(isinstance(a, FiberAtom) for a in self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        bundle = _has_bundle(self.space)
        out = ""
        for i, (atom, m) in enumerate(self.items()):
            name = atom.display(bundle)
            sign = "-" if m < 0 else "+"
            body = name if abs(m) == 1 else f"{abs(m)}{name}"
            if i == 0:
                out = ("-" if m < 0 else "") + body
            else:
                out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"KClass({self})"


def line(space: Space, base: Iterable[int], z: int = 0) -> KClass:
    """Class of ``O(base)(z e)`` in display notation (``z`` ignored on products)."""
    base = MultiDegree(base)
    if isinstance(space, ProjProduct):
        if z:
            raise ValueError(f"{space} has no exceptional divisor")
        return KClass.of(space, LineAtom(base, 0))
    return KClass.of(space, LineAtom.from_display(base, z))


def fiber(space: Space, d: int = 0) -> KClass:
    return KClass.of(space, FiberAtom(d))


def _as_class(space: Space | None, obj) -> KClass:
    if isinstance(obj, KClass):
        return obj
    if space is None:
        raise TypeError("a bare atom needs a space")
    return KClass.of(space, obj)


def _fiber_degree(space: HyperSpace, atom: LineAtom) -> int:
    return atom.base_deg[space.fiber_factor]


def _pair_atoms(space: Space, u: Atom, w: Atom) -> int:
    if isinstance(u, LineAtom) and isinstance(w, LineAtom):
        return chi_line(space, w * u.inverse())
    if isinstance(u, LineAtom):
        # Hom(L, O_F(d)) = H^*(P^1, O(d - y_L))
        return chi_proj(1, w.twist - _fiber_degree(space, u))
    if isinstance(w, LineAtom):
        # Hom(O_F(d), L) = H^*(P^1, O(y_L - d - 1))
        return chi_proj(1, _fiber_degree(space, w) - u.twist - 1)
    raise UnsupportedPairing(f"pairing of {u.display()} with {w.display()} is undefined")


def chi_pair(a, b, space: Space | None = None) -> int:
    """Euler pairing ``chi(a, b) = sum (-1)^i dim Ext^i(a, b)``, bilinear."""
    a = _as_class(space or getattr(b, "space", None), a)
    b = _as_class(a.space, b)
    if a.space != b.space:
        raise ValueError(f"classes live on different spaces: {a.space} vs {b.space}")
    total = 0
    for u, m in a.terms.items():
        for w, n in b.terms.items():
            total += m * n * _pair_atoms(a.space, u, w)
    return total


def chi(a: KClass) -> int:
    """Euler characteristic ``chi(space, a)``."""
    return sum(m * chi_atom(a.space, atom) for atom, m in a.terms.items())


def tensor_line(a: KClass, l: LineAtom) -> KClass:
    _check_atom(a.space, l)
    out: dict = {}
    for atom, m in a.terms.items():
        if isinstance(atom, FiberAtom):
            new = FiberAtom(atom.twist + _fiber_degree(a.space, l))
        else:
            new = atom * l
        out[new] = out.get(new, 0) + m
    return KClass(a.space, out)


def dual(a: KClass) -> KClass:
    if a.has_fiber:
        raise UnsupportedOperation("dual of a fiber sheaf is not modelled")
    return KClass(a.space, {atom.inverse(): m for atom, m in a.terms.items()})


def exc_div_class(space: Space, k: int, extra: Iterable[int] | None = None) -> KClass:
    """``O_e(k e) (x) O(extra)`` as ``[O(extra)(k e)] - [O(extra)((k-1) e)]``."""
    if isinstance(space, ProjProduct):
        raise ValueError(f"{space} has no exceptional divisor")
    extra = MultiDegree(extra if extra is not None else [0] * space.arity)
    if len(extra) != space.arity:
        raise ValueError(f"extra degree {tuple(extra)} does not match arity {space.arity}")
    return line(space, extra, k) - line(space, extra, k - 1)


def _push_bundle_atom(space: BundleSpace, atom: LineAtom) -> Counter:
    out: Counter = Counter()
    d, z, r = atom.base_deg, atom.rho_deg, space.fiber_rank
    if z >= 0:
        for s in _sym_degrees(space.summands, z):
            out[LineAtom(d - s)] += 1
    elif z <= -r - 1:
        sign = (-1) ** r
        for s in _sym_degrees(space.summands, -z - r - 1):
            out[LineAtom(d + space.det + s)] += sign
    return out


def pushforward_to_base(a: KClass) -> KClass:
    """K-theoretic pushforward to the base product of projective spaces."""
    space = a.space
    if isinstance(space, ProjProduct):
        return a
    if a.has_fiber:
        raise UnsupportedOperation("pushforward of fiber sheaves is not modelled")
    out: Counter = Counter()
    for atom, m in a.terms.items():
        if isinstance(space, HyperSpace):
            parts = _push_bundle_atom(space.ambient, atom)
            parts.subtract(_push_bundle_atom(space.ambient, atom * space.minus_h))
        else:
            parts = _push_bundle_atom(space, atom)
        for b, n in parts.items():
            out[b] += m * n
    return KClass(space.base, out)


def euler_on_Y(a: KClass) -> int:
    """Euler characteristic after projecting to the blown-up locus ``Y``.

    ``chi(a) - chi(a (x) L)`` with ``L`` the space's shriek twist; for a fiber
    sheaf ``O_F(d)`` this is ``(d + 1) - (d + 2) = -1``.
    """
    space = a.space
    if not isinstance(space, HyperSpace) or space.shriek_twist is None:
        raise UnsupportedOperation(f"no projection to a blown-up locus configured on {space}")
    return chi(a) - chi(tensor_line(a, space.shriek_twist))
