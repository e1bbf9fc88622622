"""Invariant factors of smooth fans and the nu-torsion H^1 and Brauer groups.

Groups are computed up to isomorphism: ``mu_nu`` and its dual are both taken
to be ``Z/nu`` and ``Hom(Z/n, Q/Z)`` is ``Z/n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .cones import classify
from .fan import Fan
from .linalg import AbelianGroup, smith_normal_form, transpose


class BrauerError(ValueError):
    pass


class NotSmoothError(BrauerError):
    def __init__(self):
        super().__init__("fan not smooth")


@dataclass(frozen=True)
class FieldDescriptor:
    """Finite description of the field data that enters the formulas.

    ``h1_nu`` stands for ``H^1(k, Z/nu)`` and ``brauer_nu`` for the
    ``nu``-torsion of ``Br(k)``. Both must be finite.
    """

    kind: str
    char: int
    h1_nu: AbelianGroup
    brauer_nu: AbelianGroup
    has_primitive_root: bool

    def __post_init__(self):
        if self.char < 0:
            raise BrauerError("characteristic must be nonnegative")
        if self.h1_nu.free_rank or self.brauer_nu.free_rank:
            raise BrauerError("field data must be finite groups")

    @classmethod
    def algebraically_closed(cls, char: int = 0) -> "FieldDescriptor":
        return cls("algebraically_closed", char, AbelianGroup(), AbelianGroup(), True)

    @classmethod
    def real(cls, nu: int = 2) -> "FieldDescriptor":
        # Gal(C/R) = Z/2 and Br(R) = Z/2, so both become Z/gcd(2, nu)
        g = AbelianGroup.cyclic(gcd(2, nu))
        return cls("real", 0, g, g, nu <= 2)

    @classmethod
    def preset(cls, name: str, nu: int) -> "FieldDescriptor":
        if name == "acl":
            return cls.algebraically_closed()
        if name == "real":
            return cls.real(nu)
        raise BrauerError(f"unknown field preset {name!r}")

    @classmethod
    def from_json(cls, data: dict) -> "FieldDescriptor":
        allowed = {"kind", "char", "h1_nu", "brauer_nu", "has_primitive_root"}
        extra = set(data) - allowed
        if extra:
            raise BrauerError(f"unknown field descriptor keys: {sorted(extra)}")
        return cls(
            kind=data.get("kind", "custom"),
            char=int(data.get("char", 0)),
            h1_nu=AbelianGroup.from_json(data.get("h1_nu", {})),
            brauer_nu=AbelianGroup.from_json(data.get("brauer_nu", {})),
            has_primitive_root=bool(data.get("has_primitive_root", False)),
        )


@dataclass(frozen=True)
class InvariantFactors:
    a: tuple[int, ...]

    def __post_init__(self):
        a = self.a
        nz = [x for x in a if x]
        if any(x < 0 for x in a) or a[: len(nz)] != tuple(nz):
            raise ValueError(f"bad invariant factors {a}")
        if any(nz[i + 1] % nz[i] for i in range(len(nz) - 1)):
            raise ValueError(f"bad invariant factors {a}")


def is_smooth(f: Fan) -> bool:
    return all(classify(c).smooth for c in f.cones)


def invariant_factors(f: Fan) -> InvariantFactors:
    """Elementary divisors of the sublattice spanned by the rays, padded with zeros to length r."""
    if not is_smooth(f):
        raise NotSmoothError()
    r = f.ambient_rank
    if not f.rays:
        return InvariantFactors((0,) * r)
    diag = smith_normal_form(transpose(f.rays, r)).diag
    return InvariantFactors(tuple(diag) + (0,) * (r - len(diag)))


def _check(nu: int, k: FieldDescriptor) -> None:
    if nu < 2:
        raise BrauerError("nu must be at least 2")
    if k.char and nu % k.char == 0:
        raise BrauerError("nu not invertible in k")


def h1_mu(f: Fan, nu: int, k: FieldDescriptor) -> AbelianGroup:
    """``H^1(X, Z/nu)`` for the smooth toric variety of ``f`` over ``k``."""
    _check(nu, k)
    a = invariant_factors(f).a
    return k.h1_nu + AbelianGroup.of(0, [gcd(nu, x) for x in a])


def brauer_nu(f: Fan, nu: int, k: FieldDescriptor) -> AbelianGroup:
    """``nu``-torsion of the Brauer group of the smooth toric variety of ``f`` over ``k``."""
    _check(nu, k)
    a = invariant_factors(f).a
    r = len(a)
    out = k.brauer_nu
    for x in a:
        out = out + k.h1_nu.tensor_cyclic(gcd(nu, x))
    for i, x in enumerate(a, start=1):
        out = out + AbelianGroup.cyclic(gcd(nu, x)) * (r - i)
    return out


def brauer_real(f: Fan) -> AbelianGroup:
    """Brauer group over the reals: ``(Z/2)^(1 + t + t(t-1)/2)``, ``t`` = number of even factors."""
    a = invariant_factors(f).a
    t = sum(1 for x in a if gcd(2, x) != 1)
    return AbelianGroup.of(0, [2] * (1 + t + t * (t - 1) // 2))
