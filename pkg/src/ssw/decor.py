"""Markings and scalings layered over finite simplicial sets.

Only nondegenerate decorated cells are stored; degenerate edges and triangles
are treated as marked/thin implicitly by the predicates below.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import EZ, SMap, SSet, SSetError, isomorphisms, pushout_mono, subcomplex
from .ops import idop


def _check_decoration(base: SSet, cells, dim: int, what: str) -> frozenset:
    cells = frozenset(cells)
    for x in cells:
        if base.dim_of.get(x) != dim:
            raise SSetError(f"{what} cell {x!r} is not a nondegenerate {dim}-simplex")
    return cells


@dataclass(frozen=True)
class MarkedScaled:
    """A marked-scaled simplicial set (X, E_X, T_X)."""

    base: SSet
    marked: frozenset = frozenset()
    thin: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "marked", _check_decoration(self.base, self.marked, 1, "marked"))
        object.__setattr__(self, "thin", _check_decoration(self.base, self.thin, 2, "thin"))

    def is_marked(self, pair: EZ) -> bool:
        return not pair.is_nondeg() or pair.core in self.marked

    def is_thin(self, pair: EZ) -> bool:
        return not pair.is_nondeg() or pair.core in self.thin

    def scaled(self) -> "Scaled":
        return Scaled(self.base, self.thin)

    def marked_only(self) -> "Marked":
        return Marked(self.base, self.marked)

    def op(self) -> "MarkedScaled":
        from .core import opposite

        return MarkedScaled(opposite(self.base), self.marked, self.thin)


@dataclass(frozen=True)
class Scaled:
    """A scaled simplicial set (X, T_X)."""

    base: SSet
    thin: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "thin", _check_decoration(self.base, self.thin, 2, "thin"))

    def is_thin(self, pair: EZ) -> bool:
        return not pair.is_nondeg() or pair.core in self.thin

    def with_marking(self, marked) -> MarkedScaled:
        return MarkedScaled(self.base, frozenset(marked), self.thin)

    def flat_marked(self) -> MarkedScaled:
        return MarkedScaled(self.base, frozenset(), self.thin)

    def sharp_marked(self) -> MarkedScaled:
        return MarkedScaled(self.base, frozenset(self.base.level(1)), self.thin)

    def op(self) -> "Scaled":
        from .core import opposite

        return Scaled(opposite(self.base), self.thin)


@dataclass(frozen=True)
class Marked:
    """A marked simplicial set (X, E_X)."""

    base: SSet
    marked: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "marked", _check_decoration(self.base, self.marked, 1, "marked"))

    def is_marked(self, pair: EZ) -> bool:
        return not pair.is_nondeg() or pair.core in self.marked

    def flat_scaled(self) -> MarkedScaled:
        return MarkedScaled(self.base, self.marked, frozenset())

    def sharp_scaled(self) -> MarkedScaled:
        return MarkedScaled(self.base, self.marked, frozenset(self.base.level(2)))

    def op(self) -> "Marked":
        from .core import opposite

        return Marked(opposite(self.base), self.marked)


FLAT, SHARP = "flat", "sharp"


def decorate(base: SSet, marking: str = FLAT, scaling: str = FLAT) -> MarkedScaled:
    """Build X with flat/sharp marking and scaling (covers all six decorators)."""
    marked = frozenset() if marking == FLAT else frozenset(base.level(1))
    thin = frozenset() if scaling == FLAT else frozenset(base.level(2))
    return MarkedScaled(base, marked, thin)


def scale(base: SSet, scaling: str = FLAT, thin=()) -> Scaled:
    """X_flat or X_sharp, or an explicit scaling."""
    if thin:
        return Scaled(base, frozenset(thin))
    return Scaled(base, frozenset() if scaling == FLAT else frozenset(base.level(2)))


def mark(base: SSet, marking: str = FLAT, marked=()) -> Marked:
    if marked:
        return Marked(base, frozenset(marked))
    return Marked(base, frozenset() if marking == FLAT else frozenset(base.level(1)))


def underlying_scaled(X: MarkedScaled) -> Scaled:
    return X.scaled()


def underlying_marked(X: MarkedScaled) -> Marked:
    return X.marked_only()


def forget_all(X) -> SSet:
    return X.base


def core_thi(X: Scaled) -> tuple[SSet, SMap]:
    """The core: simplices all of whose 2-dimensional faces are thin."""
    keep = []
    for x, n in X.base.dim_of.items():
        if n < 2:
            keep.append(x)
            continue
        top = EZ(x, idop(n))
        ok = True
        for alpha in _triangle_injections(n):
            if not X.is_thin(X.base.act(top, alpha)):
                ok = False
                break
        if ok:
            keep.append(x)
    closed = [x for x in keep if all(f.core in keep for f in X.base.faces.get(x, ()))]
    # faces of kept cells are kept: 2-faces of faces are 2-faces of the cell
    assert closed == keep
    return subcomplex(X.base, keep)


def _triangle_injections(n: int):
    from .ops import injections

    return injections(2, n)


# -- decorated maps -----------------------------------------------------------


def is_scaled_map(f: SMap, S: Scaled | MarkedScaled, T: Scaled | MarkedScaled) -> bool:
    return all(T.is_thin(f(EZ(t, idop(2)))) for t in S.thin)


def is_marked_map(f: SMap, S: Marked | MarkedScaled, T: Marked | MarkedScaled) -> bool:
    return all(T.is_marked(f(EZ(e, idop(1)))) for e in S.marked)


def is_ms_map(f: SMap, S: MarkedScaled, T: MarkedScaled) -> bool:
    return is_marked_map(f, S, T) and is_scaled_map(f, S, T)


def push_marking(f: SMap, marked) -> frozenset:
    """Image of a marking along a map; images that degenerate are dropped."""
    out = set()
    for e in marked:
        img = f(EZ(e, idop(1)))
        if img.is_nondeg():
            out.add(img.core)
    return frozenset(out)


def push_scaling(f: SMap, thin) -> frozenset:
    out = set()
    for t in thin:
        img = f(EZ(t, idop(2)))
        if img.is_nondeg():
            out.add(img.core)
    return frozenset(out)


def pull_scaling(f: SMap, T: Scaled | MarkedScaled) -> frozenset:
    """Nondegenerate source triangles whose image is thin."""
    return frozenset(t for t in f.source.level(2) if T.is_thin(f(EZ(t, idop(2)))))


def pull_marking(f: SMap, T: Marked | MarkedScaled) -> frozenset:
    return frozenset(e for e in f.source.level(1) if T.is_marked(f(EZ(e, idop(1)))))


def decorated_maps(X: MarkedScaled, Y: MarkedScaled, partial=None, first_only=False) -> list[SMap]:
    """All maps of marked-scaled simplicial sets X -> Y, in canonical order."""
    from .core import enumerate_maps

    def image_ok(x, cand):
        n = X.base.dim_of[x]
        if n == 1 and x in X.marked and not Y.is_marked(cand):
            return False
        if n == 2 and x in X.thin and not Y.is_thin(cand):
            return False
        return True

    return enumerate_maps(X.base, Y.base, partial=partial, image_ok=image_ok, first_only=first_only)


def pushout_ms(i: SMap, g: SMap, B: MarkedScaled, X: MarkedScaled, A: MarkedScaled | None = None):
    """Decorated pushout: decoration of the result is the union of the images."""
    res = pushout_mono(i, g)
    marked = push_marking(res.leg_target, X.marked) | push_marking(res.leg_big, B.marked)
    thin = push_scaling(res.leg_target, X.thin) | push_scaling(res.leg_big, B.thin)
    return MarkedScaled(res.sset, marked, thin), res.leg_target, res.leg_big


def restrict_ms(X: MarkedScaled, incl: SMap) -> MarkedScaled:
    """Decoration induced on a subcomplex along its inclusion."""
    sub = incl.source
    marked = frozenset(e for e in sub.level(1) if incl.images[e].core in X.marked)
    thin = frozenset(t for t in sub.level(2) if incl.images[t].core in X.thin)
    return MarkedScaled(sub, marked, thin)


# -- decorated isomorphism ------------------------------------------------------


def _decoration_tags(X: MarkedScaled) -> dict[str, int]:
    tags = {e: 1 for e in X.marked}
    tags.update({t: 1 for t in X.thin})
    return tags


def decorated_isomorphisms(X: MarkedScaled, Y: MarkedScaled, first_only: bool = True) -> list[SMap]:
    """Base isomorphisms matching marked and thin sets exactly.

    Decorations are folded into the search invariants, so every isomorphism
    found already matches them cell by cell.
    """
    return isomorphisms(
        X.base,
        Y.base,
        first_only=first_only,
        tags_x=_decoration_tags(X),
        tags_y=_decoration_tags(Y),
    )


def is_decorated_isomorphic(X: MarkedScaled, Y: MarkedScaled) -> bool:
    if len(X.marked) != len(Y.marked) or len(X.thin) != len(Y.thin):
        return False
    return bool(decorated_isomorphisms(X, Y))


def scaled_isomorphic(X: Scaled, Y: Scaled) -> bool:
    return is_decorated_isomorphic(X.flat_marked(), Y.flat_marked())
