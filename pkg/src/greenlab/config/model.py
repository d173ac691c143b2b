"""Configurations, selections and bounded verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..exactalg.gaussian import I
from ..exactalg.intmat import IntMatrix
from ..exactalg.poly import RationalFunction
from ..torus import ExponentLattice, saturate


class ConfigError(ValueError):
    """Base class for configuration validation errors."""


class ZeroGreen(ConfigError):
    pass


class AlgebraicGreen(ConfigError):
    pass


class DuplicateName(ConfigError):
    pass


class UnknownName(ConfigError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class BaseMismatch(ConfigError):
    pass


class Configuration:
    """Named points over declared transcendentals, with a green subset.

    Coordinates are rational functions with rational (non-i) coefficients in
    the ring of all transcendentals.  An optional base is a sub-configuration
    whose transcendentals are a prefix of ours and whose points and greens
    are also points and greens here.
    """

    def __init__(self, transcendentals: Sequence[str], points: Dict[str, Tuple[RationalFunction, RationalFunction]]
                 | Sequence[Tuple[str, Tuple[RationalFunction, RationalFunction]]],
                 greens: Iterable[str] = (), base: Optional["Configuration"] = None):
        self.transcendentals = tuple(transcendentals)
        if len(set(self.transcendentals)) != len(self.transcendentals):
            raise DuplicateName("duplicate transcendental name")
        items = list(points.items()) if isinstance(points, dict) else list(points)
        self.points: Dict[str, Tuple[RationalFunction, RationalFunction]] = {}
        for name, (x, y) in items:
            if name in self.points:
                raise DuplicateName(f"duplicate point name {name!r}")
            if name in self.transcendentals:
                raise DuplicateName(f"point name {name!r} clashes with a transcendental")
            self.points[name] = (x.embed(self.transcendentals), y.embed(self.transcendentals))
        greens = list(greens)
        if len(set(greens)) != len(greens):
            raise DuplicateName("a green is listed twice")
        for g in greens:
            if g not in self.points:
                raise UnknownName(f"green {g!r} is not a point")
        self.greens: Tuple[str, ...] = tuple(greens)
        self.base = base
        self._zhat: Dict[str, RationalFunction] = {}

    # -- names ---------------------------------------------------------------
    @property
    def point_names(self) -> Tuple[str, ...]:
        return tuple(self.points)

    @property
    def nvars(self) -> int:
        return len(self.transcendentals)

    @property
    def ngreens(self) -> int:
        return len(self.greens)

    @property
    def base_nvars(self) -> int:
        return self.base.nvars if self.base is not None else 0

    def is_green(self, name: str) -> bool:
        return name in self.greens

    def green_index(self, name: str) -> int:
        return self.greens.index(name)

    def check_names(self, names: Iterable[str]):
        for n in names:
            if n not in self.points:
                raise UnknownName(f"unknown point {n!r}")

    def base_greens(self) -> Tuple[str, ...]:
        return self.base.greens if self.base is not None else ()

    def base_points(self) -> Tuple[str, ...]:
        return self.base.point_names if self.base is not None else ()

    # -- coordinates ---------------------------------------------------------
    def coords(self, name: str) -> Tuple[RationalFunction, RationalFunction]:
        try:
            return self.points[name]
        except KeyError:
            raise UnknownName(f"unknown point {name!r}") from None

    def zhat(self, name: str) -> RationalFunction:
        """x + i*y as a rational function over Q(i)."""
        z = self._zhat.get(name)
        if z is None:
            x, y = self.coords(name)
            z = x + y * I
            self._zhat[name] = z
        return z

    def zhat_conj(self, name: str) -> RationalFunction:
        x, y = self.coords(name)
        return x - y * I

    # -- derived configurations --------------------------------------------
    def replace(self, transcendentals=None, points=None, greens=None, base="keep") -> "Configuration":
        return Configuration(self.transcendentals if transcendentals is None else transcendentals,
                             self.points if points is None else points,
                             self.greens if greens is None else greens,
                             self.base if base == "keep" else base)

    def __repr__(self):
        return (f"Configuration(transcendentals={self.transcendentals}, points={list(self.points)}, "
                f"greens={self.greens}, base={'yes' if self.base is not None else 'no'})")


class SubSelection:
    """A cl-closed selection: named points plus a saturated lattice of green words."""

    __slots__ = ("points", "lattice")

    def __init__(self, points: Iterable[str], lattice: ExponentLattice):
        pts = []
        for p in points:
            if p not in pts:
                pts.append(p)
        self.points: Tuple[str, ...] = tuple(sorted(pts))
        self.lattice = saturate(lattice)

    @classmethod
    def of(cls, config: Configuration, points: Iterable[str] = (), words: Sequence[Sequence[int]] = ()):
        points = list(points)
        config.check_names(points)
        g = config.ngreens
        for w in words:
            if len(w) != g:
                raise ValueError(f"green word {list(w)} has length {len(w)}, expected {g}")
        return cls(points, ExponentLattice(IntMatrix([list(w) for w in words], g)))

    @classmethod
    def empty(cls, config: Configuration) -> "SubSelection":
        return cls((), ExponentLattice.zero(config.ngreens))

    @classmethod
    def everything(cls, config: Configuration) -> "SubSelection":
        return cls(config.point_names, ExponentLattice.full(config.ngreens))

    @property
    def ngreens(self) -> int:
        return self.lattice.ambient_n

    def union(self, other: "SubSelection") -> "SubSelection":
        from ..torus import lattice_sum
        return SubSelection(self.points + other.points, lattice_sum(self.lattice, other.lattice))

    def add_words(self, words: IntMatrix | Sequence[Sequence[int]]) -> "SubSelection":
        if not isinstance(words, IntMatrix):
            words = IntMatrix([list(w) for w in words], self.ngreens)
        return SubSelection(self.points, ExponentLattice(self.lattice.basis.stack(words)))

    def add_points(self, names: Iterable[str]) -> "SubSelection":
        return SubSelection(self.points + tuple(names), self.lattice)

    def words(self) -> List[List[int]]:
        return self.lattice.vectors()

    def key(self):
        return (self.points, self.lattice.basis.rows)

    def __eq__(self, other):
        if isinstance(other, SubSelection):
            return self.key() == other.key()
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SubSelection(points={list(self.points)}, words={self.words()})"


@dataclass(frozen=True)
class BoundedVerdict:
    """Either a replayable violation witness, or certification up to a search bound."""

    status: str  # "violated" or "certified"
    bound: int
    witness: Optional[IntMatrix] = None
    detail: Dict = field(default_factory=dict, compare=False)

    @property
    def violated(self) -> bool:
        return self.status == "violated"

    @classmethod
    def violation(cls, bound: int, witness: Optional[IntMatrix], **detail) -> "BoundedVerdict":
        return cls("violated", bound, witness, dict(detail))

    @classmethod
    def certified(cls, bound: int, **detail) -> "BoundedVerdict":
        return cls("certified", bound, None, dict(detail))

    def __str__(self):
        if self.violated:
            return f"violated witness={self.witness}"
        return f"certified_up_to_bound B={self.bound}"
