"""Model selection: which member of the family (N, spatial dimension, mass)."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .exact_algebra import Poly, param, var

M = param("m")


class Branch(str, Enum):
    ODD_3D = "odd-3d"
    EVEN_2D = "even-2d"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    N: int
    d: int
    m: Fraction | None = None  # None keeps the mass symbolic
    branch: Branch | None = field(default=None)

    def __post_init__(self):
        if self.N < 1:
            raise ConfigError("N must be a positive integer")
        if self.N % 2 == 1 and self.d == 3:
            inferred = Branch.ODD_3D
        elif self.N % 2 == 0 and self.d == 2:
            inferred = Branch.EVEN_2D
        else:
            raise ConfigError(f"no central extension handled for N={self.N}, d={self.d}: "
                              "use odd N with d=3 or even N with d=2")
        if self.branch is not None and Branch(self.branch) != inferred:
            raise ConfigError(f"branch {self.branch} does not match N={self.N}, d={self.d}")
        object.__setattr__(self, "branch", inferred)
        if self.m is not None:
            m = Fraction(self.m)
            if m <= 0:
                raise ConfigError("mass must be positive")
            object.__setattr__(self, "m", m)

    @property
    def odd(self) -> bool:
        return self.branch is Branch.ODD_3D

    @property
    def top(self) -> int:
        """Highest phase-space level: (N-1)/2 (odd) or N/2 (even)."""
        return (self.N - 1) // 2 if self.odd else self.N // 2

    @property
    def order(self) -> int:
        """Highest derivative order in the free Lagrangian."""
        return (self.N + 1) // 2 if self.odd else self.N // 2 + 1

    @property
    def comps(self) -> range:
        return range(1, self.d + 1)

    @property
    def mass(self) -> Poly:
        return var(M) if self.m is None else Poly.const(self.m)

    def boost_sign(self, k: int) -> int:
        """Sign of t**k in the level-k boost of q."""
        e = k - (self.N + 1) // 2 if self.odd else k - self.N // 2
        return -1 if e % 2 else 1

    def label(self) -> str:
        return f"N={self.N} d={self.d} ({self.branch.value})"

    def as_dict(self) -> dict:
        return {"N": self.N, "d": self.d, "branch": self.branch.value,
                "m": "m" if self.m is None else str(self.m)}


ODD_MATRIX = (1, 3, 5, 7)
EVEN_MATRIX = (2, 4, 6)


def desk_matrix() -> list[ModelConfig]:
    return [ModelConfig(n, 3) for n in ODD_MATRIX] + [ModelConfig(n, 2) for n in EVEN_MATRIX]


def levi_civita(*idx: int) -> int:
    """Totally antisymmetric symbol on 1-based indices, eps(1,2) = eps(1,2,3) = +1."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign
