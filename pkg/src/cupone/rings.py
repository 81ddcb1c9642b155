"""Coefficient ring tags: the integers or a prime field."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CuponeError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    """``Ring()`` is Z; ``Ring(p)`` is Z/p for a prime p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise CuponeError(f"{self.p} is not prime")

    @property
    def is_integer(self) -> bool:
        return self.p is None

    def reduce(self, x: int) -> int:
        return x if self.p is None else x % self.p

    def inverse(self, x: int) -> int:
        if self.p is None:
            if x in (1, -1):
                return x
            raise CuponeError(f"{x} is not a unit in Z")
        return pow(x, -1, self.p)

    def __str__(self) -> str:
        return "Z" if self.p is None else f"Zp:{self.p}"

    def to_json(self):
        return "Z" if self.p is None else {"Zp": self.p}

    @classmethod
    def from_json(cls, obj) -> "Ring":
        if obj == "Z":
            return cls()
        if isinstance(obj, dict) and set(obj) == {"Zp"}:
            return cls(int(obj["Zp"]))
        raise CuponeError(f"bad ring tag {obj!r}")

    @classmethod
    def parse(cls, text: str) -> "Ring":
        """Parse the command-line spelling ``Z`` or ``Zp:P``."""
        if text == "Z":
            return cls()
        if text.startswith("Zp:"):
            return cls(int(text[3:]))
        raise CuponeError(f"bad ring {text!r}; expected Z or Zp:P")


ZZ = Ring()
