"""Builtin instance registry, stored as canonical .cps sources."""

from __future__ import annotations

from .dsl import InstanceSpec, parse

_NILPOTENT6 = """\
algebra nilpotent6 {
  dim 6;
  basis w1 w2 w3 w4 w5 w6;
  d w1 = w3^w4;
  d w2 = w5^w6;
  d w4 = w3^w5;
  d w5 = w3^w6;
}

pair {
  alpha1 = w1;
  alpha2 = w2;
}

metric {
  w1*w1 + w2*w2 + 1/2 w3*w3 + 1/2 w4*w4 + 1/2 w5*w5 + 1/2 w6*w6
}

phi {
  X1 -> 0;
  X2 -> 0;
  X3 -> -X4;
  X4 -> X3;
  X5 -> -X6;
  X6 -> X5;
}

config {
  kappa = 1/2;
}
"""

_HEISENBERG3 = """\
algebra heisenberg3 {
  dim 3;
  basis w1 w2 w3;
  d w3 = w1^w2;
}
"""

_HEISENBERG3X3 = """\
algebra heisenberg3x3 {
  dim 6;
  basis w1 w2 w3 w4 w5 w6;
  d w3 = w1^w2;
  d w6 = w4^w5;
}

pair {
  alpha1 = w3;
  alpha2 = w6;
}

metric {
  1/2 w1*w1 + 1/2 w2*w2 + w3*w3 + 1/2 w4*w4 + 1/2 w5*w5 + w6*w6
}

phi {
  X1 -> -X2;
  X2 -> X1;
  X3 -> 0;
  X4 -> -X5;
  X5 -> X4;
  X6 -> 0;
}

config {
  kappa = 1/2;
}
"""

_ABELIAN2 = """\
algebra abelian2 {
  dim 2;
  basis w1 w2;
}

pair {
  alpha1 = w1;
  alpha2 = w2;
}

metric {
  w1*w1 + w2*w2
}

phi {
  X1 -> 0;
  X2 -> 0;
}

config {
  kappa = 1/2;
}
"""

BUILTIN_SOURCES: dict[str, str] = {
    "bande-hadjar-6d": _NILPOTENT6,
    "heisenberg3": _HEISENBERG3,
    "heisenberg3x3": _HEISENBERG3X3,
    "abelian2": _ABELIAN2,
}


class UnknownBuiltinError(ValueError):
    def __init__(self, name: str) -> None:
        available = ", ".join(sorted(BUILTIN_SOURCES))
        super().__init__(f"unknown builtin {name!r}; available: {available}")


def builtin_names() -> list[str]:
    return sorted(BUILTIN_SOURCES)


def builtin_source(name: str) -> str:
    if name not in BUILTIN_SOURCES:
        raise UnknownBuiltinError(name)
    return BUILTIN_SOURCES[name]


def builtin(name: str) -> InstanceSpec:
    return parse(builtin_source(name))
