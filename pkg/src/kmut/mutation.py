"""Mutations of K-classes and chi-level checks of exceptional sequences.

In the Grothendieck group a left mutation is ``L_E F = F - chi(E, F) E``
and a right mutation is ``R_E F = F - chi(F, E) E``.  Nothing here tracks
shifts or actual complexes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence, Union

from .errors import MutationError, UnsupportedOperation
from .ktheory import KClass, chi_pair, tensor_line

__all__ = [
    "MutationStep",
    "MutationTrace",
    "SequenceReport",
    "left_mutate",
    "right_mutate",
    "serre_twist",
    "run_sequence",
    "gram_matrix",
    "check_exceptional_sequence",
]

Direction = Literal["left", "right", "serre"]


@dataclass(frozen=True)
class MutationStep:
    """One executed step. For ``serre`` steps ``mutator`` is the sign."""

    direction: Direction
    mutator: Union[KClass, int]
    computed_chi: int | None = None


@dataclass(frozen=True)
class MutationTrace:
    initial: KClass
    steps: tuple[MutationStep, ...]
    final: KClass

    @property
    def chis(self) -> list[int | None]:
        return [s.computed_chi for s in self.steps]

    def replay(self) -> KClass:
        return run_sequence(self.initial, [(s.direction, s.mutator) for s in self.steps]).final


def left_mutate(f: KClass, e: KClass) -> KClass:
    return f - chi_pair(e, f) * e


def right_mutate(f: KClass, e: KClass) -> KClass:
    return f - chi_pair(f, e) * e


def serre_twist(f: KClass, sign: int) -> KClass:
    """Tensor by the canonical bundle (``sign=+1``) or its inverse (``-1``)."""
    if sign not in (1, -1):
        raise ValueError(f"serre twist sign must be +1 or -1, got {sign}")
    canonical = f.space.canonical
    if canonical is None:
        raise UnsupportedOperation(f"no canonical class on {f.space}")
    return tensor_line(f, canonical if sign == 1 else canonical.inverse())


def run_sequence(initial: KClass, steps: Sequence[tuple[Direction, object]]) -> MutationTrace:
    """Apply ``steps`` in order, recording the chi used by every mutation.

    Each step is ``("left", E)``, ``("right", E)`` or ``("serre", +1/-1)``.
    """
    current = initial
    done = []
    for i, (direction, arg) in enumerate(steps):
        try:
            if direction == "left":
                x = chi_pair(arg, current)
                current = current - x * arg
            elif direction == "right":
                x = chi_pair(current, arg)
                current = current - x * arg
            elif direction == "serre":
                x = None
                current = serre_twist(current, arg)
            else:
                raise ValueError(f"unknown step direction {direction!r}")
        except MutationError:
            raise
        except (ValueError, TypeError) as exc:
            raise MutationError(i, exc) from exc
        done.append(MutationStep(direction, arg, x))
    return MutationTrace(initial, tuple(done), current)


def gram_matrix(objs: Sequence[KClass]) -> list[list[int]]:
    return [[chi_pair(a, b) for b in objs] for a in objs]


@dataclass
class SequenceReport:
    """Outcome of a chi-level exceptionality check.

    Passing is only a necessary condition for an exceptional sequence:
    vanishing Euler pairings do not force the Ext groups to vanish.
    """

    passed: bool
    gram: list[list[int]]
    offending: list[tuple[int, int, int]] = field(default_factory=list)
    verdict: str = "necessary condition"

    def __bool__(self):
        return self.passed


def check_exceptional_sequence(objs: Sequence[KClass]) -> SequenceReport:
    """Diagonal Gram entries must be 1 and backward pairings 0.

    ``offending`` lists ``(i, j, chi)`` with 1-based indices for every
    diagonal entry ``i == j`` not equal to 1 and every ``chi(objs[i], objs[j])``
    with ``i > j`` not equal to 0.
    """
    gram = gram_matrix(objs)
    bad = []
    n = len(objs)
    for i in range(n):
        if gram[i][i] != 1:
            bad.append((i + 1, i + 1, gram[i][i]))
        for j in range(i):
            if gram[i][j] != 0:
                bad.append((i + 1, j + 1, gram[i][j]))
    return SequenceReport(not bad, gram, bad)
