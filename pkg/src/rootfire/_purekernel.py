"""Pure-Python implementations of the stabilization hot loops.

The compiled module ``rootfire._speedups`` provides bit-identical
versions of everything here; ``rootfire.kernel`` picks whichever is
available.  Keep the two in lockstep, including the PRNG.
"""

from __future__ import annotations

from .errors import StepBudgetError

BACKEND = "pure"

_MASK = (1 << 64) - 1


def splitmix64_next(state: int) -> tuple[int, int]:
    """One step of the splitmix64 generator: (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def pairings(coroots, coords):
    """All coroot pairings of one weight, in positive-root order."""
    return [sum(r * c for r, c in zip(row, coords)) for row in coroots]


def stabilize(coords, root_weights, coroots, lo, hi, budget, seed=None):
    """Fire until stable; returns (sink coordinates, number of steps).

    ``lo``/``hi`` are the per-root closed fireability bounds on the
    coroot pairing.  ``seed=None`` selects the first fireable root in
    positive-root order; otherwise roots are drawn with splitmix64.
    """
    c = list(coords)
    m = len(coroots)
    steps = 0
    state = 0 if seed is None else seed & _MASK
    while True:
        if seed is None:
            chosen = -1
            for j in range(m):
                p = sum(r * x for r, x in zip(coroots[j], c))
                if lo[j] <= p <= hi[j]:
                    chosen = j
                    break
        else:
            fireable = [
                j
                for j in range(m)
                if lo[j] <= sum(r * x for r, x in zip(coroots[j], c)) <= hi[j]
            ]
            if not fireable:
                chosen = -1
            else:
                state, z = splitmix64_next(state)
                chosen = fireable[z % len(fireable)]
        if chosen < 0:
            return tuple(c), steps
        row = root_weights[chosen]
        for i in range(len(c)):
            c[i] += row[i]
        steps += 1
        if steps > budget:
            raise StepBudgetError(
                f"stabilization exceeded its step budget of {budget}"
            )
