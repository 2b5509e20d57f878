# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``rootfire._purekernel``.

Same functions, same results, same PRNG; only faster.  Inputs are
validated by the wrapper in ``rootfire.kernel`` (coordinate magnitudes
stay far below the int64 overflow guard used there).
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

from .errors import StepBudgetError

BACKEND = "compiled"

_MASK = (1 << 64) - 1


cdef inline uint64_t _mix(uint64_t* state) nogil:
    state[0] += <uint64_t>0x9E3779B97F4A7C15
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


def splitmix64_next(state):
    """One step of the splitmix64 generator: (new_state, output)."""
    cdef uint64_t s = <uint64_t>(state & _MASK)
    cdef uint64_t out = _mix(&s)
    return s, out


def pairings(coroots, coords):
    """All coroot pairings of one weight, in positive-root order."""
    return [sum(r * c for r, c in zip(row, coords)) for row in coroots]


def stabilize(coords, root_weights, coroots, lo, hi, budget, seed=None):
    """Fire until stable; returns (sink coordinates, number of steps)."""
    cdef Py_ssize_t n = len(coords)
    cdef Py_ssize_t m = len(coroots)
    cdef Py_ssize_t i, j, nfire, chosen
    cdef int64_t p
    cdef long long steps = 0, cap = budget
    cdef bint randomized = seed is not None
    cdef uint64_t state = 0
    cdef int64_t* c = NULL
    cdef int64_t* rw = NULL
    cdef int64_t* cr = NULL
    cdef int64_t* lob = NULL
    cdef int64_t* hib = NULL
    cdef int64_t* fire = NULL

    if randomized:
        state = <uint64_t>(seed & _MASK)

    c = <int64_t*>malloc(n * sizeof(int64_t))
    rw = <int64_t*>malloc(m * n * sizeof(int64_t))
    cr = <int64_t*>malloc(m * n * sizeof(int64_t))
    lob = <int64_t*>malloc(m * sizeof(int64_t))
    hib = <int64_t*>malloc(m * sizeof(int64_t))
    fire = <int64_t*>malloc(m * sizeof(int64_t))
    if not (c and rw and cr and lob and hib and fire):
        free(c); free(rw); free(cr); free(lob); free(hib); free(fire)
        raise MemoryError()
    try:
        for i in range(n):
            c[i] = coords[i]
        for j in range(m):
            lob[j] = lo[j]
            hib[j] = hi[j]
            for i in range(n):
                rw[j * n + i] = root_weights[j][i]
                cr[j * n + i] = coroots[j][i]

        while True:
            chosen = -1
            if not randomized:
                for j in range(m):
                    p = 0
                    for i in range(n):
                        p += cr[j * n + i] * c[i]
                    if lob[j] <= p <= hib[j]:
                        chosen = j
                        break
            else:
                nfire = 0
                for j in range(m):
                    p = 0
                    for i in range(n):
                        p += cr[j * n + i] * c[i]
                    if lob[j] <= p <= hib[j]:
                        fire[nfire] = j
                        nfire += 1
                if nfire > 0:
                    chosen = fire[_mix(&state) % <uint64_t>nfire]
            if chosen < 0:
                return tuple(c[i] for i in range(n)), steps
            for i in range(n):
                c[i] += rw[chosen * n + i]
            steps += 1
            if steps > cap:
                raise StepBudgetError(
                    f"stabilization exceeded its step budget of {budget}"
                )
    finally:
        free(c); free(rw); free(cr); free(lob); free(hib); free(fire)
