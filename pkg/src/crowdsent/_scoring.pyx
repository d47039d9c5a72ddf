# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring kernel. Mirrors crowdsent._scoring_py exactly;
keep the arithmetic order in sync so both produce identical floats."""


def valence_score(double[:] values, signed char[:] negator_flags, double[:] multipliers,
                  int negator_window, int intensifier_window):
    """Windowed valence sum over one token sequence (see _scoring_py)."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t i, j, lo
    cdef double v
    cdef double score = 0.0
    for i in range(n):
        v = values[i]
        if v == 0.0:
            continue
        lo = i - intensifier_window
        if lo < 0:
            lo = 0
        for j in range(lo, i):
            v *= multipliers[j]
        lo = i - negator_window
        if lo < 0:
            lo = 0
        for j in range(lo, i):
            if negator_flags[j]:
                v = -v
                break
        score += v
    return score
