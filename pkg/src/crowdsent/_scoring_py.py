"""Pure-Python scoring kernel; the import-time fallback for crowdsent._scoring.

Both kernels must produce bit-identical floats: same multiply order (window
positions ascending), same summation order (token order).
"""


def valence_score(values, negator_flags, multipliers, negator_window, intensifier_window):
    """Windowed valence sum over one token sequence.

    values[i]        lexicon score of token i (0.0 when absent)
    negator_flags[i] 1 when token i is a negator
    multipliers[i]   intensifier multiplier of token i (1.0 when it is not one)
    """
    score = 0.0
    n = len(values)
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
