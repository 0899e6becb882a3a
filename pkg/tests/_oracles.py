"""Small independent reference computations shared by the tests."""
from fractions import Fraction


def floor_log2(r: Fraction) -> int:
    """Largest k with 2^k <= r."""
    r = Fraction(r)
    assert r > 0
    if r >= 1:
        # floor(log2 r) = floor(log2 floor(r)) once r >= 1
        return (r.numerator // r.denominator).bit_length() - 1
    return -ceil_log2(1 / r)


def ceil_log2(r: Fraction) -> int:
    """Smallest k with 2^k >= r."""
    r = Fraction(r)
    if r >= 1:
        k = floor_log2(r)
        return k if r == 2**k else k + 1
    return -floor_log2(1 / r)


def neg_log2_bounds(p: Fraction) -> tuple[int, int]:
    """(ceil(-log2 p), floor(-log2 p))."""
    return ceil_log2(1 / p), floor_log2(1 / p)
