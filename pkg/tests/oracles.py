"""Oracle helpers shared by the unit and acceptance tests."""
import numpy as np

from zkfhash.field import PrimeField


def exhaustive_field_check(F: PrimeField, block: int = 32) -> int:
    """Check mul/add/sub on every unordered pair through the array kernels.

    Multiplication is compared against the plain ``a*b % p`` residue mapped to
    Montgomery form. Addition and subtraction are checked directly on the
    Montgomery representatives. Returns the number of pairs covered.
    """
    p = F.modulus
    assert p << F.montgomery_radix_exponent < 2**62, "toy fields only"
    vals = np.arange(p, dtype=np.int64)
    mont = F.to_montgomery(vals)
    assert np.array_equal(F.from_montgomery(mont), vals)
    assert np.array_equal(mont, (vals << F.montgomery_radix_exponent) % p)
    # the product plus the reduction term stays below p*R*2, so uint32 holds it when that fits
    narrow = mont.astype(np.uint32) if 2 * p << F.montgomery_radix_exponent < 2**32 else mont
    pairs = 0
    for lo in range(0, p, block):
        a, b = vals[lo:lo + block, None], vals[None, lo:]
        am, bm = mont[lo:lo + block, None], mont[None, lo:]
        prod = F.mont_mul(narrow[lo:lo + block, None], narrow[None, lo:])
        assert np.array_equal(prod, mont[(a * b) % p]), f"mul mismatch in rows {lo}..{lo + block}"
        assert np.array_equal(F.mont_add(am, bm), (am + bm) % p), f"add mismatch in rows {lo}..{lo + block}"
        assert np.array_equal(F.mont_sub(am, bm), (am - bm) % p), f"sub mismatch in rows {lo}..{lo + block}"
        assert np.array_equal(F.mont_sub(bm, am), (bm - am) % p), f"sub mismatch in rows {lo}..{lo + block}"
        pairs += a.size * b.size
    return pairs
