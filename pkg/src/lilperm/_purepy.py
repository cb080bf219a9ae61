"""Pure-Python permanent kernels.

Same contract as the compiled ``_kernels`` extension: each function takes the
rows of a 0/1 matrix as integer bitmasks and returns the permanent as a Python
int.  Used when the extension is not built or ``LILPERM_PURE_PYTHON=1``.
"""

from __future__ import annotations


def ryser(rows):
    """Ryser inclusion-exclusion over column subsets in Gray-code order."""
    n = len(rows)
    cols = [[(rows[i] >> j) & 1 for i in range(n)] for j in range(n)]
    r = [0] * n
    total = 0
    gray = 0
    sign = 1
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray ^= 1 << j
        cj = cols[j]
        if gray >> j & 1:
            for i in range(n):
                r[i] += cj[i]
        else:
            for i in range(n):
                r[i] -= cj[i]
        sign = -sign
        prod = 1
        for v in r:
            if not v:
                prod = 0
                break
            prod *= v
        total += sign * prod
    return -total if n & 1 else total


def glynn(rows):
    """Glynn's formula over sign vectors with the first sign fixed."""
    n = len(rows)
    a = [[(rows[i] >> j) & 1 for j in range(n)] for i in range(n)]
    s = [sum(a[i][j] for i in range(n)) for j in range(n)]
    delta = [1] * n
    sign = 1
    total = 0
    for k in range(1 << (n - 1)):
        if k:
            i = (k & -k).bit_length()
            step = -2 * delta[i]
            delta[i] = -delta[i]
            ai = a[i]
            for j in range(n):
                if ai[j]:
                    s[j] += step
            sign = -sign
        prod = sign
        for v in s:
            if not v:
                prod = 0
                break
            prod *= v
        total += prod
    return total >> (n - 1)


def bruteforce(rows):
    """Count permutations sigma with every a[i][sigma(i)] = 1, depth first."""
    n = len(rows)

    def rec(i, used):
        if i == n:
            return 1
        total = 0
        avail = rows[i] & ~used
        while avail:
            b = avail & -avail
            total += rec(i + 1, used | b)
            avail ^= b
        return total

    return rec(0, 0)
