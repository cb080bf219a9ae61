/* Exact permanent kernels for 0/1 matrices given as row bitmasks, n <= 34. */
#ifndef LILPERM_KERNELS_H
#define LILPERM_KERNELS_H

#include <stdint.h>

#define LP_MAXN 34
/* Glynn: 34^12 < 2^62, so a chunk of 12 factors of magnitude <= 34 fits in int64. */
#define LP_CHUNK 12

typedef unsigned __int128 lp_u128;

/* Ryser inclusion-exclusion in the Nijenhuis-Wilf form: the last column is
 * folded into a per-row offset, so only subsets of the first n-1 columns are
 * visited, in Gray-code order.  With doubled entries
 *
 *     y_i(S) = 2 a[i][n-1] - rowsum_i + 2 sum_{j in S} a[i][j]
 *
 * the signed sum  sum_S (-1)^|S| prod_i y_i(S)  equals (-1)^(n-1) 2^(n-1) perm.
 *
 * The sum is accumulated modulo 2^192 in wrapping unsigned limbs.  Reduction
 * is a ring homomorphism and |2^(n-1) perm| <= 2^33 * 34! < 2^161, so the
 * residue determines the exact value; the final shift by n-1 is exact.
 *
 * |y_i| <= 34.  Magnitudes are padded with ones to a fixed width W so the
 * product is a branch-free tree: groups of four (<= 34^4 < 2^21), triples of
 * groups (<= 34^12 < 2^62), then 128- and 192-bit limbs.
 */
typedef struct {
    lp_u128 lo;
    uint64_t hi;
} lp_u192;

static inline void lp_add192(lp_u192 *acc, lp_u128 lo, uint64_t hi)
{
    lp_u128 s = acc->lo + lo;
    acc->hi += hi + (uint64_t)(s < lo);
    acc->lo = s;
}

static inline void lp_sub192(lp_u192 *acc, lp_u128 lo, uint64_t hi)
{
    uint64_t borrow = (uint64_t)(acc->lo < lo);
    acc->lo -= lo;
    acc->hi -= hi + borrow;
}

#define LP_RYSER_LOOP(W)                                                    \
    do {                                                                    \
        int32_t y[W];                                                       \
        int32_t col[LP_MAXN][W];                                            \
        for (i = 0; i < W; i++) {                                           \
            y[i] = 1;                                                       \
            if (i < n)                                                      \
                y[i] = 2 * (int32_t)((rows[i] >> (n - 1)) & 1u)             \
                       - __builtin_popcountll(rows[i]);                     \
        }                                                                   \
        for (j = 0; j < n - 1; j++)                                         \
            for (i = 0; i < W; i++)                                         \
                col[j][i] = i < n ? 2 * (int32_t)((rows[i] >> j) & 1u) : 0; \
        for (k = 0; k < limit; k++) {                                       \
            uint32_t q[W / 4];                                              \
            uint32_t mag[W];                                                \
            uint64_t t[W / 12 + 1];                                         \
            lp_u128 m;                                                      \
            uint64_t mhi;                                                   \
            int neg = 0;                                                    \
            if (k > 0) {                                                    \
                const int32_t *cj;                                          \
                uint64_t bit;                                               \
                j = __builtin_ctzll(k);                                     \
                bit = (uint64_t)1 << j;                                     \
                gray ^= bit;                                                \
                cj = col[j];                                                \
                if (gray & bit) {                                           \
                    for (i = 0; i < W; i++)                                 \
                        y[i] += cj[i];                                      \
                } else {                                                    \
                    for (i = 0; i < W; i++)                                 \
                        y[i] -= cj[i];                                      \
                }                                                           \
                parity ^= 1;                                                \
            }                                                               \
            for (i = 0; i < W; i++) {                                       \
                int32_t v = y[i];                                           \
                neg += v < 0;                                               \
                mag[i] = (uint32_t)(v < 0 ? -v : v);                        \
            }                                                               \
            for (i = 0; i < W / 4; i++)                                     \
                q[i] = (mag[4 * i] * mag[4 * i + 1])                        \
                       * (mag[4 * i + 2] * mag[4 * i + 3]);                 \
            for (i = 0; i < W / 12 + 1; i++)                                \
                t[i] = 1;                                                   \
            for (i = 0; i < W / 4; i++)                                     \
                t[i / 3] *= q[i];                                           \
            m = (lp_u128)t[0] * t[1];                                       \
            mhi = 0;                                                        \
            if (W > 24) {                                                   \
                lp_u128 L = (lp_u128)(uint64_t)m * t[2];                    \
                lp_u128 H = (lp_u128)(uint64_t)(m >> 64) * t[2];            \
                lp_u128 lo = L + (H << 64);                                 \
                mhi = (uint64_t)(H >> 64) + (uint64_t)(lo < L);             \
                m = lo;                                                     \
            }                                                               \
            {                                                               \
                /* branch-free conditional negation: x -> (x ^ -1) + 1 */    \
                uint64_t s = (uint64_t)((neg + parity) & 1);                \
                uint64_t sm = (uint64_t)0 - s;                              \
                lp_u128 sm128 = ((lp_u128)sm << 64) | sm;                   \
                lp_u128 lo = (m ^ sm128) + s;                               \
                lp_add192(&acc, lo, (mhi ^ sm) + (uint64_t)(lo < s));       \
            }                                                               \
        }                                                                   \
    } while (0)

static void lp_ryser(const uint64_t *rows, int n, uint64_t *lo, uint64_t *hi)
{
    lp_u192 acc = {0, 0};
    lp_u128 perm;
    uint64_t gray = 0, k, limit = (uint64_t)1 << (n - 1);
    int i, j, parity = 0, shift = n - 1;

    if (n <= 12)
        LP_RYSER_LOOP(12);
    else if (n <= 20)
        LP_RYSER_LOOP(20);
    else if (n <= 24)
        LP_RYSER_LOOP(24);
    else if (n <= 28)
        LP_RYSER_LOOP(28);
    else if (n <= 32)
        LP_RYSER_LOOP(32);
    else
        LP_RYSER_LOOP(36);

    if (shift & 1) {
        /* two's-complement negation of the 192-bit value */
        lp_u192 neg = {0, 0};
        lp_sub192(&neg, acc.lo, acc.hi);
        acc = neg;
    }
    if (shift == 0)
        perm = acc.lo;
    else
        perm = (acc.lo >> shift) | ((lp_u128)acc.hi << (128 - shift));
    *lo = (uint64_t)perm;
    *hi = (uint64_t)(perm >> 64);
}

/* Glynn's formula over sign vectors with the first sign fixed, Gray-code
 * order over the remaining rows.  The sum equals 2^(n-1) * perm, which can
 * exceed 2^128, so it is reduced modulo five primes below 2^31.  The caller
 * divides by 2^(n-1) in each residue field and recombines by CRT. */
#define LP_P0 2147483647LL
#define LP_P1 2147483629LL
#define LP_P2 2147483587LL
#define LP_P3 2147483579LL
#define LP_P4 2147483563LL

static inline int64_t lp_mod(int64_t x, int64_t p)
{
    int64_t m = x % p;
    return m < 0 ? m + p : m;
}

static void lp_glynn(const uint64_t *rows, int n, uint64_t out[5])
{
    int32_t a[LP_MAXN][LP_MAXN];
    int32_t s[LP_MAXN];
    int32_t delta[LP_MAXN];
    int64_t acc0 = 0, acc1 = 0, acc2 = 0, acc3 = 0, acc4 = 0;
    uint64_t gray = 0, k, limit;
    int i, j, c, sign = 1;

    for (i = 0; i < n; i++) {
        delta[i] = 1;
        for (j = 0; j < n; j++)
            a[i][j] = (int32_t)((rows[i] >> j) & 1u);
    }
    for (j = 0; j < n; j++) {
        s[j] = 0;
        for (i = 0; i < n; i++)
            s[j] += a[i][j];
    }

    limit = (uint64_t)1 << (n - 1);
    for (k = 0; k < limit; k++) {
        int64_t q0 = 1, q1 = 1, q2 = 1, q3 = 1, q4 = 1;
        int zero = 0;

        if (k > 0) {
            const int32_t *ai;
            int32_t step;
            i = __builtin_ctzll(k) + 1;
            gray ^= (uint64_t)1 << (i - 1);
            ai = a[i];
            step = -2 * delta[i];
            delta[i] = -delta[i];
            for (j = 0; j < n; j++)
                s[j] += step * ai[j];
            sign = -sign;
        }

        for (j = 0; j < n; j += LP_CHUNK) {
            int end = j + LP_CHUNK < n ? j + LP_CHUNK : n;
            int64_t p = 1;
            for (c = j; c < end; c++)
                p *= (int64_t)s[c];
            if (p == 0) {
                zero = 1;
                break;
            }
            q0 = q0 * lp_mod(p, LP_P0) % LP_P0;
            q1 = q1 * lp_mod(p, LP_P1) % LP_P1;
            q2 = q2 * lp_mod(p, LP_P2) % LP_P2;
            q3 = q3 * lp_mod(p, LP_P3) % LP_P3;
            q4 = q4 * lp_mod(p, LP_P4) % LP_P4;
        }
        if (zero)
            continue;
        if (sign > 0) {
            acc0 += q0; if (acc0 >= LP_P0) acc0 -= LP_P0;
            acc1 += q1; if (acc1 >= LP_P1) acc1 -= LP_P1;
            acc2 += q2; if (acc2 >= LP_P2) acc2 -= LP_P2;
            acc3 += q3; if (acc3 >= LP_P3) acc3 -= LP_P3;
            acc4 += q4; if (acc4 >= LP_P4) acc4 -= LP_P4;
        } else {
            acc0 -= q0; if (acc0 < 0) acc0 += LP_P0;
            acc1 -= q1; if (acc1 < 0) acc1 += LP_P1;
            acc2 -= q2; if (acc2 < 0) acc2 += LP_P2;
            acc3 -= q3; if (acc3 < 0) acc3 += LP_P3;
            acc4 -= q4; if (acc4 < 0) acc4 += LP_P4;
        }
    }
    out[0] = (uint64_t)acc0;
    out[1] = (uint64_t)acc1;
    out[2] = (uint64_t)acc2;
    out[3] = (uint64_t)acc3;
    out[4] = (uint64_t)acc4;
}

/* Depth-first enumeration of permutations, descending only through
 * nonzero entries; counts every sigma with prod a[i][sigma(i)] = 1. */
static uint64_t lp_brute_rec(const uint64_t *rows, int i, int n, uint64_t used)
{
    uint64_t avail, total = 0;
    if (i == n)
        return 1;
    avail = rows[i] & ~used;
    while (avail) {
        uint64_t b = avail & (~avail + 1);
        total += lp_brute_rec(rows, i + 1, n, used | b);
        avail ^= b;
    }
    return total;
}

static uint64_t lp_bruteforce(const uint64_t *rows, int n)
{
    return lp_brute_rec(rows, 0, n, 0);
}

#endif
