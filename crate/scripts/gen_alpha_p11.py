#!/usr/bin/env python3
"""Write the alpha table of the Fricke-invariant function for p = 11.

G = q^-1 + sum alpha_n q^n is built as g / f with
  f = eta(tau)^2 eta(11 tau)^2                    (weight 2 cusp form)
  g = (11 E2(11 tau) - E2(tau)) / 10               (weight 2, holomorphic)
both Fricke-invariant of the same sign, so G is invariant under
tau -> -1/(11 tau) and has a simple pole at the cusp.

Usage: gen_alpha_p11.py [ORDER] > alpha_p11.txt
"""
import sys
from fractions import Fraction

P = 11


def eta_product(n):
    """prod_{k>=1} (1 - q^k) modulo q^(n+1)."""
    e = [0] * (n + 1)
    e[0] = 1
    for k in range(1, n + 1):
        for i in range(n, k - 1, -1):
            e[i] -= e[i - k]
    return e


def mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j in range(n + 1 - i):
                out[i + j] += x * b[j]
    return out


def sigma1(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def main():
    order = int(sys.argv[1]) if len(sys.argv) > 1 else 1452
    m = order + 1  # G needs g and 1/f up to q^(order + 1)
    e2 = [1] + [-24 * sigma1(n) for n in range(1, m + 1)]
    g10 = [P * e2[n // P] * (n % P == 0) - e2[n] for n in range(m + 1)]  # 10 g

    e = eta_product(m)
    e11 = [0] * (m + 1)
    for i in range(m // P + 1):
        e11[i * P] = e[i]
    f = mul(mul(e, e, m), mul(e11, e11, m), m)  # f / q

    inv = [0] * (m + 1)
    inv[0] = 1
    for n in range(1, m + 1):
        inv[n] = -sum(f[k] * inv[n - k] for k in range(1, n + 1) if f[k])

    big = mul(g10, inv, m)  # 10 q G
    assert big[0] == 10
    print(f"# alpha_n of the Fricke-invariant function on X_0({P}), generated by {sys.argv[0].split('/')[-1]}")
    print(f"{P} {order}")
    for n in range(order + 1):
        print(n, Fraction(big[n + 1], 10))


if __name__ == "__main__":
    main()
