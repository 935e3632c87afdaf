"""Independent oracle for the frozen L^imp(Delta, f11, 1, s=10) partial sum.

Delta and f11 come from eta products, multiplied as packed big integers
(Kronecker substitution) with gmpy2. The sum uses mpmath.

    python3 lvalue.py [n_max] [digits]
"""
import sys

import gmpy2
import mpmath

SLOT = 256


def pack(c):
    # sum c_i 2^(i SLOT), built from the positive and negative parts as bytes
    w = SLOT // 8
    pos = b"".join(max(v, 0).to_bytes(w, "little") for v in c)
    neg = b"".join(max(-v, 0).to_bytes(w, "little") for v in c)
    return gmpy2.mpz(int.from_bytes(pos, "little") - int.from_bytes(neg, "little"))


def unpack(x, n, slots):
    # every slot of x + offset lies in [0, 2^SLOT), so digits read off directly
    half = 1 << (SLOT - 1)
    x = x + pack([half] * slots)
    raw = x.to_bytes(slots * SLOT // 8 + 1, "little")
    w = SLOT // 8
    return [int.from_bytes(raw[i * w : (i + 1) * w], "little") - half for i in range(n)]


def mul(a, b, n):
    return unpack(pack(a) * pack(b), n, len(a) + len(b))


def euler_product(n, step=1):
    # prod (1 - q^(step m)) by the pentagonal number theorem
    c = [0] * n
    k = 0
    while True:
        hit = False
        for g in ((k * (3 * k - 1)) // 2, (k * (3 * k + 1)) // 2) if k else (0,):
            e = g * step
            if e < n:
                c[e] = -1 if k % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return c


def delta(n):
    p = euler_product(n)
    p2 = mul(p, p, n)
    p4 = mul(p2, p2, n)
    p8 = mul(p4, p4, n)
    p16 = mul(p8, p8, n)
    p24 = mul(p16, p8, n)
    return [0] + p24[: n - 1]


def f11(n):
    a = euler_product(n)
    b = euler_product(n, 11)
    ab = mul(a, b, n)
    return [0] + mul(ab, ab, n)[: n - 1]


def main():
    n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 10**5
    digits = int(sys.argv[2]) if len(sys.argv) > 2 else 60
    n = n_max + 1
    t, a = delta(n), f11(n)
    c = [0] * n
    m = 1
    while m * m <= n_max:
        if m % 11:
            w = m**12
            for k in range(1, n_max // (m * m) + 1):
                c[m * m * k] += w * t[k] * a[k]
        m += 1
    mpmath.mp.dps = digits + 10
    s = mpmath.fsum(mpmath.mpf(c[k]) / mpmath.mpf(k) ** 10 for k in range(1, n) if c[k])
    print(mpmath.nstr(s, digits))


if __name__ == "__main__":
    main()
