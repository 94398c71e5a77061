#!/usr/bin/env python3
"""Independent reference for the chaotic-map test vectors.

Pure-Python binary64 arithmetic (CPython floats are IEEE-754 doubles and
math.sin/cos/acos call the platform libm), kept deliberately separate from
the C++ code under test. Run it to regenerate the frozen vectors pasted
into tests/test_chaos.cpp and the acceptance suite.

mpmath (50 digits) cross-checks the single-step values so a libm bug or an
operation-order slip in this script would be caught; the long-orbit byte
vectors are binary64 by construction, since that is the contract.
"""

import math

try:
    import mpmath
    mpmath.mp.dps = 50
    HAVE_MPMATH = True
except ImportError:
    HAVE_MPMATH = False


def logistic_step(mu, x):
    return mu * x * (1.0 - x)


def sine_step(sigma, x):
    return sigma * math.sin(math.pi * x)


def chebyshev_step(theta, x):
    return math.cos(theta * math.acos(x))


def chebyshev_t5(x):
    # degree-5 Chebyshev polynomial identity, used as an independent route
    return 16.0 * x**5 - 20.0 * x**3 + 5.0 * x


def orbit(step, ctrl, x0, burn_in, n):
    x = x0
    for _ in range(burn_in):
        x = step(ctrl, x)
    out = []
    for _ in range(n):
        x = step(ctrl, x)
        out.append(x)
    return out


def to_byte(x, lo=-1.0):
    u = (x + 1.0) / 2.0 if lo < 0.0 else x
    return int(math.floor(u * 1.0e14)) % 256


def main():
    print("# single steps (17 significant digits)")
    print("logistic mu=3.601 x=0.1       ->", repr(logistic_step(3.601, 0.1)))
    x1 = logistic_step(3.601, 0.1)
    print("logistic second iterate       ->", repr(logistic_step(3.601, x1)))
    print("sine sigma=0.95 x=0.154       ->", repr(sine_step(0.95, 0.154)))
    print("chebyshev theta=5 x=0.165     ->", repr(chebyshev_step(5.0, 0.165)))
    print("chebyshev T5(0.165) identity  ->", repr(chebyshev_t5(0.165)))

    if HAVE_MPMATH:
        print("\n# mpmath 50-digit cross-checks")
        print("sine      ", mpmath.nstr(mpmath.mpf("0.95") * mpmath.sin(mpmath.pi * mpmath.mpf("0.154")), 20))
        print("chebyshev ", mpmath.nstr(mpmath.cos(5 * mpmath.acos(mpmath.mpf("0.165"))), 20))

    n = 32
    print("\n# golden keystream bytes, burn_in=1000, length", n)
    log_bytes = [to_byte(x, 0.0) for x in orbit(logistic_step, 3.601, 0.1, 1000, n)]
    sin_bytes = [to_byte(x, 0.0) for x in orbit(sine_step, 0.95, 0.154, 1000, n)]
    che_bytes = [to_byte(x, -1.0) for x in orbit(chebyshev_step, 5.0, 0.165, 1000, n)]
    print("logistic :", log_bytes)
    print("sine     :", sin_bytes)
    print("chebyshev:", che_bytes)

    print("\n# 2x2 grayscale golden ciphertext, plain=[10,20,30,40], logistic key above")
    k4 = log_bytes[:4]
    print("keystream[0:4] =", k4, " cipher =", [p ^ k for p, k in zip([10, 20, 30, 40], k4)])


if __name__ == "__main__":
    main()
