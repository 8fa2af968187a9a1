"""Compensated Horner evaluation built on error-free transformations.

The result is as accurate as if Horner's rule ran in twice the working
precision and was then rounded.  Works elementwise on float or complex
scalars and arrays; complex products are split into their four real
products so every rounding error is captured.
"""

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    z = s - a
    return s, (a - (s - z)) + (b - z)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def _complex_two_prod(x, y):
    a, b = x.real, x.imag
    c, d = y.real, y.imag
    p1, e1 = two_prod(a, c)
    p2, e2 = two_prod(b, -d)
    p3, e3 = two_prod(a, d)
    p4, e4 = two_prod(b, c)
    re, e5 = two_sum(p1, p2)
    im, e6 = two_sum(p3, p4)
    return re + 1j * im, (e1 + e2 + e5) + 1j * (e3 + e4 + e6)


def _complex_two_sum(x, y):
    re, er = two_sum(x.real, y.real)
    im, ei = two_sum(x.imag, y.imag)
    return re + 1j * im, er + 1j * ei


def comp_horner(coeffs, x, tail=None):
    """Evaluate ``sum(coeffs[i] * x**(n-i))`` (highest power first).

    ``tail`` holds optional low-order parts of the coefficients (double-double
    input); they are folded into the correction term.

    >>> float(comp_horner([1.0, -2.0, 1.0], 1.0))
    0.0
    """
    coeffs = np.asarray(coeffs)
    x = np.asarray(x)
    cplx = np.iscomplexobj(x) or np.iscomplexobj(coeffs)
    if cplx:
        x = x.astype(complex)
        coeffs = coeffs.astype(complex)
        prod, add = _complex_two_prod, _complex_two_sum
    else:
        x = x.astype(float)
        coeffs = coeffs.astype(float)
        prod, add = two_prod, two_sum
    tail = np.zeros(coeffs.size) if tail is None else np.asarray(tail)
    s = np.zeros_like(x) + coeffs[0]
    c = np.zeros_like(s) + tail[0]
    for a, lo in zip(coeffs[1:], tail[1:]):
        p, pi = prod(s, x)
        s, sigma = add(p, np.zeros_like(p) + a)
        c = c * x + (pi + sigma + lo)
    out = s + c
    return out[()] if out.ndim == 0 else out


def horner(coeffs, x):
    """Plain Horner rule, same calling convention as ``comp_horner``."""
    x = np.asarray(x)
    s = np.zeros_like(x, dtype=np.result_type(x, np.asarray(coeffs))) + coeffs[0]
    for a in coeffs[1:]:
        s = s * x + a
    return s[()] if s.ndim == 0 else s


def condition_scale(coeffs, x):
    """``sum |coeffs[i]| |x|**(n-i)``, the natural scale for evaluation residuals."""
    return horner(np.abs(np.asarray(coeffs)), np.abs(np.asarray(x)))
