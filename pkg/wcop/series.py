"""Truncated power series: coefficient arrays in ascending order."""

import numpy as np

from nlab.exception import DomainError


def truncate(coeffs, size):
    out = np.zeros(size, dtype=complex)
    coeffs = np.asarray(coeffs, dtype=complex)[:size]
    out[:len(coeffs)] = coeffs
    return out


def multiply(a, b, size):
    return truncate(np.convolve(a, b), size)


def divide(num, den, size):
    """Coefficients of num/den; den[0] must be nonzero."""
    num = truncate(num, size)
    den = truncate(den, size)
    if den[0] == 0:
        raise DomainError("series division by a function vanishing at 0")

    out = np.zeros(size, dtype=complex)
    for k in range(size):
        # den[1..k] against out[k-1..0]
        acc = np.dot(den[1:k + 1], out[k - 1::-1]) if k else 0
        out[k] = (num[k] - acc) / den[0]
    return out


def rational_series(numerator, denominator, size):
    return divide(numerator, denominator, size)


def powers(base, count, size, first=None):
    """first * base^k for k = 0..count-1, one row per k."""
    rows = np.zeros((count, size), dtype=complex)
    current = truncate([1] if first is None else first, size)
    for k in range(count):
        rows[k] = current
        current = multiply(current, base, size)
    return rows


def evaluate(coeffs, z):
    return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), coeffs)


def cauchy_coefficients(func, size, radius=0.5, samples=None):
    """Taylor coefficients from the Cauchy integral on |z| = radius (trapezoid rule via FFT)."""
    samples = samples or max(4 * size, 256)
    theta = 2 * np.pi * np.arange(samples) / samples
    values = np.asarray(func(radius * np.exp(1j * theta)), dtype=complex)
    coeffs = np.fft.fft(values) / samples
    return coeffs[:size] / radius ** np.arange(size)
