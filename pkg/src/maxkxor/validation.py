"""Input validation helpers shared by the functional API and the estimators."""

import numbers

import numpy as np


def check_arity(k):
    if isinstance(k, bool) or not isinstance(k, numbers.Integral) or k < 2:
        raise ValueError(f"clause arity k must be an integer >= 2, got {k!r}")
    return int(k)


def check_nonneg_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
    return int(value)


def check_positive_int(value, name):
    value = check_nonneg_int(value, name)
    if value == 0:
        raise ValueError(f"{name} must be positive")
    return value


def check_angle(value, name):
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def check_assignment(x, n):
    """Return ``x`` as an int8 vector of +-1 values of length ``n``."""
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(f"assignment must have length {n}, got shape {arr.shape}")
    if not np.all((arr == 1) | (arr == -1)):
        raise ValueError("assignment entries must be +1 or -1")
    return arr.astype(np.int8)


def check_assignments(X, n):
    """2-D variant of :func:`check_assignment` (one assignment per row)."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != n:
        raise ValueError(f"assignments must have shape (n_samples, {n}), got {arr.shape}")
    if not np.all((arr == 1) | (arr == -1)):
        raise ValueError("assignment entries must be +1 or -1")
    return arr.astype(np.int8)


def make_rng(seed):
    """Counter-based generator: distinct seeds give independent, reproducible streams."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(seed))
