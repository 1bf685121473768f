"""Labeled synthetic signals with a controlled symbolic class separation."""
from __future__ import annotations

import numpy as np

from .core import TimeSeriesDataset, ValidationError

NOISE_SD = 0.2
OFFSET_WIDTHS = 3


def _span(offsets, wave, noise, amplitude):
    x = offsets + amplitude * wave + noise
    return x.max() - x.min()


def synth_dataset(
    classes=2,
    signals_per_class=10,
    length=100,
    seed=0,
    alphabet_size=26,
    periods=2.0,
):
    """Noisy random-phase sinusoids whose baselines step by ``c * delta``.

    ``delta`` equals three range widths of the grid fitted on the generated
    data: the sinusoid amplitude is solved by bisection so that the global
    span is exactly ``alphabet_size / 3`` offset units. Noise SD is
    ``0.2 * delta``. Labels are ``c0, c1, ...``.
    """
    if classes < 2:
        raise ValidationError("classes must be >= 2")
    if signals_per_class < 1 or length < 2:
        raise ValidationError("signals_per_class must be >= 1 and length >= 2")
    rng = np.random.default_rng(seed)
    n = classes * signals_per_class
    t = np.arange(length)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=(n, 1))
    wave = np.sin(2.0 * np.pi * periods * t / length + phase)
    noise = NOISE_SD * rng.standard_normal((n, length))
    offsets = np.repeat(np.arange(classes, dtype=np.float64), signals_per_class)[:, None]

    target = alphabet_size / OFFSET_WIDTHS
    if _span(offsets, wave, noise, 0.0) >= target:
        raise ValidationError(
            f"{classes} classes do not fit in {alphabet_size} ranges at "
            f"{OFFSET_WIDTHS} ranges per class step"
        )
    lo, hi = 0.0, 1.0
    while _span(offsets, wave, noise, hi) < target:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _span(offsets, wave, noise, mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    x = offsets + hi * wave + noise
    labels = [f"c{c}" for c in range(classes) for _ in range(signals_per_class)]
    ids = [f"syn{i:04d}" for i in range(n)]
    return TimeSeriesDataset.from_arrays(list(x), labels, ids)
