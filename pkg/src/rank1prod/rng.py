"""Splittable, reproducible random streams.

Every sampler in the package is a pure function of an explicit stream.
Gaussian variates are produced by Box-Muller from the stream's uniforms, so
a (seed, stream_id) pair reproduces identical output bit-for-bit regardless
of platform RNG details or how work is partitioned across threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class RngStream:
    """A named position in a family of statistically independent streams."""

    seed: int
    stream_id: int = 0

    def child(self, index: int) -> "RngStream":
        """Derive an independent substream; distinct indices never collide
        in practice (64-bit splitmix avalanche over (stream_id, index))."""
        mixed = _splitmix64((self.stream_id * 0x9E3779B97F4A7C15 + index + 1) & _MASK64)
        return RngStream(self.seed, mixed)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed & _MASK64,
                                    spawn_key=(self.stream_id & _MASK64,))
        return np.random.Generator(np.random.PCG64(ss))


def uniforms(gen: np.random.Generator, shape) -> np.ndarray:
    return gen.random(shape)


def normals(gen: np.random.Generator, shape) -> np.ndarray:
    """Standard normals via Box-Muller on the stream's uniforms."""
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    count = int(np.prod(shape)) if shape else 1
    pairs = (count + 1) // 2
    u1 = 1.0 - gen.random(pairs)  # in (0, 1]: log() stays finite
    u2 = gen.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return z[:count].reshape(shape)


def complex_normals(gen: np.random.Generator, shape) -> np.ndarray:
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    z = normals(gen, shape + (2,))
    return z[..., 0] + 1j * z[..., 1]
