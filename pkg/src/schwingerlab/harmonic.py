"""Exact representation of single-harmonic functions of z."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HarmonicCoefficient:
    """``A e^{ikz} + conj(A) e^{-ikz}`` (real), or with a minus sign when antihermitian.

    Vacuum expectations of commutators of Hermitian operators are purely
    imaginary, so the Schwinger term is stored with ``antihermitian=True`` and
    represents ``A e^{ikz} - conj(A) e^{-ikz}``.
    """

    amplitude: complex
    wavenumber: float
    antihermitian: bool = False

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        a = complex(self.amplitude)
        sign = -1.0 if self.antihermitian else 1.0
        return a * np.exp(1j * self.wavenumber * z) + sign * np.conj(a) * np.exp(-1j * self.wavenumber * z)

    @property
    def cos_part(self) -> float:
        a = complex(self.amplitude)
        return 2 * a.imag if self.antihermitian else 2 * a.real

    @property
    def sin_part(self) -> float:
        """Coefficient of sin(kz); multiplied by i for antihermitian functions."""
        a = complex(self.amplitude)
        return 2 * a.real if self.antihermitian else -2 * a.imag

    def scaled(self, factor: complex) -> HarmonicCoefficient:
        return HarmonicCoefficient(complex(self.amplitude) * factor, self.wavenumber, self.antihermitian)

    def times_i(self) -> HarmonicCoefficient:
        """Multiply the represented function by i, flipping its hermiticity."""
        return HarmonicCoefficient(1j * complex(self.amplitude), self.wavenumber, not self.antihermitian)

    def __add__(self, other: HarmonicCoefficient) -> HarmonicCoefficient:
        if self.wavenumber != other.wavenumber or self.antihermitian != other.antihermitian:
            raise ValueError("cannot add harmonics of different wavenumber or hermiticity")
        return HarmonicCoefficient(complex(self.amplitude) + complex(other.amplitude),
                                   self.wavenumber, self.antihermitian)

    def __abs__(self) -> float:
        return abs(complex(self.amplitude))

    def to_dict(self) -> dict:
        a = complex(self.amplitude)
        return {
            "amplitude_re": a.real,
            "amplitude_im": a.imag,
            "wavenumber": self.wavenumber,
            "antihermitian": self.antihermitian,
            "sin_part": self.sin_part,
            "cos_part": self.cos_part,
        }
