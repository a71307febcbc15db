"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Physical or numerical parameters violate a precondition."""


class NonLatticeWavenumber(ConfigurationError):
    """Gauge wavenumber is not of the form 2*pi*j/L."""

    def __init__(self, k, ring_length):
        step = 2 * 3.141592653589793 / ring_length
        j = max(1, round(k / step))
        nearest = sorted({max(1, j - 1) * step, j * step, (j + 1) * step})
        self.nearest = nearest
        super().__init__(
            f"wavenumber k={k!r} is not a lattice wavenumber of a ring of length "
            f"{ring_length!r}; nearest lattice wavenumbers: "
            + ", ".join(f"{v:.12g}" for v in nearest)
        )


class MarginError(ConfigurationError):
    """Band edge sits fewer than k lattice steps inside the momentum cutoff."""

    def __init__(self, margin, required):
        self.margin = margin
        self.required = required
        super().__init__(
            f"band margin is {margin} lattice momenta but {required} are required "
            f"(shortfall {required - margin})"
        )


class PreconditionError(ValueError):
    """Operator identity check called on inputs that do not satisfy its premises."""

    def __init__(self, message, deviations=None):
        self.deviations = dict(deviations or {})
        super().__init__(message)
