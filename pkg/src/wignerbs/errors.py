"""Exception types raised across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where the quantity is defined."""


class DimensionError(ValueError):
    """Operands live on incompatible truncations or grids."""


class DegenerateStateError(ValueError):
    """A state cannot be normalized (all amplitudes vanish)."""


class TagError(TypeError):
    """An operator carries the wrong kind tag for the requested operation."""


class WignerNegativeError(ValueError):
    """Shannon entropy requested for a field with genuine negative values."""

    def __init__(self, negative_volume, message=None):
        self.negative_volume = float(negative_volume)
        if message is None:
            message = (
                "field is Wigner-negative (negative volume "
                f"{self.negative_volume:.3e}); Shannon entropy is undefined"
            )
        super().__init__(message)


class RouteDisagreementError(RuntimeError):
    """Independent construction routes disagree beyond tolerance.

    Usually means the grid or Fock truncation is too small for the state.
    """

    def __init__(self, deviations, tolerance):
        self.deviations = dict(deviations)
        self.tolerance = tolerance
        worst = max(self.deviations.values())
        super().__init__(
            f"routes disagree: max deviation {worst:.3e} > {tolerance:.1e} "
            f"({self.deviations})"
        )


class StateSpecError(ValueError):
    """Malformed state-spec document."""
