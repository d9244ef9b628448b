"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for geometric failure modes."""


class DomainError(GeometryError):
    """Parameter outside the configured interval or validity region."""


class DegenerateFrameError(GeometryError):
    """Frame vectors are numerically dependent or have the wrong signature."""


class DegenerateNormalError(GeometryError):
    """Tangent triple product is zero or lightlike; no unit normal exists."""


class DegenerateMetricError(GeometryError):
    """Induced metric is singular; the shape operator is undefined."""


class SpectralError(GeometryError):
    """Shape operator has a complex eigenvalue pair beyond tolerance."""


class SingularPointError(GeometryError):
    """Closed-form curvature denominator vanishes at the requested point."""


class ConfigError(Exception):
    """Invalid job configuration; carries the offending field path."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")
