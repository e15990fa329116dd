"""Exception types shared across the package."""


class SchottkyError(Exception):
    """Base class for all domain errors."""


class InvalidArgumentError(SchottkyError, ValueError):
    """An argument violates a documented precondition."""


class ConfigurationRejectedError(SchottkyError):
    """Circle configuration fails a disjointness or positivity inequality.

    The message quotes the violated inequality with its numeric values.
    """

    def __init__(self, inequality: str):
        super().__init__(inequality)
        self.inequality = inequality


class NotALimitPointError(SchottkyError):
    """Encoding left the nested-arc system: the point is ordinary at this depth."""

    def __init__(self, depth: int, angle: float):
        super().__init__(
            f"point at angle {angle!r} lies in no generator arc after {depth} steps; "
            f"not a limit point reachable at this depth"
        )
        self.depth = depth
        self.angle = angle


class EncodingToleranceError(SchottkyError):
    """The point sits within tolerance of an arc endpoint; the symbol is ambiguous."""

    def __init__(self, depth: int, margin: float):
        super().__init__(
            f"encoding ambiguous at step {depth}: margin {margin!r} below tolerance"
        )
        self.depth = depth
        self.margin = margin


class NeedsMorePrefixError(SchottkyError):
    """Decoding ran out of symbols before reaching the requested diameter."""

    def __init__(self, reached_diameter: float, depth: int):
        super().__init__(
            f"sequence exhausted at depth {depth} with diameter {reached_diameter!r} "
            f"still above epsilon"
        )
        self.reached_diameter = reached_diameter
        self.depth = depth


class AmbiguousCrossingError(SchottkyError):
    """A ray meets a translate tangentially (or not at all) within tolerance."""


class AmbiguousConfigurationError(SchottkyError):
    """Geodesic endpoints coincide within tolerance; the predicate is undefined."""


class DSLSyntaxError(SchottkyError):
    """Sequence DSL parse failure, annotated with the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RenderDepthError(SchottkyError):
    """Scene depth guard tripped: the projected element count is too large."""

    def __init__(self, depth: int, projected: int):
        super().__init__(
            f"depth {depth} refused: projected {projected} circle elements exceeds guard"
        )
        self.depth = depth
        self.projected = projected
