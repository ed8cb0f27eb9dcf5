"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain a function supports."""


class ConvergenceError(ArithmeticError):
    """An iterative method failed to reach its tolerance."""


class RegimeError(ValueError):
    """Operation requested outside the c_h regime it applies to."""


class SingularityError(ArithmeticError):
    """Evaluation at (or numerically on top of) a pole or singular point."""


class LevelIndexError(IndexError):
    """Requested quantum number exceeds the number of bound states."""


class PoleError(SingularityError):
    """Green's function evaluated on one of its poles."""


class BracketError(ValueError):
    """Energy bracket outside the range where the quantization function is real."""


class MoleculeParseError(ValueError):
    """Malformed molecule file; ``lineno`` points at the offending line."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


class MissedRootWarning(UserWarning):
    """Root scan saw a pattern suggesting a near-tangent (double) root."""


class GridWarning(UserWarning):
    """Oracle levels moved more than allowed when the grid was refined."""


class LevelMismatchError(DomainError):
    """Supplied energy does not satisfy the quantization condition."""
