"""Exception types shared across the toolkit."""


class ShapeError(ValueError):
    """Array dimensions are incompatible with the requested operation."""


class HermiticityError(ValueError):
    """Matrix expected to be Hermitian is not, within tolerance."""


class InputError(ValueError):
    """Input fails a validation precondition (normalization, trace, ...)."""


class OrthogonalSelectionError(ValueError):
    """Pre- and post-selected states are orthogonal; weak value undefined."""


class PostselectionImpossibleError(ValueError):
    """Postselection success probability vanishes."""


class ResolutionError(ValueError):
    """Probe grid does not resolve or cover the momentum density."""


class DegenerateModelError(ValueError):
    """Log-likelihood is -inf over the whole search interval."""


class ConfigError(ValueError):
    """Invalid CLI or config-file parameter."""
