"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent arguments (lengths, moduli, indices)."""


class CapExceededError(ValueError):
    """An exhaustive computation was refused because it would exceed its cap."""


class UnverifiedGoodSetError(ValueError):
    """A builder was handed a good set that has not been verified."""


class GoodSetSearchError(RuntimeError):
    """Randomized good-set search gave up.

    ``best`` is the smallest worst-case squared cosine average seen over all
    attempts (1.0 if nothing was tried).
    """

    def __init__(self, message: str, best: float):
        super().__init__(message)
        self.best = best
