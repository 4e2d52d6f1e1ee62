class DmchainError(Exception):
    """
    Custom error type for dmchain operations.  Operations in `linalg`, `model`,
    `teleport`, etc, should throw `DmchainError` when asked to do something
    that has no meaningful answer, such as a critical temperature for `J = 0`
    or a sweep axis with `start >= stop`.  The CLI reports these as usage
    errors.

    If dmchain operations throw any kind of exception other than
    `DmchainError`, that indicates a bug in dmchain.
    """

    def __init__(self, message, params = None):
        super().__init__(message)
        self.message = message
        self.params = params

    def __str__(self):
        msg = self.message
        if self.params is not None:
            msg += f'\nparams: {self.params}'
        return msg


class ConvergenceError(DmchainError):
    """
    A numerical method ran out of iterations before reaching its tolerance.
    Unlike plain `DmchainError`, this points at the numerics rather than at
    the input.
    """
    pass
