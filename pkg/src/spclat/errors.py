"""Exception hierarchy for the toolkit."""


class SpcError(Exception):
    pass


class PosetSyntaxError(SpcError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateLabel(PosetSyntaxError):
    pass


class UnknownLabel(PosetSyntaxError):
    pass


class CycleDetected(SpcError):
    """The declared order is not antisymmetric."""

    def __init__(self, a, b):
        self.pair = (a, b)
        super().__init__(f"cycle between {a!r} and {b!r}")


class NotAPartialOrder(SpcError):
    pass


class SizeGuardError(SpcError):
    def __init__(self, what, n, limit):
        self.n = n
        self.limit = limit
        super().__init__(
            f"{what}: n={n} exceeds the size guard {limit} (set SPC_SIZE_GUARD to override)"
        )


class ModeError(SpcError):
    pass


class NotSectionallyPseudocomplemented(SpcError):
    """Raised when some pair (a, b) has no sectional pseudocomplement."""

    def __init__(self, pair, labels=None):
        self.pair = pair
        if labels is not None:
            shown = (labels[pair[0]], labels[pair[1]])
        else:
            shown = pair
        super().__init__(f"no sectional pseudocomplement for pair {shown}")


class IllDefinedBlockStar(SpcError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"block star depends on representatives: {witness}")


class UnboundVariable(SpcError):
    pass


class GiveUp(SpcError):
    pass
