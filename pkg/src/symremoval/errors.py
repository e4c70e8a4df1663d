"""Exception hierarchy shared by every module of the package."""


class RemovalLemmaError(Exception):
    """Base class for all errors raised by symremoval."""


class InputError(RemovalLemmaError, ValueError):
    """Malformed or inconsistent input data (CLI exit code 2)."""


class RepeatedCoordinate(InputError):
    pass


class UnknownVertex(InputError):
    pass


class BadEdgeType(InputError):
    pass


class PartMismatch(InputError):
    pass


class UniverseMismatch(InputError):
    pass


class NotAutomorphism(InputError):
    def __init__(self, generator_index, edge):
        self.generator_index = generator_index
        self.edge = edge
        super().__init__(
            f"generator #{generator_index} is not an automorphism: "
            f"edge {edge!r} is mapped outside the edge set"
        )


class BadModulus(InputError):
    pass


class NotClosed(InputError):
    pass


class NoIdentity(InputError):
    pass


class NoInverse(InputError):
    pass


class NotAssociative(InputError):
    pass


class UnknownElement(InputError):
    pass


class IdentityInConnectionSet(InputError):
    pass


class DiagonalPair(InputError):
    pass


class KernelMismatch(InputError):
    pass


class NotAbelian(InputError):
    pass


class CapExceeded(RemovalLemmaError):
    pass


class BudgetExceeded(RemovalLemmaError):
    """A search hit its node cap before finishing.

    ``nodes`` is the number of accepted search nodes at the moment the
    search was abandoned; no count is reported.
    """

    def __init__(self, message, nodes=0, budget=None):
        self.nodes = nodes
        self.budget = budget
        super().__init__(message)
