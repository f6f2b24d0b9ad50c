"""Exception types shared across the package.

The CLI maps these onto exit codes: bad input -> 2, exceeded budgets -> 3,
failed verification or equivalence checks -> 1.
"""


class InputError(ValueError):
    """Malformed or out-of-contract input (rejected before any work is done)."""


class BudgetError(RuntimeError):
    """A configured work budget (search space, retries, materialization) was exceeded."""


class CertificationError(BudgetError):
    """A randomized construction failed to certify within its retry budget."""


class VerificationError(AssertionError):
    """A guarantee that should hold by construction was found violated."""


class DecodeDisagreementError(ValueError):
    """Tuple assignment is not a satisfying assignment: representatives disagree.

    Raised when decoding a host-graph assignment whose copies of the same
    source variable carry different values; the offending source vertex and
    the two conflicting host vertices are recorded.
    """

    def __init__(self, source_vertex: int, host_a: int, host_b: int):
        self.source_vertex = source_vertex
        self.host_a = host_a
        self.host_b = host_b
        super().__init__(
            f"not a satisfying assignment: source vertex {source_vertex} decodes "
            f"differently at host vertices {host_a} and {host_b}"
        )
