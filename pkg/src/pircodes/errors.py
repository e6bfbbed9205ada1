"""Exception hierarchy shared by every module.

The CLI maps the three top-level families onto exit codes:
parameter problems exit 2, failed verification exits 1, exhausted search
budgets exit 3.
"""


class PirError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class ParameterError(PirError, ValueError):
    exit_code = 2


class VerificationFailed(PirError):
    exit_code = 1


class SearchTimeout(PirError):
    """A search ran out of its node or time budget.

    ``depth`` is the deepest partial assignment reached.
    """

    exit_code = 3

    def __init__(self, message, depth=0, nodes=0):
        super().__init__(message)
        self.depth = depth
        self.nodes = nodes


class Unsat(PirError):
    """A search space was exhausted without a solution."""

    exit_code = 2


class ConstructionFailed(PirError):
    """Internal self-check of a construction failed; indicates a bug."""

    exit_code = 1


class ParseError(PirError, ValueError):
    exit_code = 2


# gf
class NotPrimePower(ParameterError):
    pass


class DivisionByZero(PirError, ZeroDivisionError):
    pass


class FieldMismatch(PirError, TypeError):
    pass


# geometry / resource guards
class ResourceGuard(ParameterError):
    pass


class QEven(ParameterError):
    pass


# packing
class PackingViolation(ParameterError):
    pass


class PartSizeOne(PackingViolation):
    def __init__(self, partition, part):
        super().__init__(f"partition {partition} has part {list(part)} of size < 2")
        self.partition = partition
        self.part = tuple(part)


class NotAPartition(PackingViolation):
    def __init__(self, partition, detail=""):
        super().__init__(f"partition {partition} is not a partition of the ground set{': ' + detail if detail else ''}")
        self.partition = partition
        self.detail = detail


class CrossIntersectionTooLarge(PackingViolation):
    def __init__(self, part_a, part_b, shared):
        super().__init__(
            f"parts {part_a} and {part_b} share {sorted(shared)} (more than one element)"
        )
        self.part_a = part_a
        self.part_b = part_b
        self.shared = tuple(sorted(shared))


class FactorTooSmall(ParameterError):
    pass


class NoFactorization(ParameterError):
    pass


class KTooLarge(ParameterError):
    pass


class HOutOfRange(ParameterError):
    pass


class ParametersInadmissible(ParameterError):
    pass


class NotConstructedAtDeskScale(ParameterError):
    pass


class NoValidPencilLine(ConstructionFailed):
    pass


class QEvenOrTooSmall(ParameterError):
    pass


class SingletonTrace(ParameterError):
    def __init__(self, partition, part, element):
        super().__init__(
            f"part {list(part)} of partition {partition} meets the subset only in {element}"
        )
        self.partition = partition
        self.part = tuple(part)
        self.element = element


class NoParameterFound(ParameterError):
    pass


# design
class NotAConfiguration(ParameterError):
    pass


class RepeatedDifference(ParameterError):
    def __init__(self, difference, witnesses):
        super().__init__(f"difference {difference} arises more than once: {witnesses}")
        self.difference = difference
        self.witnesses = witnesses


class NotHomogeneous(ParameterError):
    pass


# pircode
class IntersectionViolation(ParameterError):
    pass


class EmptySubset(ParameterError):
    pass


class DimensionMismatch(ParameterError):
    pass


class Overlap(ParameterError):
    pass
